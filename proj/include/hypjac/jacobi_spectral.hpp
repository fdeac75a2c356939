#pragma once

/*
 * Truncated complex Jacobi matrices built from the J-fraction of B(a,b,c;z),
 * their m-function, and the discrete spectrum off the band [-2, 2].
 *
 * Poles of B outside [-2, 2] are eigenvalues of J, and w = -4/(lambda - 2)
 * maps each of them to a zero of F(a,b+1,c+1;w) off the cut [1, inf).
 */

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hypjac/cfrac.hpp"
#include "hypjac/hyp_core.hpp"

namespace hypjac {

inline constexpr double default_band_guard = 1e-6;
inline constexpr double default_spectrum_tol = 1e-8;
inline constexpr std::size_t default_truncation = 256;
inline constexpr std::size_t max_truncation = 4096;
inline constexpr double near_singular_limit = 1e12;

/// Exact distance from z to the segment [-2, 2].
double distance_to_band(complex z);

struct TruncatedJacobi {
  std::size_t order = 0;
  std::vector<complex> diag;     // a_0 .. a_{order-1}
  std::vector<complex> offdiag;  // b_0 .. b_{order-2}
  std::vector<complex> offdiag_sq;
  HypParams source;
  bool terminated = false;  // true when order is the decoupled head block

  Eigen::MatrixXcd dense() const;
};

TruncatedJacobi build_truncated(const HypParams& p, std::size_t n);

/// <(J_N - z)^{-1} e, e> by a pivoted tridiagonal solve.
complex m_function(const TruncatedJacobi& j, complex z);
complex m_function(const HypParams& p, complex z, std::size_t n);

enum class BMethod { cf, resolvent };

/// B(a,b,c;z). The resolvent method doubles the truncation from 32 until two
/// successive values agree to tol (capped at max_truncation).
complex b_function(const HypParams& p, complex z, BMethod method, double tol = 1e-12);

struct SpectralResult {
  std::vector<complex> eigenvalues;  // retained, repeated by multiplicity
  std::vector<complex> discarded;    // off-band but unstable between truncations
  double distance_sum = 0.0;
  double trace_bound = 0.0;
  std::size_t n_used = 0;
  std::size_t n_check = 0;
  std::size_t merged_clusters = 0;  // groups of eigenvalues closer than 1e-6
  double max_residual = 0.0;        // max ||J v - lambda v|| / ||J|| over retained pairs
  bool terminated = false;
};

/// Eigenvalues of J_N and J_{2N} off the band that agree within tol.
SpectralResult discrete_spectrum(const HypParams& p, std::size_t n = default_truncation,
                                 double tol = default_spectrum_tol,
                                 double band_guard = default_band_guard);

/// All eigenvalues of a truncation (no filtering).
std::vector<complex> truncation_eigenvalues(const TruncatedJacobi& j);

/// Upper estimate of ||J - J_0||_1: explicit sum over the first K entries and a
/// tail from the coefficient formulas.
double trace_norm_bound(const HypParams& p, std::size_t k);

struct LiebThirring {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

LiebThirring lieb_thirring_check(const HypParams& p, std::size_t n = default_truncation,
                                 double tol = default_spectrum_tol);

enum class ZeroTarget {
  shifted,   // zeros of F(a,b+1,c+1;w)
  function,  // zeros of F(a,b,c;w), via the pipeline at (a, b-1, c-1)
};

std::vector<complex> hyp_zeros(const HypParams& p, std::size_t n = default_truncation,
                               ZeroTarget target = ZeroTarget::shifted,
                               double tol = default_spectrum_tol);

}  // namespace hypjac
