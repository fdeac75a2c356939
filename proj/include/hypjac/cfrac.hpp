#pragma once

/*
 * Continued fractions for F(a,b,c;z) / F(a,b+1,c+1;z).
 *
 *   C-fraction   1 + c_1 z/(1 + c_2 z/(1 + ...))
 *   S-fraction   1 + d_1/(s + d_2/(1 + d_3/(s + ...))),  d_j = -c_j, z = -1/s
 *   J-fraction   B(z) = -1/(z - a_0 - b_0^2/(z - a_1 - b_1^2/(z - ...)))
 *
 * with B(a,b,c;z) = -(R(w) - 1)/(4 d_1), w = -4/(z - 2). The J-fraction is the
 * even part of the S-fraction after s = (z - 2)/4:
 *
 *   a_0 = 2 - 4 d_2,   a_n = 2 - 4 d_{2n+1} - 4 d_{2n+2},   b_n^2 = 16 d_{2n+2} d_{2n+3}.
 */

#include <complex>
#include <cstddef>
#include <mutex>
#include <optional>
#include <vector>

#include "hypjac/hyp_core.hpp"

namespace hypjac {

inline constexpr double default_cf_tol = 1e-14;
inline constexpr std::size_t default_cf_max_depth = std::size_t{1} << 18;
inline constexpr double default_cut_guard = 1e-9;

/// c_j for j >= 1. Exactly zero iff one of its numerator factors is exactly zero.
complex c_coeff(const HypParams& p, std::size_t j);

/// Lazily extended cache of c_j. Extension is serialized by an internal mutex,
/// so a stream may be shared between threads.
class CoeffStream {
 public:
  explicit CoeffStream(const HypParams& p);
  CoeffStream(const CoeffStream& other);
  CoeffStream& operator=(const CoeffStream&) = delete;

  const HypParams& params() const { return params_; }

  complex c(std::size_t j) const;
  complex d(std::size_t j) const { return -c(j); }

  /// Smallest j in [from, upto] with c_j == 0, if any.
  std::optional<std::size_t> first_zero(std::size_t from, std::size_t upto) const;

 private:
  void extend_to(std::size_t j) const;

  HypParams params_;
  mutable std::mutex mutex_;
  mutable std::vector<complex> cache_;  // cache_[j-1] = c_j
};

struct CFValue {
  complex value;
  std::size_t depth_used = 0;
  double last_correction = 0.0;
  bool converged = false;
};

/// Distance from z to the cut [1, inf).
double distance_to_cut(complex z);

/// Backward evaluation of 1 + c_start z/(1 + c_{start+1} z/(1 + ... c_depth z/1)).
/// Returns 1 when start > depth.
complex cf_tail(const CoeffStream& stream, std::size_t start, std::size_t depth, complex z);

/// R(z) = F(a,b,c;z)/F(a,b+1,c+1;z) by the C-fraction with depth doubling.
CFValue cf_ratio_eval(const HypParams& p, complex z, double tol = default_cf_tol,
                      std::size_t max_depth = default_cf_max_depth);

/// Maps between the J-fraction variable and the hypergeometric argument.
inline complex to_hyp_argument(complex z) { return -4.0 / (z - 2.0); }
inline complex from_hyp_argument(complex w) { return 2.0 - 4.0 / w; }

/// B(a,b,c;z) from the C-fraction tail, B = w / (4 (1 + c_2 w/(1 + c_3 w/(1 + ...)))).
/// Agrees with -(R(w) - 1)/(4 d_1) and stays defined when d_1 = 0.
CFValue cf_b_eval(const HypParams& p, complex z, double tol = default_cf_tol,
                  std::size_t max_depth = default_cf_max_depth);

enum class RootPolicy {
  principal,     // principal square root at every index
  continuation,  // principal past the stabilization point, then the root nearest its successor
};

enum class RootBranch { principal, negated };

struct JacobiCoeffs {
  std::vector<complex> diag;        // a_0 .. a_{length-1}
  std::vector<complex> offdiag_sq;  // b_0^2 .. b_{length-1}^2 (last one is 0 when terminated)
  std::vector<complex> offdiag;     // chosen roots, filled by offdiag_roots
  std::vector<RootBranch> branches;
  std::size_t length = 0;
  std::optional<std::size_t> terminated_at;  // first n with b_n^2 == 0
};

JacobiCoeffs jacobi_coeffs(const HypParams& p, std::size_t n_max);
JacobiCoeffs jacobi_coeffs(const CoeffStream& stream, std::size_t n_max);

/// First index k such that Re b_j^2 > 0 for every computed j >= k.
std::size_t stabilization_index(const JacobiCoeffs& coeffs);

JacobiCoeffs offdiag_roots(JacobiCoeffs coeffs, RootPolicy policy = RootPolicy::principal);

enum class FractionKind { c_fraction, s_fraction, j_fraction };

/// n-th approximant of the chosen fraction in its own variable: w for the
/// C-fraction, s for the S-fraction (value of R(-1/s)), z for the J-fraction
/// (value of B). Terminating fractions stop at their last nonzero numerator.
complex approximant(const HypParams& p, FractionKind kind, std::size_t n, complex x);

/// Moments s_0..s_order of B(z) = -sum_k s_k z^{-k-1}, from power-series
/// arithmetic on the hypergeometric series in 1/z alone.
std::vector<complex> moment_oracle(const HypParams& p, std::size_t order);

}  // namespace hypjac
