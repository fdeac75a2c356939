#pragma once

/*
 * Real-parameter analysis of B(a,b,c;z).
 *
 * With real a, b, c every a_n is real and b_n^2 is real, negative at most
 * finitely often. A sign sequence eps_j absorbs the signs,
 *
 *   eps_j eps_{j+1} b_j^2 = btilde_j^2 > 0,   eps_j = 1 for j >= N,
 *
 * and eps_0 B is a generalized Nevanlinna function whose Pick kernel has at
 * most kappa = #{j < N : eps_j = -1} negative squares.
 */

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hypjac/hyp_core.hpp"

namespace hypjac {

/// 0 < a < c+1, 0 < b+1 < c+1, c > 0: every c_k < 0 and B is a Stieltjes transform.
bool stieltjes_check(const HypParams& p);

struct SignSignature {
  std::vector<int> epsilons;    // eps_0 .. eps_{length-1}; eps_j = 1 beyond
  std::size_t n = 0;            // stabilization index
  std::size_t kappa = 0;
  std::vector<double> btilde;   // sqrt|b_j^2|
  std::vector<double> b_sq;     // b_j^2
  std::vector<double> diag;     // a_j
  bool terminated = false;      // signature of the decoupled head block only
  std::size_t block_size = 0;   // order of that block when terminated

  int epsilon(std::size_t j) const { return j < epsilons.size() ? epsilons[j] : 1; }
};

/// Scans b_j^2 far enough to see every sign change (at least scan_limit
/// entries, and always past the index after which all factors are positive).
SignSignature sign_signature(const HypParams& p, std::size_t scan_limit = 4096);

/// Negative eigenvalues (below -tol * max(1, ||M||)) of the sampled Pick matrix
/// M_ij = (phi(z_i) - conj(phi(z_j))) / (z_i - conj(z_j)).
std::size_t negative_squares(std::span<const complex> points, std::span<const complex> values,
                             double tol = 1e-10);

struct KappaCertificate {
  bool kappa_bound_ok = false;
  std::size_t max_negatives_seen = 0;
  std::size_t kappa = 0;
  int epsilon0 = 1;
  std::size_t trials = 0;
  std::size_t sample_size = 0;
};

/// Random sample sets in [-4,4] x [0.3,3], seeded per trial from `seed`.
KappaCertificate kappa_certificate(const HypParams& p, std::size_t trials, std::size_t sample_size,
                                   std::uint64_t seed = 42);

using ComplexFunction = std::function<complex(complex)>;

/// z -> -eps / (z - gamma + eps delta^2 psi(z)).
ComplexFunction schur_step(ComplexFunction psi, int epsilon, double gamma, double delta);

/// eps_0 B rebuilt from the classical tail phi_N by N backward Schur steps.
/// The tail is the m-function of the Jacobi matrix starting at index N.
ComplexFunction schur_chain(const HypParams& p, const SignSignature& sig);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t order = 0;
};

/// Gauss rule of the real symmetric truncation J_N (Stieltjes case only).
Quadrature quadrature(const HypParams& p, std::size_t n);

struct HForm {
  Eigen::MatrixXd h;
  std::vector<int> g;  // diagonal of G

  /// max_{k,l} |(G H)_{kl} - (G H)_{lk}|, i.e. the failure of (Hx,y)_G = (x,Hy)_G.
  double g_symmetry_residual() const;
};

HForm build_h(const HypParams& p, std::size_t n);

/// ((H - z)^{-1} e, e)_G = eps_0 x_0 with (H - z) x = e.
complex h_m_function(const HypParams& p, complex z, std::size_t n);

}  // namespace hypjac
