#include "hypjac/real_classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hypjac/cfrac.hpp"
#include "hypjac/error.hpp"
#include "hypjac/jacobi_spectral.hpp"
#include "hypjac/tridiag.hpp"

namespace hypjac {

namespace {

constexpr std::size_t scan_hard_cap = std::size_t{1} << 24;

void require_real(const HypParams& p) {
  if (!p.is_real) throw Error(ErrorKind::not_real_params, "operation needs real a, b, c");
}

// Smallest j >= 0 with x + j + 1 > 0.
double first_positive_index(double x) {
  const double bound = -x - 1.0;
  return bound < 0.0 ? 0.0 : std::floor(bound) + 1.0;
}

// Index past which every factor of b_j^2 is positive.
std::size_t positivity_index(const HypParams& p) {
  const double a = p.a.real(), b = p.b.real(), c = p.c.real();
  double j0 = 0.0;
  for (double x : {a, c - b, b, c - a}) j0 = std::max(j0, first_positive_index(x));
  // c + 2j + 1 > 0
  const double half = -(c + 1.0) / 2.0;
  j0 = std::max(j0, half < 0.0 ? 0.0 : std::floor(half) + 1.0);
  if (j0 > static_cast<double>(scan_hard_cap)) {
    std::ostringstream os;
    os << "sign changes of b_j^2 extend past index " << scan_hard_cap;
    throw Error(ErrorKind::scan_exhausted, os.str());
  }
  return static_cast<std::size_t>(j0);
}

// m-function of the Jacobi matrix that starts at row `first` (classical tail).
ComplexFunction tail_m_function(const HypParams& p, std::size_t first) {
  struct Tail {
    std::vector<complex> diag, offdiag;
    bool exact = false;
  };
  auto data = std::make_shared<std::vector<Tail>>();
  std::size_t len = 64;
  for (;; len *= 2) {
    const JacobiCoeffs jc = offdiag_roots(jacobi_coeffs(p, first + len));
    Tail t;
    t.exact = jc.terminated_at.has_value();
    const std::size_t end = jc.length;
    t.diag.assign(jc.diag.begin() + static_cast<std::ptrdiff_t>(first), jc.diag.end());
    if (end > first + 1)
      t.offdiag.assign(jc.offdiag.begin() + static_cast<std::ptrdiff_t>(first),
                       jc.offdiag.begin() + static_cast<std::ptrdiff_t>(end - 1));
    data->push_back(std::move(t));
    if (data->back().exact || len >= max_truncation) break;
  }
  return [data](complex z) -> complex {
    auto solve = [z](const Tail& t) {
      std::vector<complex> shifted(t.diag);
      for (auto& v : shifted) v -= z;
      std::vector<complex> rhs(shifted.size(), 0.0);
      rhs[0] = 1.0;
      const TridiagSolution sol = solve_tridiagonal(t.offdiag, shifted, t.offdiag, rhs);
      if (!(sol.pivot_ratio <= near_singular_limit))
        throw Error(ErrorKind::near_singular, "tail resolvent is nearly singular");
      return sol.x[0];
    };
    complex prev = solve((*data)[0]);
    if ((*data)[0].exact) return prev;
    for (std::size_t i = 1; i < data->size(); ++i) {
      const complex cur = solve((*data)[i]);
      if ((*data)[i].exact || std::abs(cur - prev) <= 1e-15 * std::max(1.0, std::abs(cur))) return cur;
      prev = cur;
    }
    return prev;
  };
}

}  // namespace

bool stieltjes_check(const HypParams& p) {
  require_real(p);
  const double a = p.a.real(), b = p.b.real(), c = p.c.real();
  return 0.0 < a && a < c + 1.0 && 0.0 < b + 1.0 && b + 1.0 < c + 1.0 && c > 0.0;
}

SignSignature sign_signature(const HypParams& p, std::size_t scan_limit) {
  require_real(p);
  const std::size_t scan = std::max({scan_limit, positivity_index(p) + 1, std::size_t{1}});
  const JacobiCoeffs jc = jacobi_coeffs(p, scan);

  SignSignature sig;
  const std::size_t len = jc.length;
  sig.terminated = jc.terminated_at.has_value();
  sig.block_size = sig.terminated ? len : 0;
  const std::size_t bonds = sig.terminated ? *jc.terminated_at : len;
  if (!sig.terminated && jc.offdiag_sq[len - 1].real() < 0.0)
    throw Error(ErrorKind::scan_exhausted, "b_j^2 is still negative at the scan limit");

  sig.diag.resize(len);
  sig.b_sq.resize(len);
  sig.btilde.resize(len);
  for (std::size_t j = 0; j < len; ++j) {
    sig.diag[j] = jc.diag[j].real();
    sig.b_sq[j] = jc.offdiag_sq[j].real();
    sig.btilde[j] = std::sqrt(std::abs(sig.b_sq[j]));
  }

  sig.n = 0;
  for (std::size_t j = 0; j < bonds; ++j)
    if (sig.b_sq[j] < 0.0) sig.n = j + 1;

  sig.epsilons.assign(len, 1);
  for (std::size_t j = sig.n; j-- > 0;) sig.epsilons[j] = sig.b_sq[j] < 0.0 ? -sig.epsilons[j + 1] : sig.epsilons[j + 1];
  sig.kappa = static_cast<std::size_t>(std::count(sig.epsilons.begin(), sig.epsilons.begin() + static_cast<std::ptrdiff_t>(sig.n), -1));
  return sig;
}

std::size_t negative_squares(std::span<const complex> points, std::span<const complex> values, double tol) {
  if (points.size() != values.size() || points.empty())
    throw Error(ErrorKind::degenerate_samples, "need one value per sample point");
  const auto m = static_cast<Eigen::Index>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].imag() == 0.0) throw Error(ErrorKind::degenerate_samples, "sample point on the real axis");
    for (std::size_t k = 0; k < i; ++k)
      if (points[i] == points[k] || points[i] == std::conj(points[k]))
        throw Error(ErrorKind::degenerate_samples, "sample points coincide");
  }
  Eigen::MatrixXcd kernel(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto ui = static_cast<std::size_t>(i), uk = static_cast<std::size_t>(k);
      kernel(i, k) = (values[ui] - std::conj(values[uk])) / (points[ui] - std::conj(points[uk]));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kernel, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -tol * scale) ++count;
  return count;
}

KappaCertificate kappa_certificate(const HypParams& p, std::size_t trials, std::size_t sample_size,
                                   std::uint64_t seed) {
  const SignSignature sig = sign_signature(p);
  KappaCertificate out;
  out.kappa = sig.kappa;
  out.epsilon0 = sig.epsilon(0);
  out.trials = trials;
  out.sample_size = sample_size;
  out.kappa_bound_ok = true;

  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> xs(-4.0, 4.0), ys(0.3, 3.0);
    std::vector<complex> points, values;
    std::size_t attempts = 0;
    while (points.size() < sample_size) {
      if (++attempts > 100 * (sample_size + 1))
        throw Error(ErrorKind::no_convergence, "could not evaluate B at enough sample points");
      const complex z(xs(rng), ys(rng));
      try {
        const complex v = static_cast<double>(out.epsilon0) * b_function(p, z, BMethod::cf, 1e-13);
        if (!std::isfinite(std::abs(v))) continue;
        points.push_back(z);
        values.push_back(v);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::near_pole && e.kind() != ErrorKind::no_convergence) throw;
      }
    }
    const std::size_t count = negative_squares(points, values);
    out.max_negatives_seen = std::max(out.max_negatives_seen, count);
    if (count > out.kappa) out.kappa_bound_ok = false;
  }
  return out;
}

ComplexFunction schur_step(ComplexFunction psi, int epsilon, double gamma, double delta) {
  if (epsilon != 1 && epsilon != -1) throw Error(ErrorKind::invalid_argument, "epsilon must be +1 or -1");
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "delta must be positive");
  const double eps = epsilon;
  return [psi = std::move(psi), eps, gamma, delta](complex z) -> complex {
    const complex den = z - gamma + eps * delta * delta * psi(z);
    if (den == complex(0.0, 0.0)) {
      std::ostringstream os;
      os << "Schur step has a pole at z = " << z;
      throw Error(ErrorKind::near_pole, os.str());
    }
    return -eps / den;
  };
}

ComplexFunction schur_chain(const HypParams& p, const SignSignature& sig) {
  ComplexFunction phi = tail_m_function(p, sig.n);
  for (std::size_t j = sig.n; j-- > 0;) phi = schur_step(std::move(phi), sig.epsilon(j), sig.diag[j], sig.btilde[j]);
  return phi;
}

Quadrature quadrature(const HypParams& p, std::size_t n) {
  if (!stieltjes_check(p)) throw Error(ErrorKind::not_stieltjes, "parameters violate 0<a<c+1, 0<b+1<c+1, c>0");
  const TruncatedJacobi j = build_truncated(p, n);
  const auto order = static_cast<Eigen::Index>(j.order);
  Eigen::VectorXd diag(order), sub(std::max<Eigen::Index>(order - 1, 0));
  for (Eigen::Index k = 0; k < order; ++k) diag(k) = j.diag[static_cast<std::size_t>(k)].real();
  for (Eigen::Index k = 0; k + 1 < order; ++k) sub(k) = j.offdiag[static_cast<std::size_t>(k)].real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::eigensolver_failure, "tridiagonal QL failed");

  Quadrature q;
  q.order = j.order;
  for (Eigen::Index k = 0; k < order; ++k) {
    q.nodes.push_back(es.eigenvalues()(k));
    const double v0 = es.eigenvectors()(0, k);
    q.weights.push_back(v0 * v0);
  }
  return q;
}

double HForm::g_symmetry_residual() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    for (Eigen::Index l = 0; l < h.cols(); ++l) {
      const double gh_kl = g[static_cast<std::size_t>(k)] * h(k, l);
      const double gh_lk = g[static_cast<std::size_t>(l)] * h(l, k);
      worst = std::max(worst, std::abs(gh_kl - gh_lk));
    }
  return worst;
}

HForm build_h(const HypParams& p, std::size_t n) {
  const SignSignature sig = sign_signature(p, std::max<std::size_t>(4096, n));
  if (n < sig.n) {
    std::ostringstream os;
    os << "order " << n << " is below the stabilization index " << sig.n;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  const std::size_t order = sig.terminated ? std::min(n, sig.block_size) : n;
  HForm out;
  const auto m = static_cast<Eigen::Index>(order);
  out.h = Eigen::MatrixXd::Zero(m, m);
  out.g.resize(order);
  for (std::size_t k = 0; k < order; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out.g[k] = sig.epsilon(k);
    out.h(i, i) = sig.diag[k];
    if (k + 1 < order) {
      out.h(i, i + 1) = sig.btilde[k];
      out.h(i + 1, i) = sig.epsilon(k) * sig.epsilon(k + 1) * sig.btilde[k];
    }
  }
  return out;
}

complex h_m_function(const HypParams& p, complex z, std::size_t n) {
  const HForm form = build_h(p, n);
  const auto m = static_cast<std::size_t>(form.h.rows());
  std::vector<complex> sub(m > 0 ? m - 1 : 0), diag(m), super(m > 0 ? m - 1 : 0), rhs(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    diag[k] = form.h(i, i) - z;
    if (k + 1 < m) {
      super[k] = form.h(i, i + 1);
      sub[k] = form.h(i + 1, i);
    }
  }
  rhs[0] = 1.0;
  const TridiagSolution sol = solve_tridiagonal(sub, diag, super, rhs);
  if (!(sol.growth <= near_singular_limit) || !(sol.pivot_ratio <= near_singular_limit))
    throw Error(ErrorKind::near_singular, "H - z is nearly singular");
  return static_cast<double>(form.g[0]) * sol.x[0];
}

}  // namespace hypjac
