#include "hypjac/jacobi_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hypjac/error.hpp"
#include "hypjac/tridiag.hpp"

extern "C" {
void zhseqr_(const char* job, const char* compz, const int* n, const int* ilo, const int* ihi,
             std::complex<double>* h, const int* ldh, std::complex<double>* w, std::complex<double>* z,
             const int* ldz, std::complex<double>* work, const int* lwork, int* info);
}

namespace hypjac {

namespace {

bool complex_less(complex x, complex y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

double jacobi_norm(const TruncatedJacobi& j) {
  double norm = 0.0;
  for (std::size_t k = 0; k < j.order; ++k) {
    double row = std::abs(j.diag[k]);
    if (k > 0) row += std::abs(j.offdiag[k - 1]);
    if (k + 1 < j.order) row += std::abs(j.offdiag[k]);
    norm = std::max(norm, row);
  }
  return norm;
}

// det(lambda - J_k) by the three-term recurrence, with its derivative; both
// rescaled together so only the ratio is meaningful.
std::pair<complex, complex> char_poly(const TruncatedJacobi& j, complex lambda) {
  complex p_prev = 1.0, p = lambda - j.diag[0];
  complex q_prev = 0.0, q = 1.0;
  for (std::size_t k = 1; k < j.order; ++k) {
    const complex bsq = j.offdiag_sq[k - 1];
    const complex p_next = (lambda - j.diag[k]) * p - bsq * p_prev;
    const complex q_next = p + (lambda - j.diag[k]) * q - bsq * q_prev;
    p_prev = p;
    p = p_next;
    q_prev = q;
    q = q_next;
    const double scale = std::max(std::abs(p), std::abs(q));
    if (scale > 1e100) {
      p /= scale;
      q /= scale;
      p_prev /= scale;
      q_prev /= scale;
    }
  }
  return {p, q};
}

complex newton_polish(const TruncatedJacobi& j, complex lambda) {
  for (int it = 0; it < 5; ++it) {
    const auto [p, q] = char_poly(j, lambda);
    if (q == complex(0.0, 0.0)) break;
    const complex step = p / q;
    if (!std::isfinite(std::abs(step)) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(lambda))) break;
    lambda -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(lambda))) break;
  }
  return lambda;
}

// ||J v - lambda v|| / (||v|| ||J||) with v from the backward (minimal) recurrence.
double eigen_residual(const TruncatedJacobi& j, complex lambda) {
  const std::size_t n = j.order;
  std::vector<complex> v(n, 0.0);
  v[n - 1] = 1.0;
  if (n > 1) v[n - 2] = (lambda - j.diag[n - 1]) * v[n - 1] / j.offdiag[n - 2];
  for (std::size_t k = n > 2 ? n - 2 : 0; k-- > 0;) {
    v[k] = ((lambda - j.diag[k + 1]) * v[k + 1] - j.offdiag[k + 1] * v[k + 2]) / j.offdiag[k];
    const double mag = std::abs(v[k]);
    if (mag > 1e100)
      for (std::size_t i = k; i < n; ++i) v[i] /= mag;
  }
  double vnorm = 0.0, rnorm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    complex r = (j.diag[k] - lambda) * v[k];
    if (k > 0) r += j.offdiag[k - 1] * v[k - 1];
    if (k + 1 < n) r += j.offdiag[k] * v[k + 1];
    rnorm += std::norm(r);
    vnorm += std::norm(v[k]);
  }
  const double jn = std::max(jacobi_norm(j), std::numeric_limits<double>::min());
  return std::sqrt(rnorm / vnorm) / jn;
}

}  // namespace

double distance_to_band(complex z) {
  const double x = std::clamp(z.real(), -2.0, 2.0);
  return std::abs(z - complex(x, 0.0));
}

Eigen::MatrixXcd TruncatedJacobi::dense() const {
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    m(k, k) = diag[static_cast<std::size_t>(k)];
    if (k + 1 < n) {
      m(k, k + 1) = offdiag[static_cast<std::size_t>(k)];
      m(k + 1, k) = offdiag[static_cast<std::size_t>(k)];
    }
  }
  return m;
}

TruncatedJacobi build_truncated(const HypParams& p, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "truncation order must be at least 1");
  const JacobiCoeffs jc = offdiag_roots(jacobi_coeffs(p, n));
  TruncatedJacobi j;
  j.source = p;
  j.order = jc.length;
  j.terminated = jc.terminated_at.has_value();
  j.diag = jc.diag;
  j.offdiag.assign(jc.offdiag.begin(), jc.offdiag.begin() + static_cast<std::ptrdiff_t>(j.order - 1));
  j.offdiag_sq.assign(jc.offdiag_sq.begin(), jc.offdiag_sq.begin() + static_cast<std::ptrdiff_t>(j.order - 1));
  return j;
}

complex m_function(const TruncatedJacobi& j, complex z) {
  std::vector<complex> shifted(j.diag);
  for (auto& v : shifted) v -= z;
  std::vector<complex> rhs(j.order, 0.0);
  rhs[0] = 1.0;
  const TridiagSolution sol = solve_tridiagonal(j.offdiag, shifted, j.offdiag, rhs);
  if (!(sol.growth <= near_singular_limit) || !(sol.pivot_ratio <= near_singular_limit)) {
    std::ostringstream os;
    os << "J - z is nearly singular at z = " << z << " (growth " << sol.growth << ", pivot ratio "
       << sol.pivot_ratio << ")";
    throw Error(ErrorKind::near_singular, os.str());
  }
  return sol.x[0];
}

complex m_function(const HypParams& p, complex z, std::size_t n) {
  return m_function(build_truncated(p, n), z);
}

complex b_function(const HypParams& p, complex z, BMethod method, double tol) {
  if (distance_to_band(z) <= default_cut_guard) {
    std::ostringstream os;
    os << "z = " << z << " lies on the band [-2, 2]";
    throw Error(ErrorKind::on_band, os.str());
  }
  if (method == BMethod::cf) return cf_b_eval(p, z, tol).value;

  std::size_t n = 32;
  TruncatedJacobi j = build_truncated(p, n);
  complex prev = m_function(j, z);
  if (j.terminated) return prev;
  double correction = std::numeric_limits<double>::infinity();
  for (n *= 2; n <= max_truncation; n *= 2) {
    j = build_truncated(p, n);
    const complex cur = m_function(j, z);
    if (j.terminated) return cur;
    correction = std::abs(cur - prev);
    if (correction <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  std::ostringstream os;
  os << "resolvent did not settle by N = " << max_truncation << " (last correction " << correction << ")";
  throw Error(ErrorKind::no_convergence, os.str());
}

std::vector<complex> truncation_eigenvalues(const TruncatedJacobi& j) {
  const auto n = static_cast<Eigen::Index>(j.order);
  std::vector<complex> out;
  out.reserve(j.order);

  bool real_source = j.source.is_real;
  bool all_positive = real_source;
  for (const auto& bsq : j.offdiag_sq) {
    if (bsq.imag() != 0.0) real_source = all_positive = false;
    if (!(bsq.real() > 0.0)) all_positive = false;
  }

  if (all_positive) {
    Eigen::VectorXd diag(n), sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index k = 0; k < n; ++k) diag(k) = j.diag[static_cast<std::size_t>(k)].real();
    for (Eigen::Index k = 0; k + 1 < n; ++k) sub(k) = std::sqrt(j.offdiag_sq[static_cast<std::size_t>(k)].real());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::eigensolver_failure, "tridiagonal QL failed");
    for (Eigen::Index k = 0; k < n; ++k) out.emplace_back(es.eigenvalues()(k), 0.0);
    return out;
  }

  Eigen::MatrixXcd h = j.dense();
  int order = static_cast<int>(n), ilo = 1, ldz = 1, lwork = std::max(1, 11 * order), info = 0;
  std::vector<complex> w(j.order), work(static_cast<std::size_t>(lwork));
  complex z = 0.0;
  zhseqr_("E", "N", &order, &ilo, &order, h.data(), &order, w.data(), &z, &ldz, work.data(), &lwork, &info);
  if (info != 0) throw Error(ErrorKind::eigensolver_failure, "complex Schur iteration failed");
  // the real-coefficient spectrum is conjugation symmetric; roundoff-sized
  // imaginary parts belong to real eigenvalues
  if (real_source)
    for (auto& v : w)
      if (std::abs(v.imag()) <= 1e-13 * std::max(1.0, std::abs(v))) v.imag(0.0);
  return w;
}

SpectralResult discrete_spectrum(const HypParams& p, std::size_t n, double tol, double band_guard) {
  TruncatedJacobi j1 = build_truncated(p, n);
  if (!j1.terminated && n < 8) throw Error(ErrorKind::invalid_argument, "truncation order must be at least 8");

  SpectralResult res;
  TruncatedJacobi j2 = j1;
  if (!j1.terminated) j2 = build_truncated(p, 2 * n);
  res.terminated = j2.terminated;
  res.n_used = j2.order;
  res.n_check = j2.terminated ? j2.order : j1.order;

  // For real parameters only the closed upper half-plane is processed and the
  // result is mirrored, which keeps conjugate pairs exact.
  const bool mirror = p.is_real;
  auto keep_half = [&](const std::vector<complex>& all) {
    std::vector<complex> out;
    for (const auto& v : all)
      if (!mirror || v.imag() >= 0.0) out.push_back(v);
    std::sort(out.begin(), out.end(), complex_less);
    return out;
  };

  std::future<std::vector<complex>> coarse;
  if (!j2.terminated) coarse = std::async(std::launch::async, [&j1] { return truncation_eigenvalues(j1); });

  std::vector<complex> candidates;
  for (const auto& v : keep_half(truncation_eigenvalues(j2)))
    if (distance_to_band(v) > band_guard) candidates.push_back(newton_polish(j2, v));

  std::vector<complex> retained;
  if (j2.terminated) {
    retained = candidates;
  } else {
    std::vector<complex> reference;
    for (const auto& v : keep_half(coarse.get()))
      reference.push_back(distance_to_band(v) > band_guard ? newton_polish(j1, v) : v);
    std::vector<bool> used(reference.size(), false);
    for (const auto& lambda : candidates) {
      std::size_t best = reference.size();
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = std::abs(reference[i] - lambda);
        if (!used[i] && d < best_dist) {
          best_dist = d;
          best = i;
        }
      }
      if (best < reference.size() && best_dist <= tol * std::max(1.0, std::abs(lambda))) {
        used[best] = true;
        retained.push_back(lambda);
      } else {
        res.discarded.push_back(lambda);
      }
    }
    for (std::size_t i = 0; i < reference.size(); ++i)
      if (!used[i] && distance_to_band(reference[i]) > band_guard) res.discarded.push_back(reference[i]);
  }

  for (const auto& lambda : retained) res.max_residual = std::max(res.max_residual, eigen_residual(j2, lambda));

  if (mirror) {
    auto add_conjugates = [](std::vector<complex>& v) {
      const std::size_t count = v.size();
      for (std::size_t i = 0; i < count; ++i)
        if (v[i].imag() > 0.0) v.push_back(std::conj(v[i]));
    };
    add_conjugates(retained);
    add_conjugates(res.discarded);
  }

  // merge near-coincident eigenvalues, keeping multiplicity
  std::sort(retained.begin(), retained.end(), complex_less);
  std::vector<bool> assigned(retained.size(), false);
  for (std::size_t i = 0; i < retained.size(); ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cluster{i};
    assigned[i] = true;
    for (std::size_t k = i + 1; k < retained.size(); ++k)
      if (!assigned[k] && std::abs(retained[k] - retained[i]) <= 1e-6) {
        cluster.push_back(k);
        assigned[k] = true;
      }
    if (cluster.size() > 1) {
      complex mean = 0.0;
      for (auto idx : cluster) mean += retained[idx];
      mean /= static_cast<double>(cluster.size());
      for (auto idx : cluster) retained[idx] = mean;
      ++res.merged_clusters;
    }
  }
  std::sort(retained.begin(), retained.end(), complex_less);
  std::sort(res.discarded.begin(), res.discarded.end(), complex_less);

  res.eigenvalues = std::move(retained);
  for (const auto& lambda : res.eigenvalues) res.distance_sum += distance_to_band(lambda);
  res.trace_bound = trace_norm_bound(p, std::max<std::size_t>(n, 1));
  return res;
}

double trace_norm_bound(const HypParams& p, std::size_t k) {
  const std::size_t head = std::max<std::size_t>(k, 1);
  const std::size_t m = std::max<std::size_t>(64 * head, 1024);
  const JacobiCoeffs jc = offdiag_roots(jacobi_coeffs(p, m));

  // |a_k| on the diagonal and 2|b_k - 1| for each symmetric off-diagonal pair
  auto entry = [&](std::size_t i) {
    double e = std::abs(jc.diag[i]);
    if (!jc.terminated_at || i < *jc.terminated_at) e += 2.0 * std::abs(jc.offdiag[i] - 1.0);
    return e;
  };

  double sum = 0.0;
  for (std::size_t i = 0; i < jc.length; ++i) sum += entry(i);
  if (jc.terminated_at) {
    // the decoupled tail is compared with the free matrix: one broken bond b_t = 0
    return sum + 2.0;
  }
  // dominating C/k^2 tail past the explicitly summed range
  double c = 0.0;
  for (std::size_t i = m / 2; i < m; ++i) {
    const double idx = static_cast<double>(i);
    c = std::max(c, idx * idx * entry(i));
  }
  // i^2 |entry| approaches its limit like 1/i; extrapolate so the constant
  // is not taken from below
  auto scaled = [&](std::size_t i) { return static_cast<double>(i) * static_cast<double>(i) * entry(i); };
  c = std::max(c, 2.0 * scaled(m - 1) - scaled((m - 1) / 2));
  return sum + c / static_cast<double>(m - 1);
}

LiebThirring lieb_thirring_check(const HypParams& p, std::size_t n, double tol) {
  const SpectralResult res = discrete_spectrum(p, n, tol);
  LiebThirring out;
  out.lhs = res.distance_sum;
  out.rhs = res.trace_bound;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

std::vector<complex> hyp_zeros(const HypParams& p, std::size_t n, ZeroTarget target, double tol) {
  HypParams q = p;
  if (target == ZeroTarget::function) {
    try {
      q = validate_params(p.a, p.b - 1.0, p.c - 1.0);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::c_nonpositive_integer) throw;
      std::ostringstream os;
      os << "c - 1 = " << p.c - 1.0 << " is a nonpositive integer";
      throw Error(ErrorKind::shift_invalid, os.str());
    }
  }
  const SpectralResult res = discrete_spectrum(q, n, tol);
  std::vector<complex> zeros;
  zeros.reserve(res.eigenvalues.size());
  for (const auto& lambda : res.eigenvalues) zeros.push_back(to_hyp_argument(lambda));
  std::sort(zeros.begin(), zeros.end(), complex_less);
  return zeros;
}

}  // namespace hypjac
