#include "hypjac/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypjac/cfrac.hpp"
#include "hypjac/error.hpp"
#include "hypjac/jacobi_spectral.hpp"
#include "hypjac/real_classify.hpp"

namespace hypjac {

namespace {

CheckResult make(std::string name, double metric, double threshold, bool passed, std::string note = {}) {
  return {std::move(name), passed, false, metric, threshold, std::move(note)};
}

CheckResult skipped(std::string name, std::string note) {
  CheckResult r;
  r.name = std::move(name);
  r.passed = true;
  r.skipped = true;
  r.note = std::move(note);
  return r;
}

std::vector<complex> joukowski_ring(double rho, std::size_t count, double offset) {
  std::vector<complex> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = offset + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    const complex xi = std::polar(rho, theta);
    out.push_back(xi + 1.0 / xi);
  }
  return out;
}

}  // namespace

std::vector<complex> even_part_points() {
  return {{3.0, 1.0}, {-3.0, 0.5}, {0.0, 2.0}, {-2.5, -1.0}, {4.0, 0.0},
          {-4.0, 0.0}, {1.0, 2.0}, {0.5, -1.5}, {5.0, 5.0}, {-1.0, -3.0}};
}

std::vector<complex> off_band_grid() {
  auto grid = joukowski_ring(2.0, 25, 0.1);
  const auto outer = joukowski_ring(3.0, 25, 0.2);
  grid.insert(grid.end(), outer.begin(), outer.end());
  return grid;
}

std::vector<complex> in_disk_grid() {
  std::vector<complex> out{0.0};
  for (double r : {0.2, 0.4, 0.6, 0.8})
    for (int k = 0; k < 6; ++k) out.push_back(std::polar(r, 0.3 + std::numbers::pi * k / 3.0));
  return out;
}

std::vector<complex> upper_half_plane_grid() {
  std::vector<complex> out;
  for (int i = 0; i < 10; ++i)
    for (double y : {0.25, 0.5, 1.0, 2.0, 4.0}) out.emplace_back(-3.0 + 6.0 * i / 9.0, y);
  return out;
}

CheckResult check_moment_matching(const HypParams& p) {
  const auto s = moment_oracle(p, 3);
  const JacobiCoeffs jc = jacobi_coeffs(p, 2);
  const complex a0 = jc.diag[0];
  const complex b0sq = jc.offdiag_sq[0];
  const complex a1 = jc.length > 1 ? jc.diag[1] : complex(0.0);
  const complex expected[3] = {a0, a0 * a0 + b0sq, a0 * a0 * a0 + 2.0 * a0 * b0sq + a1 * b0sq};
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    worst = std::max(worst, std::abs(s[static_cast<std::size_t>(k + 1)] - expected[k]) /
                                std::max(1.0, std::abs(s[static_cast<std::size_t>(k + 1)])));
  worst = std::max(worst, std::abs(s[0] - 1.0));
  return make("moment_matching", worst, 1e-10, worst <= 1e-10);
}

CheckResult check_even_part(const HypParams& p, std::size_t n_max) {
  const complex d1 = -c_coeff(p, 1);
  if (d1 == complex(0.0, 0.0)) return skipped("even_part_identity", "d_1 = 0, B is defined by its tail only");
  double worst = 0.0;
  std::size_t poles = 0;
  for (const auto& z : even_part_points())
    for (std::size_t n = 1; n <= n_max; ++n) {
      try {
        const complex jf = approximant(p, FractionKind::j_fraction, n, z);
        const complex sf = approximant(p, FractionKind::s_fraction, 2 * n, (z - 2.0) / 4.0);
        const complex from_s = -(sf - 1.0) / (4.0 * d1);
        worst = std::max(worst, std::abs(jf - from_s) / std::abs(jf));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::pole_of_approximant) throw;
        ++poles;
      }
    }
  std::string note = poles ? std::to_string(poles) + " approximant poles skipped" : "";
  return make("even_part_identity", worst, 1e-12, worst <= 1e-12, note);
}

CheckResult check_in_disk(const HypParams& p) {
  double worst = 0.0;
  for (const auto& z : in_disk_grid()) {
    const complex cf = cf_ratio_eval(p, z, 1e-15).value;
    const complex rs = ratio_series(p, z);
    worst = std::max(worst, std::abs(cf - rs) / std::abs(rs));
  }
  return make("in_disk_agreement", worst, 1e-10, worst <= 1e-10);
}

CheckResult check_method_agreement(const HypParams& p) {
  double worst = 0.0;
  std::size_t skipped_points = 0;
  for (const auto& z : off_band_grid()) {
    try {
      const complex cf = b_function(p, z, BMethod::cf, 1e-14);
      const complex rs = b_function(p, z, BMethod::resolvent, 1e-14);
      worst = std::max(worst, std::abs(cf - rs) / std::max(1.0, std::abs(cf)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::near_pole && e.kind() != ErrorKind::near_singular) throw;
      ++skipped_points;
    }
  }
  std::string note = skipped_points ? std::to_string(skipped_points) + " points at poles skipped" : "";
  return make("method_agreement", worst, 1e-9, worst <= 1e-9, note);
}

CheckResult check_lieb_thirring(const HypParams& p, std::size_t n, double tol) {
  const LiebThirring lt = lieb_thirring_check(p, n, tol);
  std::ostringstream os;
  os.precision(17);
  os << "distance_sum " << lt.lhs << ", trace bound " << lt.rhs;
  return make("lieb_thirring", lt.lhs - lt.rhs, 1e-9, lt.holds, os.str());
}

CheckResult check_conjugate_pairing(const HypParams& p, std::size_t n, double tol) {
  if (!p.is_real) return skipped("conjugate_pairing", "complex parameters");
  const SpectralResult res = discrete_spectrum(p, n, tol);
  std::size_t unpaired = 0;
  for (const auto& lambda : res.eigenvalues) {
    if (lambda.imag() == 0.0) continue;
    const auto mine = std::count(res.eigenvalues.begin(), res.eigenvalues.end(), lambda);
    const auto theirs = std::count(res.eigenvalues.begin(), res.eigenvalues.end(), std::conj(lambda));
    if (mine != theirs) ++unpaired;
  }
  return make("conjugate_pairing", static_cast<double>(unpaired), 0.0, unpaired == 0);
}

CheckResult check_pole_budget(const HypParams& p, std::size_t n, double tol) {
  if (!p.is_real) return skipped("nonreal_pole_budget", "complex parameters");
  const SignSignature sig = sign_signature(p);
  const SpectralResult res = discrete_spectrum(p, n, tol);
  const auto nonreal = std::count_if(res.eigenvalues.begin(), res.eigenvalues.end(),
                                     [](complex v) { return v.imag() != 0.0; });
  const double budget = 2.0 * static_cast<double>(sig.kappa);
  return make("nonreal_pole_budget", static_cast<double>(nonreal), budget, static_cast<double>(nonreal) <= budget);
}

CheckResult check_g_symmetry(const HypParams& p, std::size_t n) {
  if (!p.is_real) return skipped("g_symmetry", "complex parameters");
  const SignSignature sig = sign_signature(p);
  const HForm form = build_h(p, std::max(n, sig.n));
  const double norm = form.h.cwiseAbs().rowwise().sum().maxCoeff();
  const double residual = form.g_symmetry_residual();
  return make("g_symmetry", residual, 1e-15 * norm, residual <= 1e-15 * norm);
}

CheckResult check_schur_chain(const HypParams& p) {
  if (!p.is_real) return skipped("schur_chain", "complex parameters");
  const SignSignature sig = sign_signature(p);
  const ComplexFunction chain = schur_chain(p, sig);
  double worst = 0.0;
  std::size_t skipped_points = 0;
  for (const auto& z : joukowski_ring(2.5, 20, 0.05)) {
    try {
      const complex ref = static_cast<double>(sig.epsilon(0)) * b_function(p, z, BMethod::cf, 1e-14);
      worst = std::max(worst, std::abs(chain(z) - ref) / std::max(1.0, std::abs(ref)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::near_pole && e.kind() != ErrorKind::near_singular) throw;
      ++skipped_points;
    }
  }
  std::string note = skipped_points ? std::to_string(skipped_points) + " points at poles skipped" : "";
  return make("schur_chain", worst, 1e-10, worst <= 1e-10, note);
}

CheckResult check_kappa_bound(const HypParams& p, std::size_t trials, std::size_t samples, std::uint64_t seed) {
  if (!p.is_real) return skipped("kappa_bound", "complex parameters");
  const KappaCertificate cert = kappa_certificate(p, trials, samples, seed);
  std::ostringstream os;
  os << "kappa " << cert.kappa << ", max negative squares seen " << cert.max_negatives_seen;
  return make("kappa_bound", static_cast<double>(cert.max_negatives_seen), static_cast<double>(cert.kappa),
              cert.kappa_bound_ok, os.str());
}

CheckResult check_nevanlinna_positivity(const HypParams& p) {
  if (!p.is_real || !stieltjes_check(p)) return skipped("nevanlinna_positivity", "not a Stieltjes triple");
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& z : upper_half_plane_grid()) lowest = std::min(lowest, b_function(p, z, BMethod::cf, 1e-14).imag());
  return make("nevanlinna_positivity", lowest, -1e-12, lowest >= -1e-12);
}

CheckResult check_quadrature(const HypParams& p, std::size_t n) {
  if (!p.is_real || !stieltjes_check(p)) return skipped("quadrature", "not a Stieltjes triple");
  const std::size_t order = std::min<std::size_t>(n, 32);
  const Quadrature q = quadrature(p, order);
  const TruncatedJacobi j = build_truncated(p, order);

  bool ok = true;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    ok = ok && q.weights[i] > 0.0 && q.nodes[i] >= -2.0 - 1e-8 && q.nodes[i] <= 2.0 + 1e-8;
    weight_sum += q.weights[i];
  }
  ok = ok && std::abs(weight_sum - 1.0) <= 1e-12;

  // <J^k e, e> against the quadrature sums, k <= 2N - 1
  std::vector<double> v(j.order, 0.0);
  v[0] = 1.0;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 <= 2 * j.order; ++k) {
    double quad = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      quad += q.weights[i] * std::pow(q.nodes[i], static_cast<double>(k));
      scale += q.weights[i] * std::pow(std::abs(q.nodes[i]), static_cast<double>(k));
    }
    worst = std::max(worst, std::abs(quad - v[0]) / std::max(1.0, scale));
    std::vector<double> next(j.order, 0.0);
    for (std::size_t r = 0; r < j.order; ++r) {
      next[r] = j.diag[r].real() * v[r];
      if (r > 0) next[r] += j.offdiag[r - 1].real() * v[r - 1];
      if (r + 1 < j.order) next[r] += j.offdiag[r].real() * v[r + 1];
    }
    v = std::move(next);
  }
  ok = ok && worst <= 1e-10;
  std::ostringstream os;
  os.precision(17);
  os << "weight sum " << weight_sum << ", order " << q.order;
  return make("quadrature", worst, 1e-10, ok, os.str());
}

std::vector<CheckResult> run_all_checks(const HypParams& p, std::size_t n, double tol, std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_moment_matching(p));
  out.push_back(check_even_part(p));
  out.push_back(check_in_disk(p));
  out.push_back(check_method_agreement(p));
  out.push_back(check_lieb_thirring(p, n, tol));
  out.push_back(check_conjugate_pairing(p, n, tol));
  out.push_back(check_pole_budget(p, n, tol));
  out.push_back(check_g_symmetry(p, n));
  out.push_back(check_schur_chain(p));
  out.push_back(check_kappa_bound(p, 50, 6, seed));
  out.push_back(check_nevanlinna_positivity(p));
  out.push_back(check_quadrature(p, n));
  return out;
}

}  // namespace hypjac
