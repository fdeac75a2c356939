#pragma once

/*
 * Invariant suite for a single parameter triple, shared by `hypjac check`
 * and the acceptance tests. Each check reports its worst observed metric
 * against a fixed threshold.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hypjac/hyp_core.hpp"

namespace hypjac {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double metric = 0.0;
  double threshold = 0.0;
  std::string note;
};

/// 10 fixed points, all at distance >= 0.5 from [-2, 2].
std::vector<complex> even_part_points();
/// 50 points on the images of |xi| = 2 and |xi| = 3 under xi + 1/xi.
std::vector<complex> off_band_grid();
/// 25 points in |z| <= 0.8.
std::vector<complex> in_disk_grid();
/// 50 points with Im z in [0.25, 4].
std::vector<complex> upper_half_plane_grid();

CheckResult check_moment_matching(const HypParams& p);
CheckResult check_even_part(const HypParams& p, std::size_t n_max = 30);
CheckResult check_in_disk(const HypParams& p);
CheckResult check_method_agreement(const HypParams& p);
CheckResult check_lieb_thirring(const HypParams& p, std::size_t n, double tol);
CheckResult check_conjugate_pairing(const HypParams& p, std::size_t n, double tol);
CheckResult check_pole_budget(const HypParams& p, std::size_t n, double tol);
CheckResult check_g_symmetry(const HypParams& p, std::size_t n);
CheckResult check_schur_chain(const HypParams& p);
CheckResult check_kappa_bound(const HypParams& p, std::size_t trials, std::size_t samples, std::uint64_t seed);
CheckResult check_nevanlinna_positivity(const HypParams& p);
CheckResult check_quadrature(const HypParams& p, std::size_t n);

/// Every check that applies to p (real-only and Stieltjes-only checks are
/// skipped otherwise).
std::vector<CheckResult> run_all_checks(const HypParams& p, std::size_t n, double tol, std::uint64_t seed);

}  // namespace hypjac
