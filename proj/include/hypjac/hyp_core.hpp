#pragma once

/*
 * Gauss hypergeometric parameters and the direct power series.
 *
 * The series is only used where it converges quickly (inside the unit disk,
 * or when it terminates); everything else goes through the continued
 * fraction in cfrac.hpp.
 */

#include <complex>
#include <cstddef>
#include <optional>

namespace hypjac {

using complex = std::complex<double>;

inline constexpr double default_c_guard = 1e-9;
inline constexpr double default_disk_margin = 1e-3;
inline constexpr double default_series_tol = 1e-16;
inline constexpr std::size_t default_max_terms = 200000;

struct HypParams {
  complex a;
  complex b;
  complex c;
  bool is_real = false;
};

struct SeriesValue {
  complex value;
  std::size_t terms_used = 0;
  double truncation_estimate = 0.0;  // magnitude of the first omitted term
  bool converged = false;
};

/// If x is exactly 0, -1, -2, ... returns -x.
std::optional<long> nonpositive_integer(complex x);

/// Distance from x to the set {0, -1, -2, ...}.
double distance_to_nonpositive_integers(complex x);

HypParams validate_params(complex a, complex b, complex c, double c_guard = default_c_guard);

/// True when the series in z is a polynomial (a or b a nonpositive integer).
bool series_terminates(const HypParams& p);

SeriesValue hyp2f1_series(const HypParams& p, complex z, double tol = default_series_tol,
                          std::size_t max_terms = default_max_terms,
                          double disk_margin = default_disk_margin);

/// F(a,b,c;z) / F(a,b+1,c+1;z) from two series; the in-disk oracle.
complex ratio_series(const HypParams& p, complex z, double tol = default_series_tol);

/// |F(a,b,c;z) - F(a,b+1,c+1;z) + a(c-b)/(c(c+1)) z F(a+1,b+1,c+2;z)|
double contiguous_residual(const HypParams& p, complex z, double tol = default_series_tol);

}  // namespace hypjac
