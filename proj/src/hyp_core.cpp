#include "hypjac/hyp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypjac/error.hpp"

namespace hypjac {

std::optional<long> nonpositive_integer(complex x) {
  if (x.imag() != 0.0) return std::nullopt;
  const double re = x.real();
  if (re > 0.0 || re != std::floor(re) || re < -static_cast<double>(std::numeric_limits<long>::max()))
    return std::nullopt;
  return static_cast<long>(-re);
}

double distance_to_nonpositive_integers(complex x) {
  const double nearest = std::min(0.0, std::round(x.real()));
  return std::abs(x - complex(nearest, 0.0));
}

HypParams validate_params(complex a, complex b, complex c, double c_guard) {
  const bool finite = std::isfinite(a.real()) && std::isfinite(a.imag()) && std::isfinite(b.real()) &&
                      std::isfinite(b.imag()) && std::isfinite(c.real()) && std::isfinite(c.imag());
  if (!finite) throw Error(ErrorKind::invalid_argument, "parameters must be finite");
  if (distance_to_nonpositive_integers(c) <= c_guard) {
    std::ostringstream os;
    os << "c = " << c << " is within " << c_guard << " of a nonpositive integer";
    throw Error(ErrorKind::c_nonpositive_integer, os.str());
  }
  HypParams p{a, b, c, false};
  p.is_real = a.imag() == 0.0 && b.imag() == 0.0 && c.imag() == 0.0;
  return p;
}

bool series_terminates(const HypParams& p) {
  return nonpositive_integer(p.a).has_value() || nonpositive_integer(p.b).has_value();
}

SeriesValue hyp2f1_series(const HypParams& p, complex z, double tol, std::size_t max_terms,
                          double disk_margin) {
  const bool terminates = series_terminates(p);
  if (!terminates && std::abs(z) >= 1.0 - disk_margin) {
    std::ostringstream os;
    os << "|z| = " << std::abs(z) << " is outside the disk of radius " << 1.0 - disk_margin;
    throw Error(ErrorKind::outside_disk, os.str());
  }

  // Summed in extended precision: for complex parameters the terms can exceed
  // the sum by several orders of magnitude before they decay.
  using lcomplex = std::complex<long double>;
  const lcomplex a(p.a), b(p.b), c(p.c), x(z);
  SeriesValue out;
  lcomplex term = 1.0L;
  lcomplex sum = 1.0L;
  long double largest = 1.0L;
  std::size_t n = 0;
  while (true) {
    const long double k = static_cast<long double>(n);
    const lcomplex next = term * (a + k) * (b + k) * x / ((c + k) * (k + 1.0L));
    if (next == lcomplex(0.0L, 0.0L)) {
      // exact termination (polynomial case or z == 0)
      out.value = complex(sum);
      out.terms_used = n + 1;
      out.truncation_estimate = 0.0;
      out.converged = true;
      return out;
    }
    largest = std::max(largest, std::abs(next));
    const long double ratio = std::max<long double>(std::abs(next) / std::abs(term), std::abs(z));
    if (!terminates && ratio < 1.0L) {
      // geometric estimate of the whole tail, relative to the sum, floored at
      // the rounding level of the largest term
      const long double tail = std::abs(next) / (1.0L - ratio);
      if (tail <= tol * std::abs(sum) || tail <= std::numeric_limits<long double>::epsilon() * largest) {
        out.value = complex(sum);
        out.terms_used = n + 1;
        out.truncation_estimate = static_cast<double>(std::abs(next));
        out.converged = true;
        return out;
      }
    }
    if (n + 1 >= max_terms) {
      std::ostringstream os;
      os << "series did not converge in " << max_terms << " terms (last term " << std::abs(next) << ")";
      throw Error(ErrorKind::no_convergence, os.str());
    }
    sum += next;
    term = next;
    ++n;
  }
}

complex ratio_series(const HypParams& p, complex z, double tol) {
  const HypParams shifted = validate_params(p.a, p.b + 1.0, p.c + 1.0);
  const complex num = hyp2f1_series(p, z, tol).value;
  const complex den = hyp2f1_series(shifted, z, tol).value;
  if (std::abs(den) < 1e3 * std::numeric_limits<double>::min())
    throw Error(ErrorKind::denominator_zero, "F(a,b+1,c+1;z) vanishes to working precision");
  return num / den;
}

double contiguous_residual(const HypParams& p, complex z, double tol) {
  const HypParams p1 = validate_params(p.a, p.b + 1.0, p.c + 1.0);
  const HypParams p2 = validate_params(p.a + 1.0, p.b + 1.0, p.c + 2.0);
  const complex coef = p.a * (p.c - p.b) / (p.c * (p.c + 1.0));
  const complex f0 = hyp2f1_series(p, z, tol).value;
  const complex f1 = hyp2f1_series(p1, z, tol).value;
  // the last series is scaled by coef * z, so its truncation must be tighter
  const complex f2 = hyp2f1_series(p2, z, tol / std::max(1.0, std::abs(coef * z))).value;
  return std::abs(f0 - f1 + coef * z * f2);
}

}  // namespace hypjac
