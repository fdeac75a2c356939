#include "hypjac/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypjac/error.hpp"

namespace hypjac {

namespace {

constexpr double tiny = 1e-300;
constexpr double pole_guard = 1e-14;

complex guarded(complex t) { return t == complex(0.0, 0.0) ? complex(tiny, 0.0) : t; }

double distance_to_segment(complex z, double lo, double hi) {
  const double x = std::clamp(z.real(), lo, hi);
  return std::abs(z - complex(x, 0.0));
}

using Series = std::vector<complex>;

Series series_mul(const Series& f, const Series& g) {
  Series out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; i + j < f.size(); ++j) out[i + j] += f[i] * g[j];
  return out;
}

Series series_div(const Series& f, const Series& g) {
  Series q(f.size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    complex acc = f[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= g[i] * q[k - i];
    q[k] = acc / g[0];
  }
  return q;
}

// F(a,b,c; w(u)) as a power series in u, with w(u) given by its coefficients.
Series compose_hyp(complex a, complex b, complex c, const Series& w) {
  Series result(w.size(), 0.0);
  Series power(w.size(), 0.0);
  power[0] = 1.0;
  complex tau = 1.0;
  result[0] = 1.0;
  for (std::size_t n = 1; n < w.size(); ++n) {
    const double k = static_cast<double>(n - 1);
    tau *= (a + k) * (b + k) / ((c + k) * static_cast<double>(n));
    power = series_mul(power, w);
    for (std::size_t i = 0; i < w.size(); ++i) result[i] += tau * power[i];
  }
  return result;
}

}  // namespace

complex c_coeff(const HypParams& p, std::size_t j) {
  if (j == 0) throw Error(ErrorKind::invalid_argument, "c_j is defined for j >= 1");
  if (j % 2 == 1) {
    const double m = static_cast<double>((j - 1) / 2);
    return -((p.a + m) * (p.c - p.b + m)) / ((p.c + 2.0 * m) * (p.c + 2.0 * m + 1.0));
  }
  const double m = static_cast<double>(j / 2);
  return -((p.b + m) * (p.c - p.a + m)) / ((p.c + 2.0 * m - 1.0) * (p.c + 2.0 * m));
}

CoeffStream::CoeffStream(const HypParams& p) : params_(p) {}

CoeffStream::CoeffStream(const CoeffStream& other) : params_(other.params_) {
  std::lock_guard lock(other.mutex_);
  cache_ = other.cache_;
}

void CoeffStream::extend_to(std::size_t j) const {
  if (cache_.size() >= j) return;
  std::size_t target = std::max<std::size_t>(j, 2 * cache_.size());
  cache_.reserve(target);
  for (std::size_t k = cache_.size() + 1; k <= target; ++k) cache_.push_back(c_coeff(params_, k));
}

complex CoeffStream::c(std::size_t j) const {
  if (j == 0) throw Error(ErrorKind::invalid_argument, "c_j is defined for j >= 1");
  std::lock_guard lock(mutex_);
  extend_to(j);
  return cache_[j - 1];
}

std::optional<std::size_t> CoeffStream::first_zero(std::size_t from, std::size_t upto) const {
  if (from == 0) from = 1;
  if (from > upto) return std::nullopt;
  std::lock_guard lock(mutex_);
  extend_to(upto);
  for (std::size_t j = from; j <= upto; ++j)
    if (cache_[j - 1] == complex(0.0, 0.0)) return j;
  return std::nullopt;
}

double distance_to_cut(complex z) {
  const double x = std::max(z.real(), 1.0);
  return std::abs(z - complex(x, 0.0));
}

complex cf_tail(const CoeffStream& stream, std::size_t start, std::size_t depth, complex z) {
  complex t = 1.0;
  for (std::size_t j = depth; j >= start && j >= 1; --j) {
    t = 1.0 + stream.c(j) * z / guarded(t);
    if (j == start) break;
  }
  return t;
}

namespace {

// Depth-doubling driver shared by the ratio and the B evaluation. `eval`
// maps a depth to a value; `zero_from` is the first coefficient index whose
// vanishing terminates the fraction.
template <typename Eval>
CFValue drive_depth_doubling(const CoeffStream& stream, std::size_t zero_from, double tol,
                             std::size_t max_depth, Eval eval) {
  std::size_t depth = 8;
  if (auto zero = stream.first_zero(zero_from, depth)) {
    const std::size_t used = *zero - 1;
    return {eval(used), std::max<std::size_t>(used, 1), 0.0, true};
  }
  complex prev = eval(depth);
  double correction = std::numeric_limits<double>::infinity();
  while (true) {
    const std::size_t next = depth * 2;
    if (next > max_depth) {
      std::ostringstream os;
      os << "continued fraction did not settle by depth " << depth
         << " (last correction " << correction << ")";
      throw Error(ErrorKind::no_convergence, os.str());
    }
    if (auto zero = stream.first_zero(depth + 1, next)) {
      const std::size_t used = *zero - 1;
      return {eval(used), used, 0.0, true};
    }
    const complex cur = eval(next);
    correction = std::abs(cur - prev);
    if (correction <= tol * std::max(1.0, std::abs(cur))) return {cur, next, correction, true};
    prev = cur;
    depth = next;
  }
}

}  // namespace

CFValue cf_ratio_eval(const HypParams& p, complex z, double tol, std::size_t max_depth) {
  if (distance_to_cut(z) <= default_cut_guard) {
    std::ostringstream os;
    os << "z = " << z << " lies on the cut [1, inf)";
    throw Error(ErrorKind::on_cut, os.str());
  }
  if (z == complex(0.0, 0.0)) return {1.0, 1, 0.0, true};
  const CoeffStream stream(p);
  return drive_depth_doubling(stream, 1, tol, max_depth,
                              [&](std::size_t depth) { return cf_tail(stream, 1, depth, z); });
}

CFValue cf_b_eval(const HypParams& p, complex z, double tol, std::size_t max_depth) {
  if (distance_to_segment(z, -2.0, 2.0) <= default_cut_guard) {
    std::ostringstream os;
    os << "z = " << z << " lies on the band [-2, 2]";
    throw Error(ErrorKind::on_band, os.str());
  }
  const complex w = to_hyp_argument(z);
  const CoeffStream stream(p);
  auto eval = [&](std::size_t depth) -> complex {
    const complex denom = cf_tail(stream, 2, depth, w);
    if (std::abs(denom) <= pole_guard * std::abs(w) * 1e-2) {
      std::ostringstream os;
      os << "z = " << z << " is a pole of B";
      throw Error(ErrorKind::near_pole, os.str());
    }
    return w / (4.0 * denom);
  };
  return drive_depth_doubling(stream, 2, tol, max_depth, eval);
}

JacobiCoeffs jacobi_coeffs(const HypParams& p, std::size_t n_max) {
  return jacobi_coeffs(CoeffStream(p), n_max);
}

JacobiCoeffs jacobi_coeffs(const CoeffStream& stream, std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorKind::invalid_argument, "n_max must be at least 1");
  JacobiCoeffs out;
  out.diag.reserve(n_max);
  out.offdiag_sq.reserve(n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    const complex a_n = n == 0 ? 2.0 - 4.0 * stream.d(2)
                               : 2.0 - 4.0 * stream.d(2 * n + 1) - 4.0 * stream.d(2 * n + 2);
    const complex b_sq = 16.0 * stream.d(2 * n + 2) * stream.d(2 * n + 3);
    out.diag.push_back(a_n);
    out.offdiag_sq.push_back(b_sq);
    if (b_sq == complex(0.0, 0.0)) {
      out.terminated_at = n;
      break;
    }
  }
  out.length = out.diag.size();
  return out;
}

std::size_t stabilization_index(const JacobiCoeffs& coeffs) {
  std::size_t end = coeffs.terminated_at ? *coeffs.terminated_at : coeffs.offdiag_sq.size();
  std::size_t k = end;
  while (k > 0 && coeffs.offdiag_sq[k - 1].real() > 0.0) --k;
  return k;
}

JacobiCoeffs offdiag_roots(JacobiCoeffs coeffs, RootPolicy policy) {
  const std::size_t count = coeffs.offdiag_sq.size();
  coeffs.offdiag.assign(count, 0.0);
  coeffs.branches.assign(count, RootBranch::principal);
  const std::size_t stable = stabilization_index(coeffs);
  for (std::size_t k = count; k-- > 0;) {
    const complex root = std::sqrt(coeffs.offdiag_sq[k]);
    if (policy == RootPolicy::continuation && k < stable && k + 1 < count &&
        coeffs.offdiag[k + 1] != complex(0.0, 0.0) &&
        std::abs(-root - coeffs.offdiag[k + 1]) < std::abs(root - coeffs.offdiag[k + 1])) {
      coeffs.offdiag[k] = -root;
      coeffs.branches[k] = RootBranch::negated;
    } else {
      coeffs.offdiag[k] = root;
    }
  }
  return coeffs;
}

complex approximant(const HypParams& p, FractionKind kind, std::size_t n, complex x) {
  auto pole = [&](std::size_t level) {
    std::ostringstream os;
    os << "approximant " << n << " has a vanishing denominator at level " << level << " for x = " << x;
    return Error(ErrorKind::pole_of_approximant, os.str());
  };

  if (kind == FractionKind::j_fraction) {
    if (n == 0) return 0.0;
    const JacobiCoeffs jc = jacobi_coeffs(p, n);
    const std::size_t m = std::min(n, jc.length);
    complex tail = x - jc.diag[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) {
      if (std::abs(tail) <= pole_guard * (1.0 + std::abs(x) + std::abs(jc.diag[k + 1]))) throw pole(k + 1);
      tail = x - jc.diag[k] - jc.offdiag_sq[k] / tail;
    }
    if (std::abs(tail) <= pole_guard * (1.0 + std::abs(x) + std::abs(jc.diag[0]))) throw pole(0);
    return -1.0 / tail;
  }

  const CoeffStream stream(p);
  std::size_t m = n;
  if (auto zero = stream.first_zero(1, n)) m = *zero - 1;
  if (m == 0) return 1.0;

  if (kind == FractionKind::c_fraction) {
    complex t = 1.0;
    for (std::size_t j = m; j >= 1; --j) {
      const complex num = stream.c(j) * x;
      if (std::abs(t) <= pole_guard * (1.0 + std::abs(num))) throw pole(j);
      t = 1.0 + num / t;
    }
    return t;
  }

  // S-fraction: denominators alternate s (odd index) and 1 (even index).
  auto den = [&](std::size_t j) { return j % 2 == 1 ? x : complex(1.0, 0.0); };
  complex tail = den(m);
  for (std::size_t j = m; j >= 2; --j) {
    if (std::abs(tail) <= pole_guard * (1.0 + std::abs(stream.d(j)))) throw pole(j);
    tail = den(j - 1) + stream.d(j) / tail;
  }
  if (std::abs(tail) <= pole_guard * (1.0 + std::abs(stream.d(1)))) throw pole(1);
  return 1.0 + stream.d(1) / tail;
}

std::vector<complex> moment_oracle(const HypParams& p, std::size_t order) {
  if (order > 10) throw Error(ErrorKind::invalid_argument, "moment_oracle supports order <= 10");
  const std::size_t len = order + 2;

  // w = -4/(z - 2) = -4u/(1 - 2u) with u = 1/z
  Series w(len, 0.0);
  for (std::size_t k = 1; k < len; ++k) w[k] = -4.0 * std::ldexp(1.0, static_cast<int>(k - 1));

  const Series f_num = compose_hyp(p.a, p.b, p.c, w);
  const Series f_den = compose_hyp(p.a, p.b + 1.0, p.c + 1.0, w);
  const complex d1 = -c_coeff(p, 1);

  Series b_series;
  if (d1 != complex(0.0, 0.0)) {
    b_series = series_div(f_num, f_den);
    b_series[0] = 0.0;
    for (auto& v : b_series) v = -v / (4.0 * d1);
  } else {
    // R == 1 identically; use the contiguous form B = w F(a+1,b+1,c+2;w) / (4 F(a,b+1,c+1;w)).
    const Series f_next = compose_hyp(p.a + 1.0, p.b + 1.0, p.c + 2.0, w);
    b_series = series_div(series_mul(w, f_next), f_den);
    for (auto& v : b_series) v /= 4.0;
  }

  std::vector<complex> moments(order + 1);
  for (std::size_t k = 0; k <= order; ++k) moments[k] = -b_series[k + 1];
  return moments;
}

}  // namespace hypjac
