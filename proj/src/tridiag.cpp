#include "hypjac/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypjac/error.hpp"

namespace hypjac {

TridiagSolution solve_tridiagonal(std::span<const std::complex<double>> sub,
                                  std::span<const std::complex<double>> diag,
                                  std::span<const std::complex<double>> super,
                                  std::span<const std::complex<double>> rhs) {
  using cd = std::complex<double>;
  const std::size_t n = diag.size();
  if (n == 0 || rhs.size() != n || sub.size() + 1 < n || super.size() + 1 < n)
    throw Error(ErrorKind::invalid_argument, "tridiagonal system dimensions do not match");

  std::vector<cd> d(diag.begin(), diag.end());
  std::vector<cd> du(super.begin(), super.begin() + (n - 1));
  std::vector<cd> dl(sub.begin(), sub.begin() + (n - 1));
  std::vector<cd> du2(n > 2 ? n - 2 : 0, 0.0);  // second superdiagonal fill-in
  std::vector<cd> b(rhs.begin(), rhs.end());

  double a_max = 0.0;
  for (const auto& v : d) a_max = std::max(a_max, std::abs(v));
  for (const auto& v : du) a_max = std::max(a_max, std::abs(v));
  for (const auto& v : dl) a_max = std::max(a_max, std::abs(v));

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] != cd(0.0, 0.0)) {
        const cd fact = dl[i] / d[i];
        d[i + 1] -= fact * du[i];
        b[i + 1] -= fact * b[i];
      }
    } else {
      // swap rows i and i+1
      const cd fact = d[i] / dl[i];
      d[i] = dl[i];
      const cd temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const cd tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }

  TridiagSolution out;
  double u_max = 0.0;
  double pivot_min = std::numeric_limits<double>::infinity();
  for (const auto& v : d) {
    u_max = std::max(u_max, std::abs(v));
    pivot_min = std::min(pivot_min, std::abs(v));
  }
  for (const auto& v : du) u_max = std::max(u_max, std::abs(v));
  for (const auto& v : du2) u_max = std::max(u_max, std::abs(v));
  out.growth = a_max > 0.0 ? u_max / a_max : std::numeric_limits<double>::infinity();
  out.pivot_ratio = pivot_min > 0.0 ? a_max / pivot_min : std::numeric_limits<double>::infinity();
  if (pivot_min == 0.0) {
    out.x = std::move(b);
    return out;
  }

  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n > 2 ? n - 2 : 0; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  out.x = std::move(b);
  return out;
}

}  // namespace hypjac
