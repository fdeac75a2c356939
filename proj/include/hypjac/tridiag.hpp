#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hypjac {

struct TridiagSolution {
  std::vector<std::complex<double>> x;
  double growth = 0.0;       // max |U_ij| / max |A_ij|
  double pivot_ratio = 0.0;  // max |A_ij| / min |U_ii|
};

/// Solves A x = rhs for a general tridiagonal A with Gaussian elimination and
/// partial pivoting (the LAPACK gtsv scheme). sub[i] = A(i+1,i), super[i] = A(i,i+1).
/// A zero pivot is reported through pivot_ratio = inf; x is then meaningless.
TridiagSolution solve_tridiagonal(std::span<const std::complex<double>> sub,
                                  std::span<const std::complex<double>> diag,
                                  std::span<const std::complex<double>> super,
                                  std::span<const std::complex<double>> rhs);

}  // namespace hypjac
