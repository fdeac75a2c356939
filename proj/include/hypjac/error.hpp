#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypjac {

enum class ErrorKind {
  // parameter / input validation
  c_nonpositive_integer,
  outside_disk,
  on_cut,
  on_band,
  not_real_params,
  not_stieltjes,
  shift_invalid,
  degenerate_samples,
  invalid_argument,
  // numerical failures
  no_convergence,
  denominator_zero,
  pole_of_approximant,
  near_singular,
  near_pole,
  eigensolver_failure,
  scan_exhausted,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::c_nonpositive_integer: return "CNonpositiveInteger";
    case ErrorKind::outside_disk: return "OutsideDisk";
    case ErrorKind::on_cut: return "OnCut";
    case ErrorKind::on_band: return "OnBand";
    case ErrorKind::not_real_params: return "NotRealParams";
    case ErrorKind::not_stieltjes: return "NotStieltjes";
    case ErrorKind::shift_invalid: return "ShiftInvalid";
    case ErrorKind::degenerate_samples: return "DegenerateSamples";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::denominator_zero: return "DenominatorZero";
    case ErrorKind::pole_of_approximant: return "PoleOfApproximant";
    case ErrorKind::near_singular: return "NearSingular";
    case ErrorKind::near_pole: return "NearPole";
    case ErrorKind::eigensolver_failure: return "EigensolverFailure";
    case ErrorKind::scan_exhausted: return "ScanExhausted";
  }
  return "Unknown";
}

/// True for errors caused by the caller's input rather than by the numerics.
constexpr bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::c_nonpositive_integer:
    case ErrorKind::outside_disk:
    case ErrorKind::on_cut:
    case ErrorKind::on_band:
    case ErrorKind::not_real_params:
    case ErrorKind::not_stieltjes:
    case ErrorKind::shift_invalid:
    case ErrorKind::degenerate_samples:
    case ErrorKind::invalid_argument:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hypjac
