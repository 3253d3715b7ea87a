#pragma once

#include <stdexcept>
#include <string>

namespace ca {

// Failure codes for every contract violation the library reports.
enum class Errc {
  negative_probability,
  mass_not_one,
  empty_group,
  unknown_label,
  zero_mass_condition,
  mixed_construct_presence,
  missing_kernel_row,
  metric_mismatch,
  not_numeric,
  support_too_large,
  not_lipschitz,
  no_comparable_slice,
  construct_unavailable,
  support_mismatch,
  non_binary_prediction,
  wrong_order,
  epsilon_too_large,
  infeasible_target,
  zero_rate,
  unknown_theorem,
  invalid_argument,
  parse_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::negative_probability: return "NegativeProbability";
    case Errc::mass_not_one: return "MassNotOne";
    case Errc::empty_group: return "EmptyGroup";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::zero_mass_condition: return "ZeroMassCondition";
    case Errc::mixed_construct_presence: return "MixedConstructPresence";
    case Errc::missing_kernel_row: return "MissingKernelRow";
    case Errc::metric_mismatch: return "MetricMismatch";
    case Errc::not_numeric: return "NotNumeric";
    case Errc::support_too_large: return "SupportTooLarge";
    case Errc::not_lipschitz: return "NotLipschitz";
    case Errc::no_comparable_slice: return "NoComparableSlice";
    case Errc::construct_unavailable: return "ConstructUnavailable";
    case Errc::support_mismatch: return "SupportMismatch";
    case Errc::non_binary_prediction: return "NonBinaryPrediction";
    case Errc::wrong_order: return "WrongOrder";
    case Errc::epsilon_too_large: return "EpsilonTooLarge";
    case Errc::infeasible_target: return "InfeasibleTarget";
    case Errc::zero_rate: return "ZeroRate";
    case Errc::unknown_theorem: return "UnknownTheorem";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

class AuditError : public std::runtime_error {
 public:
  AuditError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw AuditError(code, what);
}

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace ca
