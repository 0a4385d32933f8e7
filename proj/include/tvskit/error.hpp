#ifndef TVSKIT_ERROR_HPP
#define TVSKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tvskit {

enum class ErrorKind {
  // input / usage
  invalid_exponent,
  invalid_input,
  window_exceeds_grid,
  grid_incompatible,
  alignment,
  geometry,
  precondition,
  // numeric / engine
  oracle_inconsistency,
  divergence,
  perturbation_too_large,
  tail_unbounded,
  not_invertible,
  bandwidth_insufficient,
  positivity_violated,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_exponent: return "invalid-exponent";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::window_exceeds_grid: return "window-exceeds-grid";
    case ErrorKind::grid_incompatible: return "grid-incompatible";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::oracle_inconsistency: return "oracle-inconsistency";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::perturbation_too_large: return "perturbation-too-large";
    case ErrorKind::tail_unbounded: return "tail-unbounded";
    case ErrorKind::not_invertible: return "not-invertible";
    case ErrorKind::bandwidth_insufficient: return "bandwidth-insufficient";
    case ErrorKind::positivity_violated: return "positivity-violated";
  }
  return "unknown";
}

// Input errors are the caller's fault; everything else is a numeric outcome
// the engine could not certify.
constexpr bool is_input_error(ErrorKind kind) {
  return kind <= ErrorKind::precondition;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tvskit

#endif  // TVSKIT_ERROR_HPP
