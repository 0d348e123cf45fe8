#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvemates {

enum class ErrorKind {
  domain,
  insufficient_data,
  regularity,
  curvature_degenerate,
  spec,
  alignment,
  singular_configuration,
  planarity,
  range,
  torsion_degenerate,
  finite_escape,
  pole,
  singular_ode,
  contract,
  parse,
  usage,
};

std::string_view to_string(ErrorKind kind);

/// Error raised by every library operation. `location()` carries the arc
/// length (or curve parameter) where the failure was detected, when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> location = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> location() const noexcept { return location_; }

 private:
  ErrorKind kind_;
  std::optional<double> location_;
};

}  // namespace curvemates
