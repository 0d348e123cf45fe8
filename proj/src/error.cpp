#include "curvemates/error.hpp"

namespace curvemates {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::regularity: return "regularity";
    case ErrorKind::curvature_degenerate: return "curvature-degenerate";
    case ErrorKind::spec: return "spec";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::singular_configuration: return "singular-configuration";
    case ErrorKind::planarity: return "planarity";
    case ErrorKind::range: return "range";
    case ErrorKind::torsion_degenerate: return "torsion-degenerate";
    case ErrorKind::finite_escape: return "finite-escape";
    case ErrorKind::pole: return "pole";
    case ErrorKind::singular_ode: return "singular-ode";
    case ErrorKind::contract: return "contract";
    case ErrorKind::parse: return "parse";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<double> location)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
      kind_(kind),
      location_(location) {}

}  // namespace curvemates
