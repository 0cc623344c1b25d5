#include "pst/gap_result.hpp"

namespace pst {

std::string_view to_string(GapMethod m) {
  switch (m) {
    case GapMethod::exact: return "exact";
    case GapMethod::perturbative: return "perturbative";
    case GapMethod::asymptotic: return "asymptotic";
    case GapMethod::transcendental: return "transcendental";
    case GapMethod::lowest_order: return "lowest-order";
  }
  return "unknown";
}

std::string_view to_string(Precision p) { return p == Precision::extended ? "extended" : "standard"; }

}  // namespace pst
