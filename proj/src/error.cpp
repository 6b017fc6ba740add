#include "invscat/error.hpp"

namespace invscat {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::GammaPole: return "gamma-pole";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::NearZeroDenominator: return "near-zero-denominator";
    case ErrorKind::InterpolationPole: return "interpolation-pole";
    case ErrorKind::BranchCut: return "branch";
    case ErrorKind::NonHerglotz: return "non-herglotz";
    case ErrorKind::TailFit: return "tail-fit";
    case ErrorKind::TailDivergence: return "tail-divergence";
    case ErrorKind::SingularSystem: return "singular-system";
    case ErrorKind::RowsMissing: return "rows-missing";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace invscat
