#include "worldline/error.hpp"

namespace worldline {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidDimension: return "invalid dimension";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::InvalidConfig: return "invalid config";
        case ErrorKind::NonConvergence: return "non-convergence";
        case ErrorKind::SingularSystem: return "singular system";
        case ErrorKind::NotFreePotential: return "not a free potential";
        case ErrorKind::PhysicalLimitViolated: return "physical limit violated";
        case ErrorKind::StepFailure: return "step failure";
        case ErrorKind::StiffnessSuspected: return "stiffness suspected";
        case ErrorKind::SuperluminalVelocity: return "superluminal velocity";
        case ErrorKind::FitRefused: return "fit refused";
        case ErrorKind::Io: return "i/o error";
    }
    return "unknown";
}

}  // namespace worldline
