#include "wavecho/error.hpp"

namespace wavecho {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidCode: return "invalid-code";
    case ErrorKind::EmptyNetwork: return "empty-network";
    case ErrorKind::UnsupportedTopology: return "unsupported-topology";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::NumericInput: return "numeric-input";
    case ErrorKind::InconsistentSpectrum: return "inconsistent-spectrum";
    case ErrorKind::InvalidRegularizer: return "invalid-regularizer";
    case ErrorKind::DowndateSingularity: return "downdate-singularity";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::InvalidSeaState: return "invalid-sea-state";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Drying: return "drying";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace wavecho
