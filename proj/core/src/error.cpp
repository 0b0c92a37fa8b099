#include "pairhmm/error.hpp"

namespace pairhmm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidQuality: return "invalid-quality";
    case ErrorKind::InvalidSequence: return "invalid-sequence";
    case ErrorKind::DegenerateTransition: return "degenerate-transition";
    case ErrorKind::ConfigTooSmall: return "config-too-small";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::NumericOverflow: return "numeric-overflow";
    case ErrorKind::ChunkBudget: return "chunk-budget";
    case ErrorKind::InvalidMeasurement: return "invalid-measurement";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

bool is_data_error(ErrorKind kind) noexcept {
  return kind != ErrorKind::NumericOverflow && kind != ErrorKind::InvalidMeasurement;
}

}  // namespace pairhmm
