#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairhmm {

enum class ErrorKind {
  InvalidQuality,
  InvalidSequence,
  DegenerateTransition,
  ConfigTooSmall,
  InvalidConfig,
  NumericOverflow,
  ChunkBudget,
  InvalidMeasurement,
  InvalidSpec,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for kinds caused by bad input data rather than by floating-point range.
bool is_data_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pairhmm
