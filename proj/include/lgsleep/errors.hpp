#pragma once

#include <stdexcept>
#include <string>

namespace lgsleep {

/// Malformed or truncated file contents (bad magic, version, CSV syntax).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid input carrying unusable values (NaN/Inf payloads etc).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad call arguments: out-of-range parameters, unknown enum tokens.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tensor dimensionality mismatch.
struct ShapeError : ArgumentError {
  using ArgumentError::ArgumentError;
};

/// Non-finite loss during training; carries where it happened.
struct DivergenceError : std::runtime_error {
  int phase;
  int epoch;
  int batch;
  DivergenceError(int phase_, int epoch_, int batch_)
      : std::runtime_error("non-finite loss in phase " + std::to_string(phase_) +
                           ", epoch " + std::to_string(epoch_) + ", batch " +
                           std::to_string(batch_)),
        phase(phase_), epoch(epoch_), batch(batch_) {}
};

}  // namespace lgsleep
