#pragma once

#include <string>

#include "wkg/evolution.hpp"

namespace wkg {

/// Checkpoint format: versioned plain-text header (schema id, grid, model
/// tag, time axis and time) followed by binary little-endian float64 blocks,
/// one value block and one time-derivative block per unknown. Round trips
/// are bit-exact.
struct Checkpoint {
  std::string model_tag;  // e.g. "wkg" or "fr"
  EvolutionState state;
};

void write_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

/// Header summary for `checkpoint info`.
std::string describe_checkpoint(const std::string& path);

}  // namespace wkg
