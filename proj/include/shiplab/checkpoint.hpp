#pragma once

#include <stdexcept>
#include <string>

#include "shiplab/ddpg.hpp"

namespace shiplab {

/// Raised on any structural problem with a policy file: bad magic, version
/// mismatch, truncation, checksum failure, or a header that contradicts the
/// payload. The file is never partially applied.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Serializes the complete agent: hyperparameters, all four networks,
/// optimizer moments, observation normalizer, action limit, lifetime step
/// count, and both RNG streams. The replay buffer is deliberately not part
/// of the file; a resumed run refills it. Layout is a JSON header followed
/// by one raw block of doubles in a fixed order, checksummed as a whole,
/// so save -> load -> save is byte-identical.
std::string checkpoint_bytes(const DdpgAgent& agent);

/// Writes checkpoint_bytes to path. Throws std::runtime_error on I/O
/// failure.
void save_checkpoint(const DdpgAgent& agent, const std::string& path);

/// Reconstructs an agent from bytes produced by checkpoint_bytes. Throws
/// CheckpointError on any mismatch.
DdpgAgent agent_from_bytes(const std::string& bytes);

/// Reads path and delegates to agent_from_bytes. A missing or unreadable
/// file throws CheckpointError.
DdpgAgent load_checkpoint(const std::string& path);

}  // namespace shiplab
