#pragma once

#include <cstddef>
#include <string>

#include "duet/trajectory.hpp"

namespace duet {

/// Writes content to path atomically (temp file in the same directory, then
/// rename). Throws IoError on failure.
void atomic_write_file(const std::string& path, const std::string& content);

/// Writes trajectory.json, priors.json and diagnostics.json into the
/// directory (created when missing) and returns the total bytes written.
/// Numbers are serialized with shortest round-trip precision, so a read-back
/// reproduces every value exactly. Throws IoError on failure and ConfigError
/// when the trajectory has no frames.
std::size_t write_trajectory(const RobotTrajectory& traj, const std::string& dir);

/// Reads a trajectory run directory back. Diagnostics are optional; the
/// individual reference manifold is not serialized and stays empty.
RobotTrajectory read_trajectory(const std::string& dir);

}  // namespace duet
