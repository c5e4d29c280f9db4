#pragma once

#include <string>

#include "duet/interaction_mesh.hpp"
#include "duet/rewards.hpp"
#include "duet/solver.hpp"

namespace duet {

/// Bundle loaded from one JSON file with optional "solver", "mesh" and
/// "rewards" sections. Absent keys keep their defaults; unknown keys are
/// rejected so typos do not silently fall back.
struct RunConfig {
  SolverConfig solver;
  MeshConfig mesh = MeshConfig::default_humanoid();
  RewardConfig rewards;
  double h_robot = 1.25;  // matches the bundled robot's head-foot extent
  std::string height_strategy = "head_foot";
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

/// FNV-1a hash of the canonical solver+mesh settings, for trajectory metadata.
std::string config_hash(const SolverConfig& solver, const MeshConfig& mesh);

}  // namespace duet
