#pragma once

#include <array>
#include <string>
#include <vector>

#include "duet/geometry.hpp"
#include "duet/manifolds.hpp"
#include "duet/robot_model.hpp"

namespace duet {

/// Per-frame cross-agent edge kept by the retargeting optimizer. Vertex ids
/// are agent-local keypoint indices (i on agent 1, j on agent 2).
struct InterEdge {
  int i = 0;
  int j = 0;
  double omega = 0.0;   // distance-decayed stiffness, in (0, omega_max]
  Vec3 ref_rel = Vec3::Zero();  // reference relative vector p_uni_i - p_uni_j
  double d_ref = 0.0;           // reference edge length used for the weight
};

struct ContactFlag {
  int link_a = 0;  // robot 1 link
  int link_b = 0;  // robot 2 link
  bool contact = false;
};

/// Interaction and contact graph priors, one entry per frame. Contact frames
/// only list flagged pairs; absent pairs are implicitly contact-free. Edge
/// vertex ids index into vertex_names (shared by both agents).
struct GraphPriors {
  double eps_contact = 0.0;
  std::vector<std::string> vertex_names;
  std::vector<std::vector<InterEdge>> interaction_frames;
  std::vector<std::vector<ContactFlag>> contact_frames;
};

struct SqpIterDiag {
  double objective_before = 0.0;   // nonlinear objective at the linearization point
  double model_objective = 0.0;    // quadratic model value at the accepted step
  double step_inf_norm = 0.0;
  bool zero_feasible = true;  // dx = 0 satisfied every constraint row
  int qp_status = 0;
  int qp_iterations = 0;
};

struct FrameDiag {
  std::vector<SqpIterDiag> iters;
  double objective = 0.0;             // nonlinear objective after the frame
  double max_limit_violation = 0.0;
  double min_clearance = 0.0;         // signed inter-robot distance
  double max_step = 0.0;              // ||q_t - q_{t-1}||_inf over joints
  bool relaxed = false;               // collision margin dropped to zero
  bool failed = false;                // frame kept the previous pose
};

struct RobotTrajectory {
  double frame_dt = 0.0;
  std::array<std::string, 2> robot_names;
  std::string config_hash;
  // frames[t][agent]
  std::vector<std::array<RobotConfiguration, 2>> frames;
  std::vector<FrameDiag> diags;
  GraphPriors priors;
  ReferencePair reference;

  std::size_t frame_count() const { return frames.size(); }
};

}  // namespace duet
