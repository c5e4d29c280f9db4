#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "duet/clip.hpp"
#include "duet/collision.hpp"
#include "duet/interaction_mesh.hpp"
#include "duet/manifolds.hpp"
#include "duet/qp.hpp"
#include "duet/robot_model.hpp"
#include "duet/trajectory.hpp"

namespace duet {

struct SolverConfig {
  double w_self = 2.0;
  double w_inter = 10.0;
  double w_reg = 0.1;
  double lambda_rot = 0.1;
  double trust_delta = 0.05;  // per-component step bound, rad (and m for the root)
  double eps_safe = 0.005;    // required inter-robot clearance, m
  double eps_stick = 0.002;   // foot keypoint step bound while in contact, m/frame
  int sqp_iters_per_frame = 3;
  double qp_tolerance = 1e-6;
  double activation_margin = 0.10;  // collision rows activate below this distance
  double recovery_cap = 0.04;       // per-step separation demand when violated
  bool collision_enabled = true;
  bool self_collision = false;
  // restricts the cross-robot collision matrix to these link-name pairs
  // (robot 1 link, robot 2 link); empty means every capsule-bearing pair
  std::vector<std::pair<std::string, std::string>> collision_link_pairs;
  bool enforce_l2_trust = false;  // post-hoc rescale of dx onto the l2 ball
  double foot_height_threshold = 0.02;  // source contact detection, m
  double foot_speed_threshold = 0.2;    // m/s
  double early_exit_step = 1e-5;

  void validate() const;
};

/// Coupled two-robot SQP over one reference pair. Holds the per-clip context
/// (topology, vertex bindings, orientation targets, source foot contacts) and
/// exposes the linearization pieces so they can be checked independently.
/// Keeps references to the specs and the ReferencePair; the caller owns them
/// for the problem's lifetime.
class RetargetProblem {
 public:
  RetargetProblem(const RobotSpec& spec1, const RobotSpec& spec2, const MeshConfig& mesh_cfg,
                  const SolverConfig& cfg, const ReferencePair& ref);

  using Configs = std::array<RobotConfiguration, 2>;

  int dims() const { return dims_; }
  int agent_offset(int agent) const { return agent == 0 ? 0 : kRootDims + specs_[0]->dof(); }
  const MeshTopology& topology() const { return topo_; }
  const RobotSpec& spec(int agent) const { return *specs_[static_cast<std::size_t>(agent)]; }
  const ReferencePair& reference() const { return ref_; }

  /// Standing start: q_nom, root at the unified-manifold pelvis, heading from
  /// the shoulder line.
  Configs initial_configs() const;

  /// Nonlinear objective at a configuration pair (frame_prev supplies the
  /// velocity-regularization anchor).
  double objective_value(std::size_t frame, const Configs& configs, const Configs& frame_prev) const;

  struct Linearization {
    QpProblem qp;
    double objective = 0.0;     // nonlinear objective at the point
    bool zero_feasible = true;  // dx = 0 satisfies every row
  };

  /// Quadratic model and constraint rows at the linearization point.
  /// Objective rows are Gauss-Newton: H = 2 sum w J^T J, g = 2 sum w J^T r.
  Linearization linearize(std::size_t frame, const Configs& lin, const Configs& frame_prev,
                          bool collision_enabled, double eps_safe) const;

  /// Objective part only (H, g); exposed for the coupling-structure checks.
  void assemble_objective(std::size_t frame, const Configs& lin, const Configs& frame_prev,
                          MatrixXd& H, VectorXd& g) const;

  struct FrameSolution {
    Configs configs;
    FrameDiag diag;
  };
  FrameSolution solve_frame(std::size_t frame, const Configs& frame_prev) const;

  /// Runs every frame sequentially with warm starts and attaches priors.
  RobotTrajectory solve() const;

  bool source_foot_contact(std::size_t frame, int agent, int foot_slot) const;
  int foot_vertex_count() const { return static_cast<int>(foot_vertices_.size()); }

 private:
  struct ResidualBlocks;
  void residual_rows(std::size_t frame, const Configs& lin, const Configs& frame_prev,
                     ResidualBlocks& out) const;
  std::vector<CollisionPair> collision_pairs() const;

  const RobotSpec* specs_[2];
  SolverConfig cfg_;
  const ReferencePair& ref_;
  MeshTopology topo_;
  int dims_ = 0;

  std::array<std::vector<int>, 2> vertex_robot_kp_;  // per agent, per vertex
  std::vector<int> vertex_clip_kp_;                  // per vertex
  std::vector<int> foot_vertices_;                   // vertex ids treated as feet
  std::array<std::vector<int>, 2> foot_robot_kp_;
  // contacts_[agent][frame * feet + slot]
  std::array<std::vector<char>, 2> source_contacts_;
  // constant orientation targets per agent and key link
  std::array<std::vector<std::pair<int, Mat3>>, 2> orientation_targets_;
};

/// End-to-end retargeting of a clip (Algorithm: manifold construction, then
/// per-frame coupled SQP, then prior extraction).
RobotTrajectory retarget_clip(const RobotSpec& spec1, const RobotSpec& spec2,
                              const MeshConfig& mesh_cfg, const SolverConfig& cfg,
                              const DualMotionClip& clip, double h_robot,
                              const std::string& height_strategy = "head_foot");

}  // namespace duet
