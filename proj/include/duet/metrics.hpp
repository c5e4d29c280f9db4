#pragma once

#include <vector>

#include "duet/parallel.hpp"
#include "duet/robot_model.hpp"
#include "duet/trajectory.hpp"

namespace duet {

struct MetricsOptions {
  double tau_strict = 0.2;  // contact F1 thresholds, meters
  double tau_loose = 0.4;
  double penetration_tol = 1e-6;  // depth above this counts as penetration
  double isr_threshold = 10.0;    // percent, per-step IEE budget
  double csr_recall = 0.8;        // required recall of reference contacts
  double dsr_threshold = 20.0;    // percent, rollout-level IEE budget
  Exec exec = Exec::Parallel;
};

struct F1Score {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  long tp = 0, fp = 0, fn = 0;
};

struct PenetrationMetrics {
  double ipr = 0.0;     // percent of frames with any inter-robot penetration
  double mpd_cm = 0.0;  // max penetration depth, centimeters
  std::vector<double> depth;  // per-frame max depth, meters
};

/// Penetration sweep over all inter-robot link pairs; shares the capsule
/// distance code path with the solver's collision rows.
PenetrationMetrics penetration_metrics(const RobotTrajectory& traj, const RobotSpec& spec1,
                                       const RobotSpec& spec2, const MetricsOptions& opts = {});

struct RetargetMetrics {
  double ipr = 0.0;
  double mpd_cm = 0.0;
  double iee_retarget = 0.0;  // percent, ||e_sim - e_ref|| / h_robot over active edges
  double iee_policy = 0.0;    // percent, weighted relative form
  F1Score f1_strict, f1_loose;
  bool empty_edges = false;  // no active reference edge in the whole clip
  std::vector<double> trace_depth;
  std::vector<double> trace_iee_retarget;  // per-frame mean, -1 when no edges
  std::vector<double> trace_iee_policy;
};

/// Retargeting quality against the embedded reference manifolds and priors.
RetargetMetrics compute_retarget_metrics(const RobotTrajectory& traj, const RobotSpec& spec1,
                                         const RobotSpec& spec2, const MetricsOptions& opts = {});

struct PolicyMetrics {
  double isr = 0.0;  // percent of steps with IEE below isr_threshold
  double csr = 0.0;  // percent of steps recalling enough reference contacts
  double cer = 0.0;  // violated fraction of (step, required contact) pairs
  bool dsr_pass = false;  // IEE stayed below dsr_threshold throughout
  double iee_mean = 0.0;
  std::vector<double> trace_iee;
};

/// Rollout-level evaluation against the retargeted reference trajectory: the
/// reference edges are the reference trajectory's own simulated edges and the
/// required contacts come from its contact graph. Throws ConfigError when the
/// rollout is misaligned with the reference.
PolicyMetrics compute_policy_metrics(const RobotTrajectory& rollout, const RobotTrajectory& reference,
                                     const RobotSpec& spec1, const RobotSpec& spec2,
                                     const MetricsOptions& opts = {});

/// Percentage of rollouts that kept the IEE deviation within the DSR budget.
double downstream_success_rate(const std::vector<PolicyMetrics>& rollouts);

}  // namespace duet
