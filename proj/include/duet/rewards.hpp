#pragma once

#include <map>
#include <string>
#include <vector>

#include "duet/geometry.hpp"
#include "duet/parallel.hpp"

namespace duet {

struct RewardConfig {
  double sigma_inter = 0.04;  // m^2 sensitivity of the interaction kernel
  double sigma_c = 1.0;
  double beta = 0.5;          // contact-status vs force-regularization mix
  double f_min = 5.0;         // Newtons
  double f_max = 200.0;

  // tracking kernel widths
  double sigma_pos = 0.3;
  double sigma_ori = 0.5;
  double sigma_vel = 1.0;
  double sigma_ang = 1.0;
  double sigma_root = 0.5;
  double sigma_root_ori = 0.5;

  // term weights
  double w_interact_edge = 1.5;
  double w_contact = 1.0;
  double w_upper_pos = 1.0, w_upper_ori = 1.0, w_upper_lin_vel = 1.0, w_upper_ang_vel = 1.0;
  double w_lower_pos = 0.5, w_lower_ori = 0.5, w_lower_lin_vel = 0.5, w_lower_ang_vel = 0.5;
  double w_anchor_pos = 0.3, w_anchor_ori = 0.5;
  double w_action_rate = -0.3;
  double w_feet_slip = -0.5;
  double w_joint_limit = -10.0;
  double w_torque = -1e-4;

  void validate() const;
};

/// One evaluation sample of the cross-agent interaction state.
struct InteractionSample {
  std::vector<Vec3> d_sim;   // simulated relative edge vectors
  std::vector<Vec3> d_ref;   // reference relative edge vectors
  std::vector<double> omega;  // per-edge weights

  std::vector<bool> contact_sim;     // per contact node, detected status
  std::vector<double> force;        // per contact node, Newtons
  std::vector<bool> contact_active;  // per node: is contact expected

  void validate() const;
};

/// exp(-(1/sigma_inter) * sum_e omega_e ||d_sim - d_ref||^2); 1.0 on empty
/// edge sets.
double r_inter(const InteractionSample& sample, const RewardConfig& cfg);

/// Piecewise force penalty: 1 - f/F_min below F_min, (f - F_max)/F_max above
/// F_max, 0 in the valid band. Throws ConfigError for negative forces.
double force_regularization(double force, const RewardConfig& cfg);

/// lambda_act * exp(-E_act/sigma_c^2) + lambda_inact * exp(-E_inact/sigma_c^2)
/// with node-count ratio weights; 1.0 on an empty node set.
double r_contact(const InteractionSample& sample, const RewardConfig& cfg);

struct BodyTrackingState {
  std::vector<Vec3> pos;
  std::vector<Quat> rot;
  std::vector<Vec3> lin_vel;
  std::vector<Vec3> ang_vel;
};

struct TrackingSample {
  BodyTrackingState upper_sim, upper_ref;
  BodyTrackingState lower_sim, lower_ref;
  Vec3 root_pos_sim = Vec3::Zero(), root_pos_ref = Vec3::Zero();
  Quat root_rot_sim = Quat::Identity(), root_rot_ref = Quat::Identity();
  VectorXd action, prev_action;
  std::vector<bool> foot_contact;
  std::vector<Vec3> foot_vel;
  VectorXd q, q_limit;  // symmetric limits: penalty on |q_j| - q_limit_j
  VectorXd tau;
};

struct TrackingReward {
  std::map<std::string, double> terms;  // raw per-term values (unweighted)
  double total = 0.0;                   // sum of weight_i * term_i
};

TrackingReward tracking_rewards(const TrackingSample& sample, const RewardConfig& cfg);

/// Batch evaluation; the serial path is the reference for the OpenMP kernel.
std::vector<double> r_inter_batch(const std::vector<InteractionSample>& samples,
                                  const RewardConfig& cfg, Exec exec = Exec::Parallel);
std::vector<double> r_contact_batch(const std::vector<InteractionSample>& samples,
                                    const RewardConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace duet
