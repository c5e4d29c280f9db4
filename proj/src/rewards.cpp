#include "duet/rewards.hpp"

#include <cmath>

#include "duet/errors.hpp"

namespace duet {

void RewardConfig::validate() const {
  if (sigma_inter <= 0.0 || sigma_c <= 0.0) throw ConfigError("reward sigmas must be positive");
  if (beta < 0.0 || beta > 1.0) throw ConfigError("beta must lie in [0, 1]");
  if (!(0.0 < f_min && f_min < f_max)) throw ConfigError("force band needs 0 < F_min < F_max");
  for (double s : {sigma_pos, sigma_ori, sigma_vel, sigma_ang, sigma_root, sigma_root_ori})
    if (s <= 0.0) throw ConfigError("tracking sigmas must be positive");
}

void InteractionSample::validate() const {
  if (d_sim.size() != d_ref.size() || d_sim.size() != omega.size())
    throw ConfigError("interaction sample edge lists are misaligned");
  if (contact_sim.size() != force.size() || contact_sim.size() != contact_active.size())
    throw ConfigError("interaction sample contact lists are misaligned");
  for (double f : force)
    if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("contact forces must be finite and non-negative");
}

double r_inter(const InteractionSample& sample, const RewardConfig& cfg) {
  double acc = 0.0;
  for (std::size_t e = 0; e < sample.d_sim.size(); ++e)
    acc += sample.omega[e] * (sample.d_sim[e] - sample.d_ref[e]).squaredNorm();
  return std::exp(-acc / cfg.sigma_inter);
}

double force_regularization(double force, const RewardConfig& cfg) {
  if (force < 0.0) throw ConfigError("force_regularization requires a non-negative force");
  if (force < cfg.f_min) return 1.0 - force / cfg.f_min;
  if (force > cfg.f_max) return (force - cfg.f_max) / cfg.f_max;
  return 0.0;
}

double r_contact(const InteractionSample& sample, const RewardConfig& cfg) {
  const std::size_t n = sample.contact_sim.size();
  if (n == 0) return 1.0;  // vacuous success on non-interaction segments

  std::size_t n_act = 0;
  double e_act = 0.0, e_inact = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double status = sample.contact_sim[k] ? 1.0 : 0.0;
    if (sample.contact_active[k]) {
      ++n_act;
      e_act += cfg.beta * std::abs(status - 1.0) +
               (1.0 - cfg.beta) * force_regularization(sample.force[k], cfg);
    } else {
      e_inact += status;  // any ghost interaction counts in full
    }
  }
  const double lambda_act = static_cast<double>(n_act) / static_cast<double>(n);
  const double lambda_inact = 1.0 - lambda_act;
  const double s2 = cfg.sigma_c * cfg.sigma_c;
  return lambda_act * std::exp(-e_act / s2) + lambda_inact * std::exp(-e_inact / s2);
}

namespace {

double body_term(const std::vector<Vec3>& sim, const std::vector<Vec3>& ref, double sigma) {
  if (sim.size() != ref.size()) throw ConfigError("tracking sample link lists are misaligned");
  if (sim.empty()) return 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < sim.size(); ++k) acc += (sim[k] - ref[k]).squaredNorm();
  acc /= static_cast<double>(sim.size());
  return std::exp(-acc / (sigma * sigma));
}

double body_ori_term(const std::vector<Quat>& sim, const std::vector<Quat>& ref, double sigma) {
  if (sim.size() != ref.size()) throw ConfigError("tracking sample link lists are misaligned");
  if (sim.empty()) return 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < sim.size(); ++k) {
    const Mat3 err = sim[k].toRotationMatrix().transpose() * ref[k].toRotationMatrix();
    acc += so3_log(err).squaredNorm();
  }
  acc /= static_cast<double>(sim.size());
  return std::exp(-acc / (sigma * sigma));
}

}  // namespace

TrackingReward tracking_rewards(const TrackingSample& sample, const RewardConfig& cfg) {
  TrackingReward out;
  auto& t = out.terms;

  t["upper_pos"] = body_term(sample.upper_sim.pos, sample.upper_ref.pos, cfg.sigma_pos);
  t["upper_ori"] = body_ori_term(sample.upper_sim.rot, sample.upper_ref.rot, cfg.sigma_ori);
  t["upper_lin_vel"] = body_term(sample.upper_sim.lin_vel, sample.upper_ref.lin_vel, cfg.sigma_vel);
  t["upper_ang_vel"] = body_term(sample.upper_sim.ang_vel, sample.upper_ref.ang_vel, cfg.sigma_ang);
  t["lower_pos"] = body_term(sample.lower_sim.pos, sample.lower_ref.pos, cfg.sigma_pos);
  t["lower_ori"] = body_ori_term(sample.lower_sim.rot, sample.lower_ref.rot, cfg.sigma_ori);
  t["lower_lin_vel"] = body_term(sample.lower_sim.lin_vel, sample.lower_ref.lin_vel, cfg.sigma_vel);
  t["lower_ang_vel"] = body_term(sample.lower_sim.ang_vel, sample.lower_ref.ang_vel, cfg.sigma_ang);

  t["anchor_pos"] =
      std::exp(-(sample.root_pos_sim - sample.root_pos_ref).squaredNorm() / (cfg.sigma_root * cfg.sigma_root));
  {
    const Mat3 err = sample.root_rot_sim.toRotationMatrix().transpose() * sample.root_rot_ref.toRotationMatrix();
    t["anchor_ori"] = std::exp(-so3_log(err).squaredNorm() / (cfg.sigma_root_ori * cfg.sigma_root_ori));
  }

  t["action_rate"] =
      sample.action.size() > 0 ? (sample.action - sample.prev_action).squaredNorm() : 0.0;

  double slip = 0.0;
  if (sample.foot_contact.size() != sample.foot_vel.size())
    throw ConfigError("tracking sample foot lists are misaligned");
  for (std::size_t k = 0; k < sample.foot_contact.size(); ++k)
    if (sample.foot_contact[k]) slip += sample.foot_vel[k].head<2>().squaredNorm();
  t["feet_slip"] = slip;

  double limit = 0.0;
  if (sample.q.size() != sample.q_limit.size())
    throw ConfigError("tracking sample joint-limit vector is misaligned");
  for (Eigen::Index j = 0; j < sample.q.size(); ++j)
    limit += std::max(0.0, std::abs(sample.q[j]) - sample.q_limit[j]);
  t["joint_limit"] = limit;

  t["torque"] = sample.tau.size() > 0 ? sample.tau.squaredNorm() : 0.0;

  out.total = cfg.w_upper_pos * t["upper_pos"] + cfg.w_upper_ori * t["upper_ori"] +
              cfg.w_upper_lin_vel * t["upper_lin_vel"] + cfg.w_upper_ang_vel * t["upper_ang_vel"] +
              cfg.w_lower_pos * t["lower_pos"] + cfg.w_lower_ori * t["lower_ori"] +
              cfg.w_lower_lin_vel * t["lower_lin_vel"] + cfg.w_lower_ang_vel * t["lower_ang_vel"] +
              cfg.w_anchor_pos * t["anchor_pos"] + cfg.w_anchor_ori * t["anchor_ori"] +
              cfg.w_action_rate * t["action_rate"] + cfg.w_feet_slip * t["feet_slip"] +
              cfg.w_joint_limit * t["joint_limit"] + cfg.w_torque * t["torque"];
  return out;
}

std::vector<double> r_inter_batch(const std::vector<InteractionSample>& samples,
                                  const RewardConfig& cfg, Exec exec) {
  std::vector<double> out(samples.size());
  for_each_index(samples.size(), exec, [&](std::size_t i) { out[i] = r_inter(samples[i], cfg); });
  return out;
}

std::vector<double> r_contact_batch(const std::vector<InteractionSample>& samples,
                                    const RewardConfig& cfg, Exec exec) {
  std::vector<double> out(samples.size());
  for_each_index(samples.size(), exec, [&](std::size_t i) { out[i] = r_contact(samples[i], cfg); });
  return out;
}

}  // namespace duet
