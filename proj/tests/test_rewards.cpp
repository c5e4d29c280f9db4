#include <random>

#include "doctest.h"

#include "duet/rewards.hpp"
#include "support/oracles.hpp"

using namespace duet;

namespace {

InteractionSample random_sample(std::mt19937& rng, int edges, int nodes) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  InteractionSample s;
  for (int e = 0; e < edges; ++e) {
    s.d_ref.push_back(oracles::random_vec3(rng, 0.4));
    s.d_sim.push_back(s.d_ref.back() + oracles::random_vec3(rng, 0.1));
    s.omega.push_back(unit(rng));
  }
  for (int k = 0; k < nodes; ++k) {
    s.contact_sim.push_back(unit(rng) < 0.5);
    s.force.push_back(300.0 * unit(rng));
    s.contact_active.push_back(unit(rng) < 0.5);
  }
  return s;
}

}  // namespace

TEST_SUITE("rewards") {

TEST_CASE("interaction kernel basics") {
  RewardConfig cfg;
  InteractionSample s;
  CHECK(r_inter(s, cfg) == 1.0);  // empty edge set

  s.d_ref = {Vec3(0.2, 0, 0)};
  s.d_sim = {Vec3(0.2, 0, 0)};
  s.omega = {0.7};
  CHECK(r_inter(s, cfg) == 1.0);

  // single edge with omega = 1 and squared error sigma_inter
  s.omega = {1.0};
  s.d_sim = {Vec3(0.2 + std::sqrt(cfg.sigma_inter), 0, 0)};
  CHECK(r_inter(s, cfg) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("force regularization: the published piecewise form") {
  RewardConfig cfg;  // F_min 5, F_max 200
  CHECK(force_regularization(0.0, cfg) == 1.0);
  CHECK(force_regularization(cfg.f_min, cfg) == 0.0);
  CHECK(force_regularization(0.5 * (cfg.f_min + cfg.f_max), cfg) == 0.0);
  CHECK(force_regularization(cfg.f_max, cfg) == 0.0);
  CHECK(force_regularization(2.0 * cfg.f_max, cfg) == 1.0);
  CHECK_THROWS_AS(force_regularization(-1.0, cfg), ConfigError);

  // continuity at both breakpoints
  CHECK(std::abs(force_regularization(cfg.f_min - 1e-9, cfg)) < 1e-9);
  CHECK(std::abs(force_regularization(cfg.f_max + 1e-9, cfg)) < 1e-10);
}

TEST_CASE("contact reward mirrors the weighted two-term form") {
  RewardConfig cfg;
  InteractionSample s;
  CHECK(r_contact(s, cfg) == 1.0);  // empty node set

  // all required contacts made with valid force, no ghosts
  s.contact_sim = {true, true, false};
  s.force = {50.0, 120.0, 0.0};
  s.contact_active = {true, true, false};
  CHECK(r_contact(s, cfg) == doctest::Approx(1.0).epsilon(1e-12));

  // one spurious contact, nothing required
  s.contact_sim = {true};
  s.force = {0.0};
  s.contact_active = {false};
  CHECK(r_contact(s, cfg) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("random samples match the direct-summation oracle") {
  std::mt19937 rng(23);
  RewardConfig cfg;
  for (int trial = 0; trial < 500; ++trial) {
    const InteractionSample s = random_sample(rng, 1 + static_cast<int>(rng() % 6u),
                                              1 + static_cast<int>(rng() % 6u));

    double acc = 0.0;
    for (std::size_t e = 0; e < s.d_sim.size(); ++e)
      acc += s.omega[e] * (s.d_sim[e] - s.d_ref[e]).squaredNorm();
    const double expect_inter = std::exp(-acc / cfg.sigma_inter);
    CHECK(r_inter(s, cfg) == doctest::Approx(expect_inter).epsilon(1e-12));
    CHECK(r_inter(s, cfg) > 0.0);
    CHECK(r_inter(s, cfg) <= 1.0);

    double e_act = 0.0, e_inact = 0.0;
    int n_act = 0;
    for (std::size_t k = 0; k < s.contact_sim.size(); ++k) {
      const double c = s.contact_sim[k] ? 1.0 : 0.0;
      if (s.contact_active[k]) {
        ++n_act;
        double lf;
        if (s.force[k] < cfg.f_min)
          lf = 1.0 - s.force[k] / cfg.f_min;
        else if (s.force[k] > cfg.f_max)
          lf = (s.force[k] - cfg.f_max) / cfg.f_max;
        else
          lf = 0.0;
        e_act += cfg.beta * std::abs(c - 1.0) + (1.0 - cfg.beta) * lf;
      } else {
        e_inact += std::abs(c);
      }
    }
    const double la = static_cast<double>(n_act) / static_cast<double>(s.contact_sim.size());
    const double expect_contact =
        la * std::exp(-e_act / (cfg.sigma_c * cfg.sigma_c)) +
        (1.0 - la) * std::exp(-e_inact / (cfg.sigma_c * cfg.sigma_c));
    CHECK(r_contact(s, cfg) == doctest::Approx(expect_contact).epsilon(1e-12));
    CHECK(r_contact(s, cfg) > 0.0);
    CHECK(r_contact(s, cfg) <= 1.0);
  }
}

TEST_CASE("zero-error samples maximize the kernels") {
  std::mt19937 rng(29);
  RewardConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    InteractionSample perfect = random_sample(rng, 4, 4);
    perfect.d_sim = perfect.d_ref;
    for (std::size_t k = 0; k < perfect.contact_sim.size(); ++k) {
      perfect.contact_sim[k] = perfect.contact_active[k];
      perfect.force[k] = perfect.contact_active[k] ? 0.5 * (cfg.f_min + cfg.f_max) : 0.0;
    }
    CHECK(r_inter(perfect, cfg) == 1.0);
    CHECK(r_contact(perfect, cfg) == doctest::Approx(1.0).epsilon(1e-12));

    InteractionSample worse = perfect;
    worse.d_sim[0] += Vec3(0.03, 0, 0);
    CHECK(r_inter(worse, cfg) < r_inter(perfect, cfg));
  }
}

TEST_CASE("tracking terms at the reference equal one, penalties zero") {
  RewardConfig cfg;
  TrackingSample s;
  std::mt19937 rng(31);
  for (int k = 0; k < 3; ++k) {
    const Vec3 p = oracles::random_vec3(rng);
    const Quat q = Quat(Eigen::AngleAxisd(0.3 * k, Vec3::UnitY()));
    s.upper_sim.pos.push_back(p);
    s.upper_ref.pos.push_back(p);
    s.upper_sim.rot.push_back(q);
    s.upper_ref.rot.push_back(q);
    s.upper_sim.lin_vel.push_back(p);
    s.upper_ref.lin_vel.push_back(p);
    s.upper_sim.ang_vel.push_back(p);
    s.upper_ref.ang_vel.push_back(p);
  }
  s.lower_sim = s.upper_sim;
  s.lower_ref = s.upper_ref;
  s.action = VectorXd::Zero(4);
  s.prev_action = VectorXd::Zero(4);
  s.foot_contact = {true, true};
  s.foot_vel = {Vec3::Zero(), Vec3::Zero()};
  s.q = VectorXd::Zero(4);
  s.q_limit = VectorXd::Ones(4);
  s.tau = VectorXd::Zero(4);

  const TrackingReward r = tracking_rewards(s, cfg);
  for (const char* term : {"upper_pos", "upper_ori", "upper_lin_vel", "upper_ang_vel", "lower_pos",
                           "lower_ori", "lower_lin_vel", "lower_ang_vel", "anchor_pos", "anchor_ori"})
    CHECK(r.terms.at(term) == doctest::Approx(1.0).epsilon(1e-12));
  for (const char* term : {"action_rate", "feet_slip", "joint_limit", "torque"})
    CHECK(r.terms.at(term) == 0.0);
}

TEST_CASE("joint limit example: 0.1 rad over at weight -10 contributes -1") {
  RewardConfig cfg;
  TrackingSample s;
  s.action = VectorXd::Zero(1);
  s.prev_action = VectorXd::Zero(1);
  s.q = VectorXd::Constant(1, 1.1);
  s.q_limit = VectorXd::Ones(1);
  s.tau = VectorXd::Zero(1);

  const TrackingReward r = tracking_rewards(s, cfg);
  CHECK(r.terms.at("joint_limit") == doctest::Approx(0.1).epsilon(1e-12));
  // isolate the contribution against the same sample with no violation
  TrackingSample ok = s;
  ok.q[0] = 0.5;
  const double delta = tracking_rewards(s, cfg).total - tracking_rewards(ok, cfg).total;
  CHECK(delta == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("tracking matches an independently coded formula set") {
  std::mt19937 rng(37);
  RewardConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    TrackingSample s;
    auto fill = [&](BodyTrackingState& b, int n) {
      for (int k = 0; k < n; ++k) {
        b.pos.push_back(oracles::random_vec3(rng));
        Quat q(oracles::random_vec3(rng).x(), oracles::random_vec3(rng).x(),
               oracles::random_vec3(rng).x(), oracles::random_vec3(rng).x());
        if (q.norm() < 1e-6) q = Quat::Identity();
        q.normalize();
        b.rot.push_back(q);
        b.lin_vel.push_back(oracles::random_vec3(rng));
        b.ang_vel.push_back(oracles::random_vec3(rng));
      }
    };
    fill(s.upper_sim, 3);
    fill(s.upper_ref, 3);
    fill(s.lower_sim, 2);
    fill(s.lower_ref, 2);
    s.root_pos_sim = oracles::random_vec3(rng);
    s.root_pos_ref = oracles::random_vec3(rng);
    s.action = oracles::random_vector(5, rng);
    s.prev_action = oracles::random_vector(5, rng);
    s.foot_contact = {true, false};
    s.foot_vel = {oracles::random_vec3(rng), oracles::random_vec3(rng)};
    s.q = oracles::random_vector(5, rng);
    s.q_limit = VectorXd::Constant(5, 0.5);
    s.tau = oracles::random_vector(5, rng);

    const TrackingReward r = tracking_rewards(s, cfg);

    double pos_err = 0.0;
    for (int k = 0; k < 3; ++k) pos_err += (s.upper_sim.pos[k] - s.upper_ref.pos[k]).squaredNorm();
    CHECK(r.terms.at("upper_pos") ==
          doctest::Approx(std::exp(-(pos_err / 3.0) / (cfg.sigma_pos * cfg.sigma_pos))).epsilon(1e-12));

    double ori_err = 0.0;
    for (int k = 0; k < 2; ++k) {
      Eigen::AngleAxisd aa(s.lower_sim.rot[k].toRotationMatrix().transpose() *
                           s.lower_ref.rot[k].toRotationMatrix());
      ori_err += aa.angle() * aa.angle();
    }
    CHECK(r.terms.at("lower_ori") ==
          doctest::Approx(std::exp(-(ori_err / 2.0) / (cfg.sigma_ori * cfg.sigma_ori))).epsilon(1e-12));

    CHECK(r.terms.at("action_rate") ==
          doctest::Approx((s.action - s.prev_action).squaredNorm()).epsilon(1e-12));
    CHECK(r.terms.at("feet_slip") ==
          doctest::Approx(s.foot_vel[0].head<2>().squaredNorm()).epsilon(1e-12));

    double limit = 0.0;
    for (int j = 0; j < 5; ++j) limit += std::max(0.0, std::abs(s.q[j]) - 0.5);
    CHECK(r.terms.at("joint_limit") == doctest::Approx(limit).epsilon(1e-12));
    CHECK(r.terms.at("torque") == doctest::Approx(s.tau.squaredNorm()).epsilon(1e-12));

    double total = cfg.w_upper_pos * r.terms.at("upper_pos") + cfg.w_upper_ori * r.terms.at("upper_ori") +
                   cfg.w_upper_lin_vel * r.terms.at("upper_lin_vel") +
                   cfg.w_upper_ang_vel * r.terms.at("upper_ang_vel") +
                   cfg.w_lower_pos * r.terms.at("lower_pos") + cfg.w_lower_ori * r.terms.at("lower_ori") +
                   cfg.w_lower_lin_vel * r.terms.at("lower_lin_vel") +
                   cfg.w_lower_ang_vel * r.terms.at("lower_ang_vel") +
                   cfg.w_anchor_pos * r.terms.at("anchor_pos") +
                   cfg.w_anchor_ori * r.terms.at("anchor_ori") +
                   cfg.w_action_rate * r.terms.at("action_rate") +
                   cfg.w_feet_slip * r.terms.at("feet_slip") +
                   cfg.w_joint_limit * r.terms.at("joint_limit") + cfg.w_torque * r.terms.at("torque");
    CHECK(r.total == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("batch kernels: the serial path is the reference") {
  std::mt19937 rng(41);
  RewardConfig cfg;
  std::vector<InteractionSample> samples;
  for (int i = 0; i < 200; ++i) samples.push_back(random_sample(rng, 5, 5));
  const auto serial = r_inter_batch(samples, cfg, Exec::Serial);
  const auto parallel = r_inter_batch(samples, cfg, Exec::Parallel);
  CHECK(serial == parallel);
  const auto serial_c = r_contact_batch(samples, cfg, Exec::Serial);
  const auto parallel_c = r_contact_batch(samples, cfg, Exec::Parallel);
  CHECK(serial_c == parallel_c);
}

TEST_CASE("config validation") {
  RewardConfig bad;
  bad.beta = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RewardConfig{};
  bad.f_min = 300.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  InteractionSample s;
  s.d_sim.push_back(Vec3::Zero());
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

}  // TEST_SUITE
