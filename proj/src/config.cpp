#include "duet/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace duet {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& known, const std::string& section) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config section '" + section + "': unknown key '" + it.key() + "'");
}

void load_solver(const json& j, SolverConfig& cfg) {
  check_keys(j, {"w_self", "w_inter", "w_reg", "lambda_rot", "trust_delta", "eps_safe",
                 "eps_stick", "sqp_iters_per_frame", "qp_tolerance", "activation_margin",
                 "recovery_cap", "collision_enabled", "self_collision", "enforce_l2_trust",
                 "foot_height_threshold", "foot_speed_threshold", "early_exit_step",
                 "collision_link_pairs"},
             "solver");
  cfg.w_self = j.value("w_self", cfg.w_self);
  cfg.w_inter = j.value("w_inter", cfg.w_inter);
  cfg.w_reg = j.value("w_reg", cfg.w_reg);
  cfg.lambda_rot = j.value("lambda_rot", cfg.lambda_rot);
  cfg.trust_delta = j.value("trust_delta", cfg.trust_delta);
  cfg.eps_safe = j.value("eps_safe", cfg.eps_safe);
  cfg.eps_stick = j.value("eps_stick", cfg.eps_stick);
  cfg.sqp_iters_per_frame = j.value("sqp_iters_per_frame", cfg.sqp_iters_per_frame);
  cfg.qp_tolerance = j.value("qp_tolerance", cfg.qp_tolerance);
  cfg.activation_margin = j.value("activation_margin", cfg.activation_margin);
  cfg.recovery_cap = j.value("recovery_cap", cfg.recovery_cap);
  cfg.collision_enabled = j.value("collision_enabled", cfg.collision_enabled);
  cfg.self_collision = j.value("self_collision", cfg.self_collision);
  cfg.enforce_l2_trust = j.value("enforce_l2_trust", cfg.enforce_l2_trust);
  cfg.foot_height_threshold = j.value("foot_height_threshold", cfg.foot_height_threshold);
  cfg.foot_speed_threshold = j.value("foot_speed_threshold", cfg.foot_speed_threshold);
  cfg.early_exit_step = j.value("early_exit_step", cfg.early_exit_step);
  if (j.contains("collision_link_pairs")) {
    cfg.collision_link_pairs.clear();
    for (const auto& e : j.at("collision_link_pairs")) {
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("solver.collision_link_pairs entries must be [link1, link2] pairs");
      cfg.collision_link_pairs.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  cfg.validate();
}

void load_mesh(const json& j, MeshConfig& cfg) {
  check_keys(j, {"vertex_names", "self_edges", "omega_max", "gamma", "r_inter", "eps_contact"},
             "mesh");
  if (j.contains("vertex_names"))
    cfg.vertex_names = j.at("vertex_names").get<std::vector<std::string>>();
  if (j.contains("self_edges")) {
    cfg.self_edges.clear();
    for (const auto& e : j.at("self_edges")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("mesh self_edges entries must be pairs");
      cfg.self_edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  cfg.omega_max = j.value("omega_max", cfg.omega_max);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.r_inter = j.value("r_inter", cfg.r_inter);
  cfg.eps_contact = j.value("eps_contact", cfg.eps_contact);
  if (cfg.omega_max <= 0.0 || cfg.gamma < 0.0 || cfg.r_inter <= 0.0 || cfg.eps_contact <= 0.0)
    throw ConfigError("mesh parameters must be positive (gamma may be zero)");
}

void load_rewards(const json& j, RewardConfig& cfg) {
  check_keys(j, {"sigma_inter", "sigma_c", "beta", "f_min", "f_max", "sigmas", "weights"},
             "rewards");
  cfg.sigma_inter = j.value("sigma_inter", cfg.sigma_inter);
  cfg.sigma_c = j.value("sigma_c", cfg.sigma_c);
  cfg.beta = j.value("beta", cfg.beta);
  cfg.f_min = j.value("f_min", cfg.f_min);
  cfg.f_max = j.value("f_max", cfg.f_max);
  if (j.contains("sigmas")) {
    const json& s = j.at("sigmas");
    check_keys(s, {"pos", "ori", "vel", "ang", "root", "root_ori"}, "rewards.sigmas");
    cfg.sigma_pos = s.value("pos", cfg.sigma_pos);
    cfg.sigma_ori = s.value("ori", cfg.sigma_ori);
    cfg.sigma_vel = s.value("vel", cfg.sigma_vel);
    cfg.sigma_ang = s.value("ang", cfg.sigma_ang);
    cfg.sigma_root = s.value("root", cfg.sigma_root);
    cfg.sigma_root_ori = s.value("root_ori", cfg.sigma_root_ori);
  }
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    check_keys(w,
               {"interact_edge", "contact", "upper_pos", "upper_ori", "upper_lin_vel",
                "upper_ang_vel", "lower_pos", "lower_ori", "lower_lin_vel", "lower_ang_vel",
                "anchor_pos", "anchor_ori", "action_rate", "feet_slip", "joint_limit", "torque"},
               "rewards.weights");
    cfg.w_interact_edge = w.value("interact_edge", cfg.w_interact_edge);
    cfg.w_contact = w.value("contact", cfg.w_contact);
    cfg.w_upper_pos = w.value("upper_pos", cfg.w_upper_pos);
    cfg.w_upper_ori = w.value("upper_ori", cfg.w_upper_ori);
    cfg.w_upper_lin_vel = w.value("upper_lin_vel", cfg.w_upper_lin_vel);
    cfg.w_upper_ang_vel = w.value("upper_ang_vel", cfg.w_upper_ang_vel);
    cfg.w_lower_pos = w.value("lower_pos", cfg.w_lower_pos);
    cfg.w_lower_ori = w.value("lower_ori", cfg.w_lower_ori);
    cfg.w_lower_lin_vel = w.value("lower_lin_vel", cfg.w_lower_lin_vel);
    cfg.w_lower_ang_vel = w.value("lower_ang_vel", cfg.w_lower_ang_vel);
    cfg.w_anchor_pos = w.value("anchor_pos", cfg.w_anchor_pos);
    cfg.w_anchor_ori = w.value("anchor_ori", cfg.w_anchor_ori);
    cfg.w_action_rate = w.value("action_rate", cfg.w_action_rate);
    cfg.w_feet_slip = w.value("feet_slip", cfg.w_feet_slip);
    cfg.w_joint_limit = w.value("joint_limit", cfg.w_joint_limit);
    cfg.w_torque = w.value("torque", cfg.w_torque);
  }
  cfg.validate();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  check_keys(j, {"solver", "mesh", "rewards", "h_robot", "height_strategy"}, "(top level)");

  RunConfig cfg;
  if (j.contains("solver")) load_solver(j.at("solver"), cfg.solver);
  if (j.contains("mesh")) load_mesh(j.at("mesh"), cfg.mesh);
  if (j.contains("rewards")) load_rewards(j.at("rewards"), cfg.rewards);
  cfg.h_robot = j.value("h_robot", cfg.h_robot);
  cfg.height_strategy = j.value("height_strategy", cfg.height_strategy);
  if (cfg.h_robot <= 0.0) throw ConfigError("h_robot must be positive");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string config_hash(const SolverConfig& solver, const MeshConfig& mesh) {
  json j;
  j["solver"] = {{"w_self", solver.w_self},
                 {"w_inter", solver.w_inter},
                 {"w_reg", solver.w_reg},
                 {"lambda_rot", solver.lambda_rot},
                 {"trust_delta", solver.trust_delta},
                 {"eps_safe", solver.eps_safe},
                 {"eps_stick", solver.eps_stick},
                 {"sqp_iters_per_frame", solver.sqp_iters_per_frame},
                 {"qp_tolerance", solver.qp_tolerance},
                 {"activation_margin", solver.activation_margin},
                 {"recovery_cap", solver.recovery_cap},
                 {"collision_enabled", solver.collision_enabled},
                 {"self_collision", solver.self_collision},
                 {"enforce_l2_trust", solver.enforce_l2_trust},
                 {"foot_height_threshold", solver.foot_height_threshold},
                 {"foot_speed_threshold", solver.foot_speed_threshold},
                 {"early_exit_step", solver.early_exit_step}};
  json pair_list = json::array();
  for (const auto& [a, b] : solver.collision_link_pairs) pair_list.push_back({a, b});
  j["solver"]["collision_link_pairs"] = pair_list;
  json edges = json::array();
  for (const auto& [a, b] : mesh.self_edges) edges.push_back({a, b});
  j["mesh"] = {{"vertex_names", mesh.vertex_names}, {"self_edges", edges},
               {"omega_max", mesh.omega_max},       {"gamma", mesh.gamma},
               {"r_inter", mesh.r_inter},           {"eps_contact", mesh.eps_contact}};

  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace duet
