// duet: batch front end for the dual-humanoid retargeting pipeline.
//
// Exit codes: 0 ok, 2 usage, 3 config/parse error, 4 solver failure, 5 I/O.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "duet/bvh.hpp"
#include "duet/config.hpp"
#include "duet/metrics.hpp"
#include "duet/phase_sync.hpp"
#include "duet/rewards.hpp"
#include "duet/solver.hpp"
#include "duet/trajectory_io.hpp"

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitSolver = 4;
constexpr int kExitIo = 5;

struct RetargetArgs {
  std::vector<std::string> clips;
  std::string bvh1, bvh2, bvh_map;
  double bvh_scale = 1.0;
  std::string robot1, robot2;
  std::string out_dir;
  std::string config_path;
  double h_robot = -1.0;  // <0: keep config value
  std::string height_strategy;
  double w_inter = -1.0;
  int sqp_iters = -1;
  bool no_collision = false;
  bool self_collision = false;
  bool dry_run = false;
  int jobs = 1;
};

struct MetricsArgs {
  std::string run_dir;
  std::string robot1, robot2;
  std::string out_dir;
  std::vector<std::string> rollouts;
};

struct GraphsArgs {
  std::string run_dir;
  std::string robot1, robot2;
  std::string out_path;
};

struct RewardsArgs {
  std::string samples_path;
  std::string config_path;
  std::string out_path;
};

struct SyncArgs {
  double k = 0.2;
  double drift1 = 1e-3, drift2 = -1e-3;
  double delay_lo = 0.02, delay_hi = 0.06;
  double drop = 0.0;
  std::uint64_t seed = 1;
  double duration = 60.0;
  double dt = 0.02;
  bool one_sided = false;
  std::string out_path;
};

duet::RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return duet::RunConfig{};
  return duet::load_run_config(path);
}

duet::DualMotionClip load_clip_from_bvh(const RetargetArgs& args) {
  const duet::BvhDocument doc1 = duet::parse_bvh_file(args.bvh1);
  const duet::BvhDocument doc2 = duet::parse_bvh_file(args.bvh2);
  if (doc1.frames.size() != doc2.frames.size())
    throw duet::ConfigError("BVH inputs differ in frame count");
  if (std::abs(doc1.frame_dt - doc2.frame_dt) > 1e-9)
    throw duet::ConfigError("BVH inputs differ in frame time");

  std::ifstream in(args.bvh_map);
  if (!in) throw duet::IoError("cannot open keypoint map: " + args.bvh_map);
  njson map;
  try {
    in >> map;
  } catch (const std::exception& e) {
    throw duet::ConfigError(args.bvh_map + ": invalid JSON: " + e.what());
  }
  std::vector<std::string> names, joints;
  for (auto it = map.begin(); it != map.end(); ++it) {
    names.push_back(it.key());
    joints.push_back(it.value().get<std::string>());
  }
  auto track1 = duet::extract_keypoints(doc1, joints, args.bvh_scale);
  auto track2 = duet::extract_keypoints(doc2, joints, args.bvh_scale);
  return duet::clip_from_tracks(doc1.frame_dt, names, std::move(track1), std::move(track2));
}

void apply_overrides(const RetargetArgs& args, duet::RunConfig& cfg) {
  if (args.h_robot > 0.0) cfg.h_robot = args.h_robot;
  if (!args.height_strategy.empty()) cfg.height_strategy = args.height_strategy;
  if (args.w_inter >= 0.0) cfg.solver.w_inter = args.w_inter;
  if (args.sqp_iters > 0) cfg.solver.sqp_iters_per_frame = args.sqp_iters;
  if (args.no_collision) cfg.solver.collision_enabled = false;
  if (args.self_collision) cfg.solver.self_collision = true;
}

int cmd_retarget(const RetargetArgs& args) {
  duet::RunConfig cfg = load_config_or_default(args.config_path);
  apply_overrides(args, cfg);

  const duet::RobotSpec spec1 = duet::load_robot_spec(args.robot1);
  const duet::RobotSpec spec2 =
      duet::load_robot_spec(args.robot2.empty() ? args.robot1 : args.robot2);

  struct Job {
    std::string label;
    duet::DualMotionClip clip;
    fs::path out;
  };
  std::vector<Job> jobs;
  const std::size_t total_inputs = args.clips.size() + (args.bvh1.empty() ? 0 : 1);
  if (!args.bvh1.empty()) {
    Job job;
    job.label = "bvh";
    job.clip = load_clip_from_bvh(args);
    job.out = total_inputs > 1 ? fs::path(args.out_dir) / job.label : fs::path(args.out_dir);
    jobs.push_back(std::move(job));
  }
  for (const std::string& path : args.clips) {
    Job job;
    job.label = fs::path(path).stem().string();
    job.clip = duet::read_keypoint_clip_file(path);
    job.out = total_inputs > 1 ? fs::path(args.out_dir) / job.label : fs::path(args.out_dir);
    jobs.push_back(std::move(job));
  }
  if (jobs.empty()) throw duet::ConfigError("no input clip (use --clip or --bvh1/--bvh2/--map)");

  if (args.dry_run) {
    std::cout << "dry run: inputs validated\n";
    for (const Job& job : jobs)
      std::cout << "  would retarget '" << job.label << "' (" << job.clip.frame_count()
                << " frames) -> " << job.out.string() << "\n";
    std::cout << "  robots: " << spec1.name << ", " << spec2.name << "\n";
    std::cout << "  config hash: " << duet::config_hash(cfg.solver, cfg.mesh) << "\n";
    return kExitOk;
  }

  std::vector<int> exit_codes(jobs.size(), kExitOk);
  std::vector<std::string> messages(jobs.size());

  const auto run_job = [&](std::size_t i) {
    Job& job = jobs[i];
    try {
      duet::RobotTrajectory traj = duet::retarget_clip(spec1, spec2, cfg.mesh, cfg.solver,
                                                       job.clip, cfg.h_robot, cfg.height_strategy);
      traj.config_hash = duet::config_hash(cfg.solver, cfg.mesh);
      duet::write_trajectory(traj, job.out.string());

      std::ostringstream msg;
      std::vector<std::size_t> failed_frames;
      for (std::size_t t = 0; t < traj.diags.size(); ++t)
        if (traj.diags[t].failed) failed_frames.push_back(t);
      msg << job.label << ": " << traj.frame_count() << " frames -> " << job.out.string();
      if (!failed_frames.empty()) {
        msg << " [solver failed on frames:";
        for (std::size_t t : failed_frames) msg << " " << t;
        msg << "]";
        exit_codes[i] = kExitSolver;
      }
      messages[i] = msg.str();
    } catch (const duet::IoError& e) {
      exit_codes[i] = kExitIo;
      messages[i] = job.label + ": " + e.what();
    } catch (const duet::ConfigError& e) {
      exit_codes[i] = kExitConfig;
      messages[i] = job.label + ": " + e.what();
    } catch (const std::exception& e) {
      exit_codes[i] = kExitSolver;
      messages[i] = job.label + ": " + e.what();
    }
  };

#ifdef DUET_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, args.jobs))
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(jobs.size()); ++i)
    run_job(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
#endif

  int rc = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::cout << messages[i] << "\n";
    if (exit_codes[i] != kExitOk) rc = exit_codes[i];
  }
  return rc;
}

njson metrics_json(const duet::RetargetMetrics& m) {
  njson j;
  j["ipr_percent"] = m.ipr;
  j["mpd_cm"] = m.mpd_cm;
  j["iee_retarget_percent"] = m.iee_retarget;
  j["iee_policy_percent"] = m.iee_policy;
  j["f1_strict"] = {{"f1", m.f1_strict.f1},
                    {"precision", m.f1_strict.precision},
                    {"recall", m.f1_strict.recall}};
  j["f1_loose"] = {{"f1", m.f1_loose.f1},
                   {"precision", m.f1_loose.precision},
                   {"recall", m.f1_loose.recall}};
  j["empty_edges"] = m.empty_edges;
  return j;
}

int cmd_metrics(const MetricsArgs& args) {
  const duet::RobotSpec spec1 = duet::load_robot_spec(args.robot1);
  const duet::RobotSpec spec2 =
      duet::load_robot_spec(args.robot2.empty() ? args.robot1 : args.robot2);
  const duet::RobotTrajectory traj = duet::read_trajectory(args.run_dir);

  duet::MetricsOptions opts;
  const duet::RetargetMetrics m = duet::compute_retarget_metrics(traj, spec1, spec2, opts);

  njson report;
  report["schema"] = "duet-metrics";
  report["schema_version"] = 1;
  report["config_hash"] = traj.config_hash;
  report["retargeting"] = metrics_json(m);

  std::ostringstream table;
  table << "metric                      value\n";
  table << "--------------------  -----------\n";
  char line[160];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof(line), "%-20s  %11.4f\n", name, v);
    table << line;
  };
  row("IPR (%)", m.ipr);
  row("MPD (cm)", m.mpd_cm);
  row("IEE retarget (%)", m.iee_retarget);
  row("IEE policy (%)", m.iee_policy);
  row("F1 strict", m.f1_strict.f1);
  row("F1 loose", m.f1_loose.f1);

  if (!args.rollouts.empty()) {
    njson rollouts = njson::array();
    std::vector<duet::PolicyMetrics> pms;
    for (const std::string& rdir : args.rollouts) {
      const duet::RobotTrajectory rollout = duet::read_trajectory(rdir);
      duet::PolicyMetrics pm = duet::compute_policy_metrics(rollout, traj, spec1, spec2, opts);
      njson pj;
      pj["rollout"] = rdir;
      pj["isr_percent"] = pm.isr;
      pj["csr_percent"] = pm.csr;
      pj["cer"] = pm.cer;
      pj["iee_mean_percent"] = pm.iee_mean;
      pj["dsr_pass"] = pm.dsr_pass;
      rollouts.push_back(std::move(pj));
      pms.push_back(std::move(pm));
    }
    const double dsr = duet::downstream_success_rate(pms);
    report["policy"] = {{"rollouts", rollouts}, {"dsr_percent", dsr}};
    table << "--- policy (" << pms.size() << " rollouts) ---\n";
    for (std::size_t i = 0; i < pms.size(); ++i) {
      std::snprintf(line, sizeof(line), "rollout %-3zu ISR %6.2f  CSR %6.2f  CER %6.4f\n", i,
                    pms[i].isr, pms[i].csr, pms[i].cer);
      table << line;
    }
    row("DSR (%)", dsr);
  }

  std::ostringstream csv;
  csv << "frame,depth_m,iee_retarget_percent,iee_policy_percent\n";
  csv.precision(17);
  for (std::size_t t = 0; t < m.trace_depth.size(); ++t) {
    csv << t << "," << m.trace_depth[t] << "," << m.trace_iee_retarget[t] << ","
        << m.trace_iee_policy[t] << "\n";
  }

  const fs::path out_dir = args.out_dir.empty() ? fs::path(args.run_dir) : fs::path(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw duet::IoError("cannot create directory " + out_dir.string());
  duet::atomic_write_file((out_dir / "metrics.json").string(), report.dump(1) + "\n");
  duet::atomic_write_file((out_dir / "metrics.txt").string(), table.str());
  duet::atomic_write_file((out_dir / "traces.csv").string(), csv.str());
  std::cout << table.str();
  return kExitOk;
}

int cmd_graphs(const GraphsArgs& args) {
  const duet::RobotSpec spec1 = duet::load_robot_spec(args.robot1);
  const duet::RobotSpec spec2 =
      duet::load_robot_spec(args.robot2.empty() ? args.robot1 : args.robot2);
  const duet::RobotTrajectory traj = duet::read_trajectory(args.run_dir);
  const duet::GraphPriors& priors = traj.priors;

  njson j;
  j["schema"] = "duet-graphs";
  j["schema_version"] = 1;
  j["vertices"] = priors.vertex_names;
  j["eps_contact"] = priors.eps_contact;

  std::vector<int> kp1, kp2;
  for (const std::string& name : priors.vertex_names) {
    const int k1 = spec1.keypoint_index(name);
    const int k2 = spec2.keypoint_index(name);
    if (k1 < 0 || k2 < 0) throw duet::ConfigError("robot lacks keypoint '" + name + "'");
    kp1.push_back(k1);
    kp2.push_back(k2);
  }

  njson frames = njson::array();
  for (std::size_t t = 0; t < traj.frame_count(); ++t) {
    njson frame;
    const duet::FkResult fk1 = duet::forward_kinematics(spec1, traj.frames[t][0]);
    const duet::FkResult fk2 = duet::forward_kinematics(spec2, traj.frames[t][1]);
    njson pos = njson::array();
    for (int a = 0; a < 2; ++a) {
      njson agent = njson::array();
      const duet::FkResult& fk = a == 0 ? fk1 : fk2;
      const auto& kps = a == 0 ? kp1 : kp2;
      for (int kp : kps) {
        const duet::Vec3& p = fk.keypoints[static_cast<std::size_t>(kp)];
        agent.push_back({p.x(), p.y(), p.z()});
      }
      pos.push_back(std::move(agent));
    }
    frame["positions"] = std::move(pos);

    njson edges = njson::array();
    if (t < priors.interaction_frames.size()) {
      for (const duet::InterEdge& e : priors.interaction_frames[t]) {
        edges.push_back({{"i", e.i},
                         {"j", e.j},
                         {"omega", e.omega},
                         {"ref", {e.ref_rel.x(), e.ref_rel.y(), e.ref_rel.z()}}});
      }
    }
    frame["interaction"] = std::move(edges);

    njson contacts = njson::array();
    if (t < priors.contact_frames.size()) {
      for (const duet::ContactFlag& c : priors.contact_frames[t]) {
        if (!c.contact) continue;
        contacts.push_back({{"a", spec1.links[static_cast<std::size_t>(c.link_a)].name},
                            {"b", spec2.links[static_cast<std::size_t>(c.link_b)].name}});
      }
    }
    frame["contacts"] = std::move(contacts);
    frames.push_back(std::move(frame));
  }
  j["frames"] = std::move(frames);

  duet::atomic_write_file(args.out_path, j.dump(1) + "\n");
  std::cout << "graphs: " << traj.frame_count() << " frames -> " << args.out_path << "\n";
  return kExitOk;
}

duet::Vec3 vec3_from_json(const njson& j) {
  if (!j.is_array() || j.size() != 3) throw duet::ConfigError("expected a 3-array");
  return duet::Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

duet::Quat quat_from_json(const njson& j) {
  if (!j.is_array() || j.size() != 4) throw duet::ConfigError("expected a quaternion [w,x,y,z]");
  return duet::Quat(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

duet::BodyTrackingState body_from_json(const njson& j) {
  duet::BodyTrackingState s;
  for (const auto& p : j.value("pos", njson::array())) s.pos.push_back(vec3_from_json(p));
  for (const auto& q : j.value("rot", njson::array())) s.rot.push_back(quat_from_json(q));
  for (const auto& v : j.value("lin_vel", njson::array())) s.lin_vel.push_back(vec3_from_json(v));
  for (const auto& v : j.value("ang_vel", njson::array())) s.ang_vel.push_back(vec3_from_json(v));
  return s;
}

duet::VectorXd vector_from_json(const njson& j) {
  duet::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

int cmd_rewards(const RewardsArgs& args) {
  duet::RunConfig cfg = load_config_or_default(args.config_path);

  std::ifstream in(args.samples_path);
  if (!in) throw duet::IoError("cannot open samples file: " + args.samples_path);
  njson samples;
  try {
    in >> samples;
  } catch (const std::exception& e) {
    throw duet::ConfigError(args.samples_path + ": invalid JSON: " + e.what());
  }

  njson report;
  report["schema"] = "duet-rewards";
  report["schema_version"] = 1;

  std::vector<duet::InteractionSample> inter;
  for (const auto& sj : samples.value("interaction_samples", njson::array())) {
    duet::InteractionSample s;
    for (const auto& e : sj.value("edges", njson::array())) {
      s.d_sim.push_back(vec3_from_json(e.at("d_sim")));
      s.d_ref.push_back(vec3_from_json(e.at("d_ref")));
      s.omega.push_back(e.at("omega").get<double>());
    }
    if (sj.contains("contacts")) {
      const auto& c = sj.at("contacts");
      for (const auto& v : c.value("sim", njson::array())) s.contact_sim.push_back(v.get<int>() != 0);
      for (const auto& v : c.value("force", njson::array())) s.force.push_back(v.get<double>());
      for (const auto& v : c.value("active", njson::array()))
        s.contact_active.push_back(v.get<int>() != 0);
    }
    s.validate();
    inter.push_back(std::move(s));
  }
  const auto r_inter_vals = duet::r_inter_batch(inter, cfg.rewards);
  const auto r_contact_vals = duet::r_contact_batch(inter, cfg.rewards);
  njson inter_out = njson::array();
  for (std::size_t i = 0; i < inter.size(); ++i)
    inter_out.push_back({{"r_inter", r_inter_vals[i]}, {"r_contact", r_contact_vals[i]}});
  report["interaction"] = std::move(inter_out);

  njson track_out = njson::array();
  for (const auto& sj : samples.value("tracking_samples", njson::array())) {
    duet::TrackingSample s;
    s.upper_sim = body_from_json(sj.at("upper").at("sim"));
    s.upper_ref = body_from_json(sj.at("upper").at("ref"));
    s.lower_sim = body_from_json(sj.at("lower").at("sim"));
    s.lower_ref = body_from_json(sj.at("lower").at("ref"));
    if (sj.contains("root")) {
      s.root_pos_sim = vec3_from_json(sj.at("root").at("sim").at("pos"));
      s.root_pos_ref = vec3_from_json(sj.at("root").at("ref").at("pos"));
      s.root_rot_sim = quat_from_json(sj.at("root").at("sim").at("rot"));
      s.root_rot_ref = quat_from_json(sj.at("root").at("ref").at("rot"));
    }
    s.action = vector_from_json(sj.value("action", njson::array()));
    s.prev_action = vector_from_json(sj.value("prev_action", njson::array()));
    for (const auto& v : sj.value("foot_contact", njson::array()))
      s.foot_contact.push_back(v.get<int>() != 0);
    for (const auto& v : sj.value("foot_vel", njson::array()))
      s.foot_vel.push_back(vec3_from_json(v));
    s.q = vector_from_json(sj.value("q", njson::array()));
    s.q_limit = vector_from_json(sj.value("q_limit", njson::array()));
    s.tau = vector_from_json(sj.value("tau", njson::array()));

    const duet::TrackingReward r = duet::tracking_rewards(s, cfg.rewards);
    njson terms;
    for (const auto& [name, value] : r.terms) terms[name] = value;
    track_out.push_back({{"terms", terms}, {"total", r.total}});
  }
  report["tracking"] = std::move(track_out);

  duet::atomic_write_file(args.out_path, report.dump(1) + "\n");
  std::cout << "rewards: " << inter.size() << " interaction, " << track_out.size()
            << " tracking samples -> " << args.out_path << "\n";
  return kExitOk;
}

int cmd_sync(const SyncArgs& args) {
  duet::SyncParams p;
  p.agent1 = {0.0, args.drift1, args.k};
  p.agent2 = {0.0, args.drift2, args.k};
  p.channel = {args.delay_lo, args.delay_hi, args.drop, args.seed};
  p.dt = args.dt;
  p.duration = args.duration;
  p.both_correct = !args.one_sided;

  const duet::SyncTrace trace = duet::simulate_sync(p);

  std::ostringstream csv;
  csv.precision(17);
  csv << "time,phi1,phi2,rate1,rate2,error\n";
  for (std::size_t i = 0; i < trace.time.size(); ++i) {
    csv << trace.time[i] << "," << trace.phi1[i] << "," << trace.phi2[i] << "," << trace.rate1[i]
        << "," << trace.rate2[i] << "," << trace.error[i] << "\n";
  }
  if (!args.out_path.empty()) duet::atomic_write_file(args.out_path, csv.str());

  // slope of |error| over the final half, for spotting open-loop divergence
  double slope = 0.0;
  if (trace.error.size() > 2) {
    const std::size_t half = trace.error.size() / 2;
    slope = (std::abs(trace.error.back()) - std::abs(trace.error[half])) /
            (trace.time.back() - trace.time[half]);
  }
  std::cout << "sync: seed " << args.seed << ", k " << args.k << ", steps " << trace.time.size()
            << "\n";
  std::cout << "  steady-state |error| " << trace.steady_state_error() << "\n";
  std::cout << "  max |error| " << trace.max_abs_error() << "\n";
  std::cout << "  tail slope " << slope << " /s"
            << (args.k == 0.0 ? " (open loop: expect linear growth)" : "") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-humanoid interaction-aware retargeting toolkit"};
  app.require_subcommand(1);

  RetargetArgs rt;
  CLI::App* retarget = app.add_subcommand("retarget", "retarget a two-agent clip onto two robots");
  retarget->add_option("--clip", rt.clips, "keypoint clip (DUET-KPTS); repeatable");
  retarget->add_option("--bvh1", rt.bvh1, "agent 1 BVH file");
  retarget->add_option("--bvh2", rt.bvh2, "agent 2 BVH file");
  retarget->add_option("--map", rt.bvh_map, "keypoint->joint map JSON (BVH input)");
  retarget->add_option("--bvh-scale", rt.bvh_scale, "unit scale applied to BVH data");
  retarget->add_option("--robot", rt.robot1, "robot spec JSON")->required();
  retarget->add_option("--robot2", rt.robot2, "second robot spec (defaults to --robot)");
  retarget->add_option("--out", rt.out_dir, "output directory")->required();
  retarget->add_option("--config", rt.config_path, "run config JSON");
  retarget->add_option("--h-robot", rt.h_robot, "target robot height override");
  retarget->add_option("--height-strategy", rt.height_strategy, "head_foot or bbox");
  retarget->add_option("--w-inter", rt.w_inter, "override the interaction weight");
  retarget->add_option("--sqp-iters", rt.sqp_iters, "SQP iterations per frame");
  retarget->add_flag("--no-collision", rt.no_collision, "disable collision constraints");
  retarget->add_flag("--self-collision", rt.self_collision, "enable self-collision rows");
  retarget->add_flag("--dry-run", rt.dry_run, "validate inputs and print the plan");
  retarget->add_option("--jobs", rt.jobs, "clips solved in parallel");

  MetricsArgs mt;
  CLI::App* metrics = app.add_subcommand("metrics", "evaluate a retargeted run");
  metrics->add_option("--run", mt.run_dir, "run directory (trajectory.json, priors.json)")
      ->required();
  metrics->add_option("--robot", mt.robot1, "robot spec JSON")->required();
  metrics->add_option("--robot2", mt.robot2, "second robot spec");
  metrics->add_option("--out", mt.out_dir, "output directory (defaults to --run)");
  metrics->add_option("--rollout", mt.rollouts, "rollout run directory; repeatable");

  GraphsArgs gr;
  CLI::App* graphs = app.add_subcommand("graphs", "export per-frame interaction/contact graphs");
  graphs->add_option("--run", gr.run_dir, "run directory")->required();
  graphs->add_option("--robot", gr.robot1, "robot spec JSON")->required();
  graphs->add_option("--robot2", gr.robot2, "second robot spec");
  graphs->add_option("--out", gr.out_path, "output JSON path")->required();

  RewardsArgs rw;
  CLI::App* rewards = app.add_subcommand("rewards", "score reward samples");
  rewards->add_option("--samples", rw.samples_path, "samples JSON")->required();
  rewards->add_option("--config", rw.config_path, "run config JSON");
  rewards->add_option("--out", rw.out_path, "output JSON path")->required();

  SyncArgs sy;
  CLI::App* sync = app.add_subcommand("sync", "simulate the phase synchronization law");
  sync->add_option("--k", sy.k, "proportional gain");
  sync->add_option("--drift1", sy.drift1, "agent 1 clock drift");
  sync->add_option("--drift2", sy.drift2, "agent 2 clock drift");
  sync->add_option("--delay-lo", sy.delay_lo, "min message delay, s");
  sync->add_option("--delay-hi", sy.delay_hi, "max message delay, s");
  sync->add_option("--drop", sy.drop, "message drop probability");
  sync->add_option("--seed", sy.seed, "channel RNG seed");
  sync->add_option("--duration", sy.duration, "simulated seconds");
  sync->add_option("--dt", sy.dt, "control step, s");
  sync->add_flag("--one-sided", sy.one_sided, "only agent 1 applies the correction");
  sync->add_option("--out", sy.out_path, "trace CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (retarget->parsed()) return cmd_retarget(rt);
    if (metrics->parsed()) return cmd_metrics(mt);
    if (graphs->parsed()) return cmd_graphs(gr);
    if (rewards->parsed()) return cmd_rewards(rw);
    if (sync->parsed()) return cmd_sync(sy);
  } catch (const duet::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const duet::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const duet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const duet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
