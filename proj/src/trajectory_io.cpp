#include "duet/trajectory_io.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace duet {
namespace {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

njson vec3_json(const Vec3& v) { return njson::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from(const njson& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

njson trajectory_json(const RobotTrajectory& traj) {
  njson j;
  j["schema"] = "duet-trajectory";
  j["schema_version"] = 1;
  j["robots"] = {traj.robot_names[0], traj.robot_names[1]};
  j["frame_dt"] = traj.frame_dt;
  j["config_hash"] = traj.config_hash;

  njson frames = njson::array();
  for (const auto& frame : traj.frames) {
    njson agents = njson::array();
    for (int a = 0; a < 2; ++a) {
      const RobotConfiguration& c = frame[static_cast<std::size_t>(a)];
      njson agent;
      agent["q"] = std::vector<double>(c.q.data(), c.q.data() + c.q.size());
      agent["root_pos"] = vec3_json(c.root_pos);
      agent["root_rot"] = njson::array({c.root_rot.w(), c.root_rot.x(), c.root_rot.y(), c.root_rot.z()});
      agents.push_back(std::move(agent));
    }
    njson f;
    f["agents"] = std::move(agents);
    frames.push_back(std::move(f));
  }
  j["frames"] = std::move(frames);

  const ReferencePair& ref = traj.reference;
  njson r;
  r["keypoints"] = ref.keypoint_names;
  r["frame_dt"] = ref.frame_dt;
  r["h_robot"] = ref.h_robot;
  r["s_individual"] = {ref.s_individual[0], ref.s_individual[1]};
  r["s_unified"] = ref.s_unified;
  njson uni = njson::array();
  for (const auto& frame : ref.p_uni) {
    njson agents = njson::array();
    for (int a = 0; a < 2; ++a) {
      njson pts = njson::array();
      for (const Vec3& p : frame[static_cast<std::size_t>(a)]) pts.push_back(vec3_json(p));
      agents.push_back(std::move(pts));
    }
    uni.push_back(std::move(agents));
  }
  r["p_uni"] = std::move(uni);
  j["reference"] = std::move(r);
  return j;
}

njson priors_json(const GraphPriors& priors) {
  njson j;
  j["schema"] = "duet-priors";
  j["schema_version"] = 1;
  j["eps_contact"] = priors.eps_contact;
  j["vertices"] = priors.vertex_names;

  njson inter = njson::array();
  for (const auto& frame : priors.interaction_frames) {
    njson edges = njson::array();
    for (const InterEdge& e : frame) {
      njson edge;
      edge["i"] = e.i;
      edge["j"] = e.j;
      edge["omega"] = e.omega;
      edge["ref"] = vec3_json(e.ref_rel);
      edge["d_ref"] = e.d_ref;
      edges.push_back(std::move(edge));
    }
    inter.push_back(std::move(edges));
  }
  j["interaction"] = std::move(inter);

  njson contacts = njson::array();
  for (const auto& frame : priors.contact_frames) {
    njson flags = njson::array();
    for (const ContactFlag& c : frame) {
      if (!c.contact) continue;
      njson f;
      f["a"] = c.link_a;
      f["b"] = c.link_b;
      flags.push_back(std::move(f));
    }
    contacts.push_back(std::move(flags));
  }
  j["contacts"] = std::move(contacts);
  return j;
}

njson diagnostics_json(const RobotTrajectory& traj) {
  njson j;
  j["schema"] = "duet-diagnostics";
  j["schema_version"] = 1;
  njson frames = njson::array();
  for (const FrameDiag& d : traj.diags) {
    njson f;
    f["objective"] = d.objective;
    f["max_limit_violation"] = d.max_limit_violation;
    f["min_clearance"] = d.min_clearance;
    f["max_step"] = d.max_step;
    f["relaxed"] = d.relaxed;
    f["failed"] = d.failed;
    njson iters = njson::array();
    for (const SqpIterDiag& it : d.iters) {
      njson i;
      i["objective_before"] = it.objective_before;
      i["model_objective"] = it.model_objective;
      i["step_inf_norm"] = it.step_inf_norm;
      i["zero_feasible"] = it.zero_feasible;
      i["qp_status"] = it.qp_status;
      i["qp_iterations"] = it.qp_iterations;
      iters.push_back(std::move(i));
    }
    f["iters"] = std::move(iters);
    frames.push_back(std::move(f));
  }
  j["frames"] = std::move(frames);
  return j;
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::size_t write_trajectory(const RobotTrajectory& traj, const std::string& dir) {
  if (traj.frames.empty()) throw ConfigError("refusing to write an empty trajectory");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());

  const std::string traj_text = trajectory_json(traj).dump(1) + "\n";
  const std::string priors_text = priors_json(traj.priors).dump(1) + "\n";
  const std::string diag_text = diagnostics_json(traj).dump(1) + "\n";
  atomic_write_file((fs::path(dir) / "trajectory.json").string(), traj_text);
  atomic_write_file((fs::path(dir) / "priors.json").string(), priors_text);
  atomic_write_file((fs::path(dir) / "diagnostics.json").string(), diag_text);
  return traj_text.size() + priors_text.size() + diag_text.size();
}

namespace {

njson load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  njson j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return j;
}

}  // namespace

RobotTrajectory read_trajectory(const std::string& dir) {
  RobotTrajectory traj;
  const njson j = load_json(fs::path(dir) / "trajectory.json");
  try {
    if (j.value("schema", "") != "duet-trajectory") throw ConfigError("not a duet-trajectory file");
    traj.frame_dt = j.at("frame_dt").get<double>();
    traj.config_hash = j.value("config_hash", "");
    traj.robot_names[0] = j.at("robots")[0].get<std::string>();
    traj.robot_names[1] = j.at("robots")[1].get<std::string>();

    for (const auto& f : j.at("frames")) {
      std::array<RobotConfiguration, 2> frame;
      const auto& agents = f.at("agents");
      for (int a = 0; a < 2; ++a) {
        const auto& agent = agents[static_cast<std::size_t>(a)];
        const auto q = agent.at("q").get<std::vector<double>>();
        frame[static_cast<std::size_t>(a)].q =
            Eigen::Map<const VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
        frame[static_cast<std::size_t>(a)].root_pos = vec3_from(agent.at("root_pos"));
        const auto& rot = agent.at("root_rot");
        frame[static_cast<std::size_t>(a)].root_rot =
            Quat(rot[0].get<double>(), rot[1].get<double>(), rot[2].get<double>(), rot[3].get<double>());
      }
      traj.frames.push_back(std::move(frame));
    }

    const auto& r = j.at("reference");
    traj.reference.keypoint_names = r.at("keypoints").get<std::vector<std::string>>();
    traj.reference.frame_dt = r.at("frame_dt").get<double>();
    traj.reference.h_robot = r.at("h_robot").get<double>();
    traj.reference.s_individual = {r.at("s_individual")[0].get<double>(),
                                   r.at("s_individual")[1].get<double>()};
    traj.reference.s_unified = r.at("s_unified").get<double>();
    for (const auto& frame : r.at("p_uni")) {
      std::array<std::vector<Vec3>, 2> pts;
      for (int a = 0; a < 2; ++a)
        for (const auto& p : frame[static_cast<std::size_t>(a)])
          pts[static_cast<std::size_t>(a)].push_back(vec3_from(p));
      traj.reference.p_uni.push_back(std::move(pts));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(dir + "/trajectory.json: " + e.what());
  }

  const njson pj = load_json(fs::path(dir) / "priors.json");
  try {
    if (pj.value("schema", "") != "duet-priors") throw ConfigError("not a duet-priors file");
    traj.priors.eps_contact = pj.at("eps_contact").get<double>();
    traj.priors.vertex_names = pj.at("vertices").get<std::vector<std::string>>();
    for (const auto& frame : pj.at("interaction")) {
      std::vector<InterEdge> edges;
      for (const auto& e : frame) {
        InterEdge edge;
        edge.i = e.at("i").get<int>();
        edge.j = e.at("j").get<int>();
        edge.omega = e.at("omega").get<double>();
        edge.ref_rel = vec3_from(e.at("ref"));
        edge.d_ref = e.at("d_ref").get<double>();
        edges.push_back(edge);
      }
      traj.priors.interaction_frames.push_back(std::move(edges));
    }
    for (const auto& frame : pj.at("contacts")) {
      std::vector<ContactFlag> flags;
      for (const auto& c : frame) flags.push_back({c.at("a").get<int>(), c.at("b").get<int>(), true});
      traj.priors.contact_frames.push_back(std::move(flags));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(dir + "/priors.json: " + e.what());
  }

  const fs::path diag_path = fs::path(dir) / "diagnostics.json";
  if (fs::exists(diag_path)) {
    const njson dj = load_json(diag_path);
    try {
      for (const auto& f : dj.at("frames")) {
        FrameDiag d;
        d.objective = f.at("objective").get<double>();
        d.max_limit_violation = f.at("max_limit_violation").get<double>();
        d.min_clearance = f.at("min_clearance").get<double>();
        d.max_step = f.at("max_step").get<double>();
        d.relaxed = f.at("relaxed").get<bool>();
        d.failed = f.at("failed").get<bool>();
        for (const auto& i : f.at("iters")) {
          SqpIterDiag it;
          it.objective_before = i.at("objective_before").get<double>();
          it.model_objective = i.at("model_objective").get<double>();
          it.step_inf_norm = i.at("step_inf_norm").get<double>();
          it.zero_feasible = i.at("zero_feasible").get<bool>();
          it.qp_status = i.at("qp_status").get<int>();
          it.qp_iterations = i.at("qp_iterations").get<int>();
          d.iters.push_back(it);
        }
        traj.diags.push_back(std::move(d));
      }
    } catch (const std::exception& e) {
      throw ConfigError(diag_path.string() + ": " + std::string(e.what()));
    }
  }
  return traj;
}

}  // namespace duet
