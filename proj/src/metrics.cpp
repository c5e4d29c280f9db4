#include "duet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "duet/collision.hpp"

namespace duet {
namespace {

struct VertexMap {
  std::vector<int> robot_kp[2];
  std::vector<int> clip_kp;
  int count = 0;
};

VertexMap build_vertex_map(const GraphPriors& priors, const ReferencePair& ref,
                           const RobotSpec& spec1, const RobotSpec& spec2) {
  VertexMap map;
  map.count = static_cast<int>(priors.vertex_names.size());
  if (map.count == 0) throw ConfigError("priors carry no vertex names");
  const RobotSpec* specs[2] = {&spec1, &spec2};
  map.clip_kp.resize(static_cast<std::size_t>(map.count));
  for (int a = 0; a < 2; ++a) map.robot_kp[a].resize(static_cast<std::size_t>(map.count));
  for (int v = 0; v < map.count; ++v) {
    const std::string& name = priors.vertex_names[static_cast<std::size_t>(v)];
    map.clip_kp[static_cast<std::size_t>(v)] = ref.keypoint_index(name);
    if (map.clip_kp[static_cast<std::size_t>(v)] < 0)
      throw ConfigError("reference lacks keypoint '" + name + "'");
    for (int a = 0; a < 2; ++a) {
      map.robot_kp[a][static_cast<std::size_t>(v)] = specs[a]->keypoint_index(name);
      if (map.robot_kp[a][static_cast<std::size_t>(v)] < 0)
        throw ConfigError("robot '" + specs[a]->name + "' lacks keypoint '" + name + "'");
    }
  }
  return map;
}

void frame_vertex_positions(const RobotTrajectory& traj, const RobotSpec& spec1,
                            const RobotSpec& spec2, const VertexMap& map, std::size_t t,
                            std::vector<Vec3>& agent1, std::vector<Vec3>& agent2) {
  const FkResult fk1 = forward_kinematics(spec1, traj.frames[t][0]);
  const FkResult fk2 = forward_kinematics(spec2, traj.frames[t][1]);
  agent1.resize(static_cast<std::size_t>(map.count));
  agent2.resize(static_cast<std::size_t>(map.count));
  for (int v = 0; v < map.count; ++v) {
    agent1[static_cast<std::size_t>(v)] =
        fk1.keypoints[static_cast<std::size_t>(map.robot_kp[0][static_cast<std::size_t>(v)])];
    agent2[static_cast<std::size_t>(v)] =
        fk2.keypoints[static_cast<std::size_t>(map.robot_kp[1][static_cast<std::size_t>(v)])];
  }
}

}  // namespace

PenetrationMetrics penetration_metrics(const RobotTrajectory& traj, const RobotSpec& spec1,
                                       const RobotSpec& spec2, const MetricsOptions& opts) {
  PenetrationMetrics out;
  const auto pairs = inter_robot_pairs(spec1, spec2);
  out.depth.assign(traj.frame_count(), 0.0);

  for_each_index(traj.frame_count(), opts.exec, [&](std::size_t t) {
    const FkResult fk1 = forward_kinematics(spec1, traj.frames[t][0]);
    const FkResult fk2 = forward_kinematics(spec2, traj.frames[t][1]);
    out.depth[t] = max_penetration({&spec1, &spec2}, {&fk1, &fk2}, pairs);
  });

  long violating = 0;
  for (double d : out.depth) {
    if (d > opts.penetration_tol) ++violating;
    out.mpd_cm = std::max(out.mpd_cm, d * 100.0);
  }
  out.ipr = traj.frame_count() > 0
                ? 100.0 * static_cast<double>(violating) / static_cast<double>(traj.frame_count())
                : 0.0;
  return out;
}

namespace {

struct FrameEdgeStats {
  double ret_err_sum = 0.0;
  long ret_count = 0;
  double pol_num = 0.0, pol_den = 0.0;
  long tp_s = 0, fp_s = 0, fn_s = 0;
  long tp_l = 0, fp_l = 0, fn_l = 0;
};

F1Score f1_from_counts(long tp, long fp, long fn) {
  F1Score f;
  f.tp = tp;
  f.fp = fp;
  f.fn = fn;
  if (tp + fp + fn == 0) {  // no predictions and no ground truth: vacuously perfect
    f.precision = f.recall = f.f1 = 1.0;
    return f;
  }
  const double p_den = static_cast<double>(tp + fp);
  const double r_den = static_cast<double>(tp + fn);
  f.precision = p_den > 0 ? static_cast<double>(tp) / p_den : 0.0;
  f.recall = r_den > 0 ? static_cast<double>(tp) / r_den : 0.0;
  f.f1 = (f.precision + f.recall) > 0 ? 2.0 * f.precision * f.recall / (f.precision + f.recall) : 0.0;
  return f;
}

}  // namespace

RetargetMetrics compute_retarget_metrics(const RobotTrajectory& traj, const RobotSpec& spec1,
                                         const RobotSpec& spec2, const MetricsOptions& opts) {
  if (traj.priors.interaction_frames.size() != traj.frame_count())
    throw ConfigError("priors are misaligned with the trajectory");
  if (traj.reference.frame_count() != traj.frame_count())
    throw ConfigError("reference manifolds are misaligned with the trajectory");
  if (!(traj.reference.h_robot > 0.0))
    throw ConfigError("reference h_robot must be positive (corrupt trajectory file?)");

  RetargetMetrics out;
  const PenetrationMetrics pen = penetration_metrics(traj, spec1, spec2, opts);
  out.ipr = pen.ipr;
  out.mpd_cm = pen.mpd_cm;
  out.trace_depth = pen.depth;

  const VertexMap map = build_vertex_map(traj.priors, traj.reference, spec1, spec2);
  const std::size_t T = traj.frame_count();
  std::vector<FrameEdgeStats> stats(T);
  out.trace_iee_retarget.assign(T, -1.0);
  out.trace_iee_policy.assign(T, -1.0);

  for_each_index(T, opts.exec, [&](std::size_t t) {
    std::vector<Vec3> a1, a2;
    frame_vertex_positions(traj, spec1, spec2, map, t, a1, a2);
    FrameEdgeStats& s = stats[t];

    for (const InterEdge& e : traj.priors.interaction_frames[t]) {
      const Vec3 sim = a1[static_cast<std::size_t>(e.i)] - a2[static_cast<std::size_t>(e.j)];
      const double err = (sim - e.ref_rel).norm();
      s.ret_err_sum += err;
      ++s.ret_count;
      s.pol_num += e.omega * err;
      s.pol_den += e.omega * e.ref_rel.norm();
    }

    // thresholded contact prediction over every cross-agent pair
    const auto& uni = traj.reference.p_uni[t];
    for (int i = 0; i < map.count; ++i) {
      const Vec3& ri = uni[0][static_cast<std::size_t>(map.clip_kp[static_cast<std::size_t>(i)])];
      for (int j = 0; j < map.count; ++j) {
        const Vec3& rj = uni[1][static_cast<std::size_t>(map.clip_kp[static_cast<std::size_t>(j)])];
        const double len_ref = (ri - rj).norm();
        const double len_sim =
            (a1[static_cast<std::size_t>(i)] - a2[static_cast<std::size_t>(j)]).norm();
        const bool gt_s = len_ref < opts.tau_strict, pr_s = len_sim < opts.tau_strict;
        const bool gt_l = len_ref < opts.tau_loose, pr_l = len_sim < opts.tau_loose;
        s.tp_s += (gt_s && pr_s);
        s.fp_s += (!gt_s && pr_s);
        s.fn_s += (gt_s && !pr_s);
        s.tp_l += (gt_l && pr_l);
        s.fp_l += (!gt_l && pr_l);
        s.fn_l += (gt_l && !pr_l);
      }
    }

    if (s.ret_count > 0) {
      out.trace_iee_retarget[t] =
          100.0 * (s.ret_err_sum / static_cast<double>(s.ret_count)) / traj.reference.h_robot;
    }
    if (s.pol_den > 0.0) out.trace_iee_policy[t] = 100.0 * s.pol_num / s.pol_den;
  });

  double err_sum = 0.0, pol_sum = 0.0;
  long edge_count = 0, pol_frames = 0;
  long tp_s = 0, fp_s = 0, fn_s = 0, tp_l = 0, fp_l = 0, fn_l = 0;
  for (std::size_t t = 0; t < T; ++t) {
    err_sum += stats[t].ret_err_sum;
    edge_count += stats[t].ret_count;
    if (stats[t].pol_den > 0.0) {
      pol_sum += 100.0 * stats[t].pol_num / stats[t].pol_den;
      ++pol_frames;
    }
    tp_s += stats[t].tp_s;
    fp_s += stats[t].fp_s;
    fn_s += stats[t].fn_s;
    tp_l += stats[t].tp_l;
    fp_l += stats[t].fp_l;
    fn_l += stats[t].fn_l;
  }

  out.empty_edges = edge_count == 0;
  out.iee_retarget = edge_count > 0
                         ? 100.0 * (err_sum / static_cast<double>(edge_count)) / traj.reference.h_robot
                         : 0.0;
  out.iee_policy = pol_frames > 0 ? pol_sum / static_cast<double>(pol_frames) : 0.0;
  out.f1_strict = f1_from_counts(tp_s, fp_s, fn_s);
  out.f1_loose = f1_from_counts(tp_l, fp_l, fn_l);
  return out;
}

PolicyMetrics compute_policy_metrics(const RobotTrajectory& rollout, const RobotTrajectory& reference,
                                     const RobotSpec& spec1, const RobotSpec& spec2,
                                     const MetricsOptions& opts) {
  if (rollout.frame_count() != reference.frame_count())
    throw ConfigError("rollout length does not match the reference trajectory");
  if (reference.priors.interaction_frames.size() != reference.frame_count() ||
      reference.priors.contact_frames.size() != reference.frame_count())
    throw ConfigError("reference priors are misaligned");

  const VertexMap map = build_vertex_map(reference.priors, reference.reference, spec1, spec2);
  const std::size_t T = reference.frame_count();

  PolicyMetrics out;
  out.trace_iee.assign(T, 0.0);
  std::vector<long> required(T, 0), recalled(T, 0);

  for_each_index(T, opts.exec, [&](std::size_t t) {
    std::vector<Vec3> sim1, sim2, ref1, ref2;
    frame_vertex_positions(rollout, spec1, spec2, map, t, sim1, sim2);
    frame_vertex_positions(reference, spec1, spec2, map, t, ref1, ref2);

    double num = 0.0, den = 0.0;
    for (const InterEdge& e : reference.priors.interaction_frames[t]) {
      const Vec3 d_sim = sim1[static_cast<std::size_t>(e.i)] - sim2[static_cast<std::size_t>(e.j)];
      const Vec3 d_ref = ref1[static_cast<std::size_t>(e.i)] - ref2[static_cast<std::size_t>(e.j)];
      num += e.omega * (d_sim - d_ref).norm();
      den += e.omega * d_ref.norm();
    }
    out.trace_iee[t] = den > 0.0 ? 100.0 * num / den : 0.0;

    const FkResult fk1 = forward_kinematics(spec1, rollout.frames[t][0]);
    const FkResult fk2 = forward_kinematics(spec2, rollout.frames[t][1]);
    for (const ContactFlag& c : reference.priors.contact_frames[t]) {
      if (!c.contact) continue;
      ++required[t];
      const CapsuleWitness w = pair_distance(spec1, fk1, c.link_a, spec2, fk2, c.link_b);
      if (w.distance <= reference.priors.eps_contact) ++recalled[t];
    }
  });

  long isr_ok = 0, csr_ok = 0, req_total = 0, viol_total = 0;
  double iee_sum = 0.0;
  out.dsr_pass = true;
  for (std::size_t t = 0; t < T; ++t) {
    iee_sum += out.trace_iee[t];
    if (out.trace_iee[t] < opts.isr_threshold) ++isr_ok;
    if (out.trace_iee[t] >= opts.dsr_threshold) out.dsr_pass = false;
    if (required[t] == 0 ||
        static_cast<double>(recalled[t]) > opts.csr_recall * static_cast<double>(required[t]))
      ++csr_ok;
    req_total += required[t];
    viol_total += required[t] - recalled[t];
  }
  if (T > 0) {
    out.isr = 100.0 * static_cast<double>(isr_ok) / static_cast<double>(T);
    out.csr = 100.0 * static_cast<double>(csr_ok) / static_cast<double>(T);
    out.iee_mean = iee_sum / static_cast<double>(T);
  }
  out.cer = req_total > 0 ? static_cast<double>(viol_total) / static_cast<double>(req_total) : 0.0;
  return out;
}

double downstream_success_rate(const std::vector<PolicyMetrics>& rollouts) {
  if (rollouts.empty()) return 0.0;
  long pass = 0;
  for (const PolicyMetrics& r : rollouts) pass += r.dsr_pass ? 1 : 0;
  return 100.0 * static_cast<double>(pass) / static_cast<double>(rollouts.size());
}

}  // namespace duet
