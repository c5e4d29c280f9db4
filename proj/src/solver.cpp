#include "duet/solver.hpp"

#include <algorithm>
#include <cmath>

#include "duet/collision.hpp"

namespace duet {

void SolverConfig::validate() const {
  if (w_self < 0.0 || w_inter < 0.0 || w_reg < 0.0 || lambda_rot < 0.0)
    throw ConfigError("solver weights must be non-negative");
  if (!(trust_delta > 0.0)) throw ConfigError("trust_delta must be positive");
  if (sqp_iters_per_frame < 1) throw ConfigError("sqp_iters_per_frame must be at least 1");
  if (eps_safe < 0.0 || eps_stick < 0.0) throw ConfigError("eps_safe and eps_stick must be non-negative");
  if (qp_tolerance <= 0.0) throw ConfigError("qp_tolerance must be positive");
}

namespace {

// Keeps the quadratic model strictly convex even when w_reg is zero.
constexpr double kHessianRidge = 1e-9;

int find_vertex(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

RetargetProblem::RetargetProblem(const RobotSpec& spec1, const RobotSpec& spec2,
                                 const MeshConfig& mesh_cfg, const SolverConfig& cfg,
                                 const ReferencePair& ref)
    : specs_{&spec1, &spec2}, cfg_(cfg), ref_(ref), topo_(make_mesh(mesh_cfg, ref.keypoint_names)) {
  cfg_.validate();
  dims_ = 2 * kRootDims + spec1.dof() + spec2.dof();

  const int K = topo_.vertex_count;
  vertex_clip_kp_.resize(static_cast<std::size_t>(K));
  for (int v = 0; v < K; ++v) {
    vertex_clip_kp_[static_cast<std::size_t>(v)] =
        ref_.keypoint_index(topo_.vertex_names[static_cast<std::size_t>(v)]);
  }
  for (int a = 0; a < 2; ++a) {
    vertex_robot_kp_[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(K));
    for (int v = 0; v < K; ++v) {
      const std::string& name = topo_.vertex_names[static_cast<std::size_t>(v)];
      const int kp = specs_[a]->keypoint_index(name);
      if (kp < 0)
        throw ConfigError("robot '" + specs_[a]->name + "' has no keypoint binding for mesh vertex '" +
                          name + "'");
      vertex_robot_kp_[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)] = kp;
    }
  }

  // feet: every mesh vertex whose name contains "foot"
  for (int v = 0; v < K; ++v)
    if (topo_.vertex_names[static_cast<std::size_t>(v)].find("foot") != std::string::npos)
      foot_vertices_.push_back(v);
  for (int a = 0; a < 2; ++a) {
    for (int v : foot_vertices_)
      foot_robot_kp_[static_cast<std::size_t>(a)].push_back(
          vertex_robot_kp_[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)]);
  }

  // source foot contacts on the individual manifold: low and slow
  const std::size_t T = ref_.frame_count();
  const std::size_t feet = foot_vertices_.size();
  for (int a = 0; a < 2; ++a) {
    auto& contacts = source_contacts_[static_cast<std::size_t>(a)];
    contacts.assign(T * feet, 0);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t f = 0; f < feet; ++f) {
        const int kp = vertex_clip_kp_[static_cast<std::size_t>(foot_vertices_[f])];
        const Vec3& p = ref_.p_ind[t][static_cast<std::size_t>(a)][static_cast<std::size_t>(kp)];
        double speed = 0.0;
        if (T > 1) {
          const std::size_t t2 = t > 0 ? t : 1;
          const Vec3& pa = ref_.p_ind[t2 - 1][static_cast<std::size_t>(a)][static_cast<std::size_t>(kp)];
          const Vec3& pb = ref_.p_ind[t2][static_cast<std::size_t>(a)][static_cast<std::size_t>(kp)];
          speed = (pb - pa).norm() / ref_.frame_dt;
        }
        contacts[t * feet + f] =
            (p.z() < cfg_.foot_height_threshold && speed < cfg_.foot_speed_threshold) ? 1 : 0;
      }
    }
  }

  // constant orientation targets: nominal link orientations rotated into the
  // agent's initial heading
  const Configs init = initial_configs();
  for (int a = 0; a < 2; ++a) {
    RobotConfiguration nominal;
    nominal.q = specs_[a]->q_nom;
    clamp_to_limits(*specs_[a], nominal.q);
    const FkResult fk_nom = forward_kinematics(*specs_[a], nominal);
    const Mat3 heading = init[static_cast<std::size_t>(a)].root_rot.toRotationMatrix();
    for (int link : specs_[a]->key_links)
      orientation_targets_[static_cast<std::size_t>(a)].emplace_back(
          link, heading * fk_nom.link_tf[static_cast<std::size_t>(link)].linear());
  }
}

bool RetargetProblem::source_foot_contact(std::size_t frame, int agent, int foot_slot) const {
  const std::size_t feet = foot_vertices_.size();
  return source_contacts_[static_cast<std::size_t>(agent)][frame * feet +
                                                           static_cast<std::size_t>(foot_slot)] != 0;
}

RetargetProblem::Configs RetargetProblem::initial_configs() const {
  Configs out;
  const int pelvis = find_vertex(topo_.vertex_names, "pelvis");
  const int lsh = find_vertex(topo_.vertex_names, "l_shoulder");
  const int rsh = find_vertex(topo_.vertex_names, "r_shoulder");

  for (int a = 0; a < 2; ++a) {
    RobotConfiguration cfg;
    cfg.q = specs_[a]->q_nom;
    clamp_to_limits(*specs_[a], cfg.q);

    const auto& uni = ref_.p_uni.at(0)[static_cast<std::size_t>(a)];
    Vec3 anchor = Vec3::Zero();
    if (pelvis >= 0) {
      anchor = uni[static_cast<std::size_t>(vertex_clip_kp_[static_cast<std::size_t>(pelvis)])];
    } else {
      for (const Vec3& p : uni) anchor += p;
      anchor /= static_cast<double>(uni.size());
    }
    cfg.root_pos = Vec3(anchor.x(), anchor.y(), specs_[a]->nominal_root_height);

    double yaw = 0.0;
    if (lsh >= 0 && rsh >= 0) {
      const Vec3 left = uni[static_cast<std::size_t>(vertex_clip_kp_[static_cast<std::size_t>(lsh)])] -
                        uni[static_cast<std::size_t>(vertex_clip_kp_[static_cast<std::size_t>(rsh)])];
      const Vec3 forward = left.cross(Vec3::UnitZ());
      if (forward.head<2>().norm() > 1e-9) yaw = std::atan2(forward.y(), forward.x());
    }
    cfg.root_rot = Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()));
    out[static_cast<std::size_t>(a)] = cfg;
  }
  return out;
}

double RetargetProblem::objective_value(std::size_t frame, const Configs& configs,
                                        const Configs& frame_prev) const {
  double j_self = 0.0, j_inter = 0.0, j_reg = 0.0;
  const int K = topo_.vertex_count;

  std::array<std::vector<Vec3>, 2> vert_pos;
  for (int a = 0; a < 2; ++a) {
    const FkResult fk = forward_kinematics(*specs_[a], configs[static_cast<std::size_t>(a)]);
    auto& pos = vert_pos[static_cast<std::size_t>(a)];
    pos.resize(static_cast<std::size_t>(K));
    for (int v = 0; v < K; ++v)
      pos[static_cast<std::size_t>(v)] =
          fk.keypoints[static_cast<std::size_t>(
              vertex_robot_kp_[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)])];

    // Laplacian residuals against the individual manifold
    std::vector<Vec3> ref_pos(static_cast<std::size_t>(K));
    for (int v = 0; v < K; ++v)
      ref_pos[static_cast<std::size_t>(v)] =
          ref_.p_ind[frame][static_cast<std::size_t>(a)]
                    [static_cast<std::size_t>(vertex_clip_kp_[static_cast<std::size_t>(v)])];
    for (int v = 0; v < K; ++v) {
      if (topo_.neighbors[static_cast<std::size_t>(v)].empty()) continue;
      const Vec3 l_cur = laplacian(pos, topo_, v);
      const Vec3 l_ref = laplacian(ref_pos, topo_, v);
      j_self += (l_cur - l_ref).squaredNorm();
    }

    for (const auto& [link, target] : orientation_targets_[static_cast<std::size_t>(a)]) {
      const Mat3 current = fk.link_tf[static_cast<std::size_t>(link)].linear();
      j_self += cfg_.lambda_rot * so3_log(target.transpose() * current).squaredNorm();
    }

    const RobotConfiguration& cur = configs[static_cast<std::size_t>(a)];
    const RobotConfiguration& prev = frame_prev[static_cast<std::size_t>(a)];
    j_reg += (cur.q - prev.q).squaredNorm();
    j_reg += (cur.root_pos - prev.root_pos).squaredNorm();
    j_reg += so3_log(cur.root_rot.toRotationMatrix() * prev.root_rot.toRotationMatrix().transpose())
                 .squaredNorm();
  }

  for (const InterEdge& e : active_inter_edges(topo_, ref_, frame)) {
    const Vec3 rel = vert_pos[0][static_cast<std::size_t>(e.i)] - vert_pos[1][static_cast<std::size_t>(e.j)];
    j_inter += e.omega * (rel - e.ref_rel).squaredNorm();
  }

  return cfg_.w_self * j_self + cfg_.w_inter * j_inter + cfg_.w_reg * j_reg;
}

void RetargetProblem::assemble_objective(std::size_t frame, const Configs& lin,
                                         const Configs& frame_prev, MatrixXd& H, VectorXd& g) const {
  const int K = topo_.vertex_count;
  H = MatrixXd::Identity(dims_, dims_) * kHessianRidge;
  g = VectorXd::Zero(dims_);

  std::array<std::vector<Vec3>, 2> vert_pos;
  std::array<std::vector<MatrixXd>, 2> vert_jac;

  for (int a = 0; a < 2; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    const RobotSpec& spec = *specs_[a];
    const int offset = agent_offset(a);
    const int na = kRootDims + spec.dof();
    const FkResult fk = forward_kinematics(spec, lin[sa]);

    vert_pos[sa].resize(static_cast<std::size_t>(K));
    vert_jac[sa].resize(static_cast<std::size_t>(K));
    for (int v = 0; v < K; ++v) {
      const int kp = vertex_robot_kp_[sa][static_cast<std::size_t>(v)];
      vert_pos[sa][static_cast<std::size_t>(v)] = fk.keypoints[static_cast<std::size_t>(kp)];
      vert_jac[sa][static_cast<std::size_t>(v)] = keypoint_jacobian(spec, lin[sa], fk, kp);
    }

    // Laplacian rows: L is linear in positions, so the row is J_v - c * sum J_u
    for (int v = 0; v < K; ++v) {
      const auto& nbrs = topo_.neighbors[static_cast<std::size_t>(v)];
      if (nbrs.empty()) continue;
      const double c = topo_.laplacian_weight(v);

      Vec3 l_cur = vert_pos[sa][static_cast<std::size_t>(v)];
      MatrixXd row = vert_jac[sa][static_cast<std::size_t>(v)];
      Vec3 l_ref =
          ref_.p_ind[frame][sa][static_cast<std::size_t>(vertex_clip_kp_[static_cast<std::size_t>(v)])];
      for (int u : nbrs) {
        l_cur -= c * vert_pos[sa][static_cast<std::size_t>(u)];
        row -= c * vert_jac[sa][static_cast<std::size_t>(u)];
        l_ref -= c * ref_.p_ind[frame][sa]
                             [static_cast<std::size_t>(vertex_clip_kp_[static_cast<std::size_t>(u)])];
      }
      const Vec3 r = l_cur - l_ref;
      H.block(offset, offset, na, na) += 2.0 * cfg_.w_self * row.transpose() * row;
      g.segment(offset, na) += 2.0 * cfg_.w_self * row.transpose() * r;
    }

    // key-link orientation rows
    const double w_rot = cfg_.w_self * cfg_.lambda_rot;
    for (const auto& [link, target] : orientation_targets_[sa]) {
      const OrientationError oe = orientation_error_jacobian(spec, lin[sa], fk, link, target);
      H.block(offset, offset, na, na) += 2.0 * w_rot * oe.jacobian.transpose() * oe.jacobian;
      g.segment(offset, na) += 2.0 * w_rot * oe.jacobian.transpose() * oe.error;
    }

    // minimum-velocity regularization, exact Gauss-Newton rows
    const RobotConfiguration& prev = frame_prev[sa];
    H.block(offset, offset, 3, 3) += 2.0 * cfg_.w_reg * Mat3::Identity();
    g.segment(offset, 3) += 2.0 * cfg_.w_reg * (lin[sa].root_pos - prev.root_pos);
    const Vec3 e_rot = so3_log(lin[sa].root_rot.toRotationMatrix() *
                               prev.root_rot.toRotationMatrix().transpose());
    const Mat3 jl = so3_left_jacobian_inverse(e_rot);
    H.block(offset + 3, offset + 3, 3, 3) += 2.0 * cfg_.w_reg * jl.transpose() * jl;
    g.segment(offset + 3, 3) += 2.0 * cfg_.w_reg * jl.transpose() * e_rot;
    H.block(offset + kRootDims, offset + kRootDims, spec.dof(), spec.dof()) +=
        2.0 * cfg_.w_reg * MatrixXd::Identity(spec.dof(), spec.dof());
    g.segment(offset + kRootDims, spec.dof()) += 2.0 * cfg_.w_reg * (lin[sa].q - prev.q);
  }

  // inter-agent edges couple both column blocks
  const int off1 = agent_offset(0), off2 = agent_offset(1);
  const int n1 = kRootDims + specs_[0]->dof(), n2 = kRootDims + specs_[1]->dof();
  for (const InterEdge& e : active_inter_edges(topo_, ref_, frame)) {
    MatrixXd row = MatrixXd::Zero(3, dims_);
    row.block(0, off1, 3, n1) = vert_jac[0][static_cast<std::size_t>(e.i)];
    row.block(0, off2, 3, n2) = -vert_jac[1][static_cast<std::size_t>(e.j)];
    const Vec3 rel = vert_pos[0][static_cast<std::size_t>(e.i)] - vert_pos[1][static_cast<std::size_t>(e.j)];
    const Vec3 r = rel - e.ref_rel;
    const double w = cfg_.w_inter * e.omega;
    H += 2.0 * w * row.transpose() * row;
    g += 2.0 * w * row.transpose() * r;
  }
}

std::vector<CollisionPair> RetargetProblem::collision_pairs() const {
  std::vector<CollisionPair> pairs;
  if (cfg_.collision_link_pairs.empty()) {
    pairs = inter_robot_pairs(*specs_[0], *specs_[1]);
  } else {
    for (const auto& [name_a, name_b] : cfg_.collision_link_pairs) {
      const int la = specs_[0]->link_index(name_a);
      const int lb = specs_[1]->link_index(name_b);
      if (la < 0 || lb < 0)
        throw ConfigError("collision pair references unknown link '" +
                          (la < 0 ? name_a : name_b) + "'");
      pairs.push_back({0, la, 1, lb});
    }
  }
  if (cfg_.self_collision) {
    for (int a = 0; a < 2; ++a) {
      const auto sp = self_pairs(*specs_[a], a);
      pairs.insert(pairs.end(), sp.begin(), sp.end());
    }
  }
  return pairs;
}

RetargetProblem::Linearization RetargetProblem::linearize(std::size_t frame, const Configs& lin,
                                                          const Configs& frame_prev,
                                                          bool collision_enabled,
                                                          double eps_safe) const {
  Linearization out;
  assemble_objective(frame, lin, frame_prev, out.qp.H, out.qp.g);
  out.objective = objective_value(frame, lin, frame_prev);

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> lowers;

  // joint-limit box intersected with the per-component trust region
  for (int a = 0; a < 2; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    const RobotSpec& spec = *specs_[a];
    const int offset = agent_offset(a);
    for (int i = 0; i < kRootDims; ++i) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dims_);
      row[offset + i] = 1.0;
      rows.push_back(row);
      lowers.push_back(-cfg_.trust_delta);
      rows.push_back(-row);
      lowers.push_back(-cfg_.trust_delta);
    }
    for (int j = 0; j < spec.dof(); ++j) {
      const double lb = std::max(spec.joints[static_cast<std::size_t>(j)].q_min - lin[sa].q[j],
                                 -cfg_.trust_delta);
      const double ub = std::min(spec.joints[static_cast<std::size_t>(j)].q_max - lin[sa].q[j],
                                 cfg_.trust_delta);
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dims_);
      row[offset + kRootDims + j] = 1.0;
      rows.push_back(row);
      lowers.push_back(lb);
      rows.push_back(-row);
      lowers.push_back(-ub);
    }
  }

  std::array<FkResult, 2> fks = {forward_kinematics(*specs_[0], lin[0]),
                                 forward_kinematics(*specs_[1], lin[1])};

  if (collision_enabled) {
    CollisionRowParams params;
    params.eps_safe = eps_safe;
    params.activation_margin = cfg_.activation_margin;
    params.recovery_cap = cfg_.recovery_cap;
    const auto col_rows =
        collision_rows({specs_[0], specs_[1]}, {&lin[0], &lin[1]}, {&fks[0], &fks[1]},
                       collision_pairs(), params);
    for (const CollisionRow& cr : col_rows) {
      rows.push_back(cr.normal_jacobian);
      lowers.push_back(cr.lower);
    }
  }

  // feet in source contact: the keypoint step stays inside the stick band
  for (int a = 0; a < 2; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    const int offset = agent_offset(a);
    const int na = kRootDims + specs_[a]->dof();
    for (std::size_t f = 0; f < foot_vertices_.size(); ++f) {
      if (!source_foot_contact(frame, a, static_cast<int>(f))) continue;
      const int kp = foot_robot_kp_[sa][f];
      const MatrixXd jac = keypoint_jacobian(*specs_[a], lin[sa], fks[sa], kp);
      for (int c = 0; c < 3; ++c) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dims_);
        row.segment(offset, na) = jac.row(c);
        rows.push_back(row);
        lowers.push_back(-cfg_.eps_stick);
        rows.push_back(-row);
        lowers.push_back(-cfg_.eps_stick);
      }
    }
  }

  out.qp.A.resize(static_cast<Eigen::Index>(rows.size()), dims_);
  out.qp.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.qp.A.row(static_cast<Eigen::Index>(i)) = rows[i];
    out.qp.b[static_cast<Eigen::Index>(i)] = lowers[i];
  }
  out.zero_feasible = rows.empty() || out.qp.b.maxCoeff() <= 1e-12;
  return out;
}

RetargetProblem::FrameSolution RetargetProblem::solve_frame(std::size_t frame,
                                                            const Configs& frame_prev) const {
  FrameSolution out;
  out.configs = frame_prev;

  for (int m = 0; m < cfg_.sqp_iters_per_frame; ++m) {
    Linearization l = linearize(frame, out.configs, frame_prev, cfg_.collision_enabled, cfg_.eps_safe);
    QpResult qp = solve_qp(l.qp);
    if (qp.status != QpStatus::Optimal && cfg_.collision_enabled && cfg_.eps_safe > 0.0) {
      // graceful degradation: drop the safety margin once and retry
      l = linearize(frame, out.configs, frame_prev, true, 0.0);
      qp = solve_qp(l.qp);
      out.diag.relaxed = true;
    }
    if (qp.status != QpStatus::Optimal) {
      out.diag.failed = true;
      out.configs = frame_prev;  // keep the previous pose, flagged
      break;
    }

    VectorXd dx = qp.x;
    if (cfg_.enforce_l2_trust && dx.norm() > cfg_.trust_delta) dx *= cfg_.trust_delta / dx.norm();

    SqpIterDiag iter;
    iter.objective_before = l.objective;
    iter.model_objective = l.objective + 0.5 * dx.dot(l.qp.H * dx) + l.qp.g.dot(dx);
    iter.step_inf_norm = dx.size() > 0 ? dx.cwiseAbs().maxCoeff() : 0.0;
    iter.zero_feasible = l.zero_feasible;
    iter.qp_status = static_cast<int>(qp.status);
    iter.qp_iterations = qp.iterations;
    out.diag.iters.push_back(iter);

    for (int a = 0; a < 2; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      const int na = kRootDims + specs_[a]->dof();
      out.configs[sa] =
          apply_increment(*specs_[a], out.configs[sa], dx.segment(agent_offset(a), na));
      clamp_to_limits(*specs_[a], out.configs[sa].q);  // exact limit satisfaction
    }

    if (iter.step_inf_norm < cfg_.early_exit_step) break;
  }

  out.diag.objective = objective_value(frame, out.configs, frame_prev);
  double limit_violation = 0.0;
  for (int a = 0; a < 2; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    for (int j = 0; j < specs_[a]->dof(); ++j) {
      const auto& js = specs_[a]->joints[static_cast<std::size_t>(j)];
      limit_violation = std::max({limit_violation, js.q_min - out.configs[sa].q[j],
                                  out.configs[sa].q[j] - js.q_max});
    }
  }
  out.diag.max_limit_violation = std::max(0.0, limit_violation);

  std::array<FkResult, 2> fks = {forward_kinematics(*specs_[0], out.configs[0]),
                                 forward_kinematics(*specs_[1], out.configs[1])};
  double min_clearance = 1e9;  // finite sentinel, keeps the diagnostics serializable
  for (const CollisionPair& pair : inter_robot_pairs(*specs_[0], *specs_[1])) {
    const CapsuleWitness w =
        pair_distance(*specs_[0], fks[0], pair.link_a, *specs_[1], fks[1], pair.link_b);
    min_clearance = std::min(min_clearance, w.distance);
  }
  out.diag.min_clearance = min_clearance;

  double max_step = 0.0;
  for (int a = 0; a < 2; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    if (specs_[a]->dof() > 0)
      max_step = std::max(max_step, (out.configs[sa].q - frame_prev[sa].q).cwiseAbs().maxCoeff());
    max_step = std::max(max_step,
                        (out.configs[sa].root_pos - frame_prev[sa].root_pos).cwiseAbs().maxCoeff());
  }
  out.diag.max_step = max_step;
  return out;
}

RobotTrajectory RetargetProblem::solve() const {
  RobotTrajectory traj;
  traj.frame_dt = ref_.frame_dt;
  traj.robot_names = {specs_[0]->name, specs_[1]->name};

  Configs prev = initial_configs();
  traj.frames.reserve(ref_.frame_count());
  for (std::size_t t = 0; t < ref_.frame_count(); ++t) {
    FrameSolution fs = solve_frame(t, prev);
    traj.frames.push_back(fs.configs);
    traj.diags.push_back(std::move(fs.diag));
    prev = traj.frames.back();
  }

  traj.reference = ref_;
  traj.priors = extract_priors(topo_, traj, *specs_[0], *specs_[1]);
  return traj;
}

RobotTrajectory retarget_clip(const RobotSpec& spec1, const RobotSpec& spec2,
                              const MeshConfig& mesh_cfg, const SolverConfig& cfg,
                              const DualMotionClip& clip, double h_robot,
                              const std::string& height_strategy) {
  const ReferencePair ref = build_manifolds(clip, h_robot, height_strategy);
  RetargetProblem problem(spec1, spec2, mesh_cfg, cfg, ref);
  return problem.solve();
}

}  // namespace duet
