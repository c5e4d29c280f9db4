#include "duet/interaction_mesh.hpp"

#include <algorithm>
#include <cmath>

#include "duet/collision.hpp"

namespace duet {

MeshConfig MeshConfig::default_humanoid() {
  MeshConfig cfg;
  cfg.vertex_names = {"pelvis", "torso",   "head",    "l_shoulder", "r_shoulder",
                      "l_elbow", "r_elbow", "l_hand",  "r_hand",     "l_hip",
                      "r_hip",   "l_knee",  "r_knee",  "l_foot",     "r_foot"};
  cfg.self_edges = {
      {"pelvis", "torso"},      {"torso", "head"},
      {"torso", "l_shoulder"},  {"l_shoulder", "l_elbow"}, {"l_elbow", "l_hand"},
      {"torso", "r_shoulder"},  {"r_shoulder", "r_elbow"}, {"r_elbow", "r_hand"},
      {"pelvis", "l_hip"},      {"l_hip", "l_knee"},       {"l_knee", "l_foot"},
      {"pelvis", "r_hip"},      {"r_hip", "r_knee"},       {"r_knee", "r_foot"},
      {"l_shoulder", "r_shoulder"},  // cross braces
      {"l_hip", "r_hip"},
  };
  return cfg;
}

MeshTopology make_mesh(const MeshConfig& config, const std::vector<std::string>& keypoint_names) {
  MeshTopology topo;
  topo.vertex_names = config.vertex_names;
  topo.vertex_count = static_cast<int>(config.vertex_names.size());
  topo.omega_max = config.omega_max;
  topo.gamma = config.gamma;
  topo.r_inter = config.r_inter;
  topo.eps_contact = config.eps_contact;
  if (topo.vertex_count == 0) throw ConfigError("mesh config has no vertices");

  auto vertex_id = [&](const std::string& name) {
    for (int i = 0; i < topo.vertex_count; ++i)
      if (topo.vertex_names[static_cast<std::size_t>(i)] == name) return i;
    throw ConfigError("mesh edge references unknown vertex '" + name + "'");
  };
  for (const auto& name : config.vertex_names) {
    if (std::find(keypoint_names.begin(), keypoint_names.end(), name) == keypoint_names.end())
      throw ConfigError("mesh vertex '" + name + "' is not a clip keypoint");
  }

  topo.neighbors.assign(static_cast<std::size_t>(topo.vertex_count), {});
  for (const auto& [a, b] : config.self_edges) {
    const int ia = vertex_id(a);
    const int ib = vertex_id(b);
    if (ia == ib) throw ConfigError("self edge joins vertex '" + a + "' to itself");
    topo.neighbors[static_cast<std::size_t>(ia)].push_back(ib);
    topo.neighbors[static_cast<std::size_t>(ib)].push_back(ia);
    // same undirected edge instantiated in both agents
    for (int agent = 0; agent < 2; ++agent)
      topo.e_self.emplace_back(agent * topo.vertex_count + ia, agent * topo.vertex_count + ib);
  }
  return topo;
}

double stiffness(double d_source, double omega_max, double gamma) {
  if (d_source < 0.0) throw ConfigError("stiffness requires a non-negative distance");
  return omega_max * std::exp(-gamma * d_source);
}

Vec3 laplacian(std::span<const Vec3> positions, const MeshTopology& topology, int vertex) {
  const auto& nbrs = topology.neighbors[static_cast<std::size_t>(vertex)];
  if (nbrs.empty())
    throw ConfigError("vertex '" + topology.vertex_names[static_cast<std::size_t>(vertex)] +
                      "' is isolated in the self graph");
  const double c = topology.laplacian_weight(vertex);
  Vec3 acc = Vec3::Zero();
  for (int j : nbrs) acc += positions[static_cast<std::size_t>(j)];
  return positions[static_cast<std::size_t>(vertex)] - c * acc;
}

std::vector<InterEdge> active_inter_edges(const MeshTopology& topology, const ReferencePair& ref,
                                          std::size_t frame) {
  std::vector<int> kp_ids(static_cast<std::size_t>(topology.vertex_count));
  for (int v = 0; v < topology.vertex_count; ++v) {
    const int id = ref.keypoint_index(topology.vertex_names[static_cast<std::size_t>(v)]);
    if (id < 0)
      throw ConfigError("reference lacks keypoint '" +
                        topology.vertex_names[static_cast<std::size_t>(v)] + "'");
    kp_ids[static_cast<std::size_t>(v)] = id;
  }

  const auto& uni = ref.p_uni.at(frame);
  std::vector<InterEdge> edges;
  for (int i = 0; i < topology.vertex_count; ++i) {
    const Vec3& pi = uni[0][static_cast<std::size_t>(kp_ids[static_cast<std::size_t>(i)])];
    for (int j = 0; j < topology.vertex_count; ++j) {
      const Vec3& pj = uni[1][static_cast<std::size_t>(kp_ids[static_cast<std::size_t>(j)])];
      const Vec3 rel = pi - pj;
      const double d = rel.norm();
      if (d <= topology.r_inter) {
        edges.push_back({i, j, stiffness(d, topology.omega_max, topology.gamma), rel, d});
      }
    }
  }
  return edges;
}

GraphPriors extract_interaction_priors(const MeshTopology& topology, const ReferencePair& ref) {
  GraphPriors priors;
  priors.eps_contact = topology.eps_contact;
  priors.vertex_names = topology.vertex_names;
  priors.interaction_frames.resize(ref.frame_count());
  for (std::size_t t = 0; t < ref.frame_count(); ++t)
    priors.interaction_frames[t] = active_inter_edges(topology, ref, t);
  return priors;
}

namespace {

std::vector<ContactFlag> contact_frame(const MeshTopology& topology, const RobotTrajectory& traj,
                                       const RobotSpec& spec1, const RobotSpec& spec2,
                                       const std::vector<CollisionPair>& pairs, std::size_t t) {
  const FkResult fk1 = forward_kinematics(spec1, traj.frames[t][0]);
  const FkResult fk2 = forward_kinematics(spec2, traj.frames[t][1]);
  std::vector<ContactFlag> flags;
  for (const CollisionPair& pair : pairs) {
    const CapsuleWitness w = pair_distance(spec1, fk1, pair.link_a, spec2, fk2, pair.link_b);
    if (w.distance <= topology.eps_contact)
      flags.push_back({pair.link_a, pair.link_b, true});
  }
  return flags;
}

}  // namespace

GraphPriors extract_priors(const MeshTopology& topology, const RobotTrajectory& traj,
                           const RobotSpec& spec1, const RobotSpec& spec2, Exec exec) {
  GraphPriors priors = extract_interaction_priors(topology, traj.reference);
  const auto pairs = inter_robot_pairs(spec1, spec2);
  priors.contact_frames.resize(traj.frame_count());
  for_each_index(traj.frame_count(), exec, [&](std::size_t t) {
    priors.contact_frames[t] = contact_frame(topology, traj, spec1, spec2, pairs, t);
  });
  return priors;
}

}  // namespace duet
