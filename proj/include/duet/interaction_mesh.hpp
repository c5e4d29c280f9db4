#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "duet/manifolds.hpp"
#include "duet/parallel.hpp"
#include "duet/trajectory.hpp"

namespace duet {

struct MeshConfig {
  std::vector<std::string> vertex_names;
  std::vector<std::pair<std::string, std::string>> self_edges;
  double omega_max = 1.0;
  double gamma = 5.0;      // 1/m stiffness decay
  double r_inter = 1.0;    // inter-edge activation radius, meters
  double eps_contact = 0.02;

  /// Torso-limb graph over pelvis/torso/head, shoulders, elbows, hands,
  /// hips, knees and feet, with shoulder-shoulder and hip-hip braces.
  static MeshConfig default_humanoid();
};

/// Partitioned interaction graph. Vertices are (agent, keypoint) pairs laid
/// out agent-major: global id = agent * K + k. Intra-agent edges are shared
/// by both agents; inter edges join distinct agents by construction.
struct MeshTopology {
  std::vector<std::string> vertex_names;  // per agent, length K
  int vertex_count = 0;                   // K
  std::vector<std::vector<int>> neighbors;  // agent-local self-adjacency
  std::vector<std::pair<int, int>> e_self;  // global vertex ids, both agents
  double omega_max = 1.0;
  double gamma = 5.0;
  double r_inter = 1.0;
  double eps_contact = 0.02;

  double laplacian_weight(int vertex) const {  // uniform c_ij = 1/|N(i)|
    return 1.0 / static_cast<double>(neighbors[static_cast<std::size_t>(vertex)].size());
  }
};

/// Validates the vertex/edge names against the clip keypoint list and builds
/// the static topology. Throws ConfigError on unknown names.
MeshTopology make_mesh(const MeshConfig& config, const std::vector<std::string>& keypoint_names);

/// omega_max * exp(-gamma * d); throws ConfigError for negative distances.
double stiffness(double d_source, double omega_max, double gamma);

/// Laplacian coordinate of one vertex over an agent-local position set.
/// Throws ConfigError for isolated vertices.
Vec3 laplacian(std::span<const Vec3> positions, const MeshTopology& topology, int vertex);

/// Active inter-agent edges of one frame: (i, j) is active when the unified
/// manifold distance is at most r_inter; the weight decays with that distance.
std::vector<InterEdge> active_inter_edges(const MeshTopology& topology, const ReferencePair& ref,
                                          std::size_t frame);

/// Interaction prior over reference frames only (no contact information).
GraphPriors extract_interaction_priors(const MeshTopology& topology, const ReferencePair& ref);

/// Full priors for a solved trajectory: interaction frames from the reference
/// plus per-frame contact flags from capsule collision detection.
GraphPriors extract_priors(const MeshTopology& topology, const RobotTrajectory& traj,
                           const RobotSpec& spec1, const RobotSpec& spec2,
                           Exec exec = Exec::Parallel);

}  // namespace duet
