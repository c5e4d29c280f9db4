#pragma once

#include <array>
#include <string>
#include <vector>

#include "duet/clip.hpp"

namespace duet {

/// Dual reference manifolds. Per-agent individually scaled keypoints (p_ind)
/// feed the self-motion terms; globally scaled keypoints (p_uni) feed the
/// inter-agent terms. p_ind[k] = s_individual[k] * raw, p_uni = s_unified * raw
/// with s_unified the mean of the two individual factors.
struct ReferencePair {
  double frame_dt = 0.0;
  std::vector<std::string> keypoint_names;
  std::array<double, 2> s_individual = {1.0, 1.0};
  double s_unified = 1.0;
  double h_robot = 0.0;
  // [t][agent][k]
  std::vector<std::array<std::vector<Vec3>, 2>> p_ind;
  std::vector<std::array<std::vector<Vec3>, 2>> p_uni;

  std::size_t frame_count() const { return p_uni.size(); }  // p_ind may be absent after a file read
  int keypoint_index(const std::string& name) const;
};

/// Estimates an agent's standing height from the first frames of a clip.
/// Strategies:
///   "head_foot" — height of the 'head' keypoint minus the lowest *foot*
///                 keypoint, averaged over the first 10 frames (default)
///   "bbox"      — vertical keypoint extent, averaged over the first 10 frames
/// Throws ConfigError for unknown strategies or missing keypoints.
double estimate_height(const DualMotionClip& clip, int agent, const std::string& strategy);

/// Scales the clip onto the two reference manifolds. Throws ConfigError when
/// an estimated height is not positive.
ReferencePair build_manifolds(const DualMotionClip& clip, double h_robot,
                              const std::string& height_strategy = "head_foot");

}  // namespace duet
