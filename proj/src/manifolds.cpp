#include "duet/manifolds.hpp"

#include <algorithm>
#include <limits>

namespace duet {

int ReferencePair::keypoint_index(const std::string& name) const {
  for (std::size_t i = 0; i < keypoint_names.size(); ++i)
    if (keypoint_names[i] == name) return static_cast<int>(i);
  return -1;
}

double estimate_height(const DualMotionClip& clip, int agent, const std::string& strategy) {
  if (clip.frame_count() == 0) throw ConfigError("cannot estimate height of an empty clip");
  const std::size_t window = std::min<std::size_t>(10, clip.frame_count());

  if (strategy == "head_foot") {
    const int head = clip.keypoint_index("head");
    if (head < 0) throw ConfigError("height strategy 'head_foot' needs a 'head' keypoint");
    std::vector<int> feet;
    for (std::size_t k = 0; k < clip.keypoint_names.size(); ++k)
      if (clip.keypoint_names[k].find("foot") != std::string::npos) feet.push_back(static_cast<int>(k));
    if (feet.empty()) throw ConfigError("height strategy 'head_foot' needs at least one *foot* keypoint");

    double acc = 0.0;
    for (std::size_t t = 0; t < window; ++t) {
      const auto& pts = clip.frames[t][agent];
      double foot_z = std::numeric_limits<double>::infinity();
      for (int f : feet) foot_z = std::min(foot_z, pts[static_cast<std::size_t>(f)].z());
      acc += pts[static_cast<std::size_t>(head)].z() - foot_z;
    }
    return acc / static_cast<double>(window);
  }

  if (strategy == "bbox") {
    double acc = 0.0;
    for (std::size_t t = 0; t < window; ++t) {
      const auto& pts = clip.frames[t][agent];
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (const Vec3& p : pts) {
        lo = std::min(lo, p.z());
        hi = std::max(hi, p.z());
      }
      acc += hi - lo;
    }
    return acc / static_cast<double>(window);
  }

  throw ConfigError("unknown height strategy '" + strategy + "'");
}

ReferencePair build_manifolds(const DualMotionClip& clip, double h_robot,
                              const std::string& height_strategy) {
  if (h_robot <= 0.0) throw ConfigError("h_robot must be positive");

  ReferencePair ref;
  ref.frame_dt = clip.frame_dt;
  ref.keypoint_names = clip.keypoint_names;
  ref.h_robot = h_robot;

  for (int a = 0; a < 2; ++a) {
    const double h_raw = estimate_height(clip, a, height_strategy);
    if (h_raw <= 0.0)
      throw ConfigError("estimated height for agent " + std::to_string(a + 1) + " is not positive");
    ref.s_individual[static_cast<std::size_t>(a)] = h_robot / h_raw;
  }
  ref.s_unified = 0.5 * (ref.s_individual[0] + ref.s_individual[1]);

  const std::size_t frames = clip.frame_count();
  ref.p_ind.resize(frames);
  ref.p_uni.resize(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int a = 0; a < 2; ++a) {
      const auto& raw = clip.frames[t][a];
      const double s_ind = ref.s_individual[static_cast<std::size_t>(a)];
      auto& ind = ref.p_ind[t][a];
      auto& uni = ref.p_uni[t][a];
      ind.resize(raw.size());
      uni.resize(raw.size());
      for (std::size_t k = 0; k < raw.size(); ++k) {
        ind[k] = s_ind * raw[k];
        uni[k] = ref.s_unified * raw[k];
      }
    }
  }
  return ref;
}

}  // namespace duet
