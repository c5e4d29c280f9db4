#pragma once

#include <istream>
#include <string>
#include <vector>

#include "duet/errors.hpp"
#include "duet/geometry.hpp"

namespace duet {

enum class Channel { Xpos, Ypos, Zpos, Xrot, Yrot, Zrot };

struct BvhJoint {
  std::string name;
  int parent = -1;  // -1 marks the root
  Vec3 offset = Vec3::Zero();
  std::vector<Channel> channels;  // declared order, 3 or 6 entries
  int channel_start = 0;          // index into a frame's channel row
  bool has_end_site = false;
  Vec3 end_site = Vec3::Zero();
};

/// Joint hierarchy in topological order (parent index < child index,
/// exactly one root at index 0).
struct SourceSkeleton {
  std::vector<BvhJoint> joints;

  int channel_count() const;
  int joint_index(const std::string& name) const;  // -1 when absent
};

struct BvhDocument {
  SourceSkeleton skeleton;
  double frame_dt = 0.0;
  std::vector<std::vector<double>> frames;  // frames[t] has channel_count() values
};

/// Parses the supported BVH subset (ROOT/JOINT/End Site, OFFSET, CHANNELS with
/// 3 or 6 entries, MOTION with Frames/Frame Time). Throws ParseError with the
/// offending line number; no partially built document escapes.
BvhDocument parse_bvh(std::istream& in);
BvhDocument parse_bvh_file(const std::string& path);

/// World transform of every joint for one frame of channel data.
std::vector<Transform> bvh_frame_transforms(const SourceSkeleton& skeleton,
                                            const std::vector<double>& channels,
                                            double scale = 1.0);

/// World positions of the named joints on every frame. An empty name list
/// yields empty per-frame keypoint lists. Throws ConfigError on unknown names.
std::vector<std::vector<Vec3>> extract_keypoints(const BvhDocument& doc,
                                                 const std::vector<std::string>& joint_names,
                                                 double scale = 1.0);

}  // namespace duet
