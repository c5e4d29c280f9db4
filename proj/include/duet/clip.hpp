#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "duet/errors.hpp"
#include "duet/geometry.hpp"

namespace duet {

/// Two agents' raw global keypoints over time. Both agents share the
/// keypoint name list; every coordinate is finite and frame_dt > 0.
struct DualMotionClip {
  double frame_dt = 0.0;
  std::vector<std::string> keypoint_names;
  // frames[t][agent][k]
  std::vector<std::array<std::vector<Vec3>, 2>> frames;

  std::size_t frame_count() const { return frames.size(); }
  std::size_t keypoint_count() const { return keypoint_names.size(); }
  int keypoint_index(const std::string& name) const;

  /// Throws ConfigError when an invariant is broken.
  void validate() const;
};

/// Line-oriented text format:
///
///   DUET-KPTS 1
///   agents 2
///   keypoints <K>
///   frame_dt <seconds>
///   frames <T>
///   names <name_1> ... <name_K>
///   <T data lines, each 2*K*3 floats: agent 1 keypoints then agent 2>
///
/// Comment lines starting with '#' are allowed before the data block.
DualMotionClip read_keypoint_clip(std::istream& in);
DualMotionClip read_keypoint_clip_file(const std::string& path);
void write_keypoint_clip(const DualMotionClip& clip, std::ostream& out);
void write_keypoint_clip_file(const DualMotionClip& clip, const std::string& path);

/// Assembles a clip from two per-agent keypoint tracks of equal length.
DualMotionClip clip_from_tracks(double frame_dt,
                                std::vector<std::string> names,
                                std::vector<std::vector<Vec3>> agent1,
                                std::vector<std::vector<Vec3>> agent2);

}  // namespace duet
