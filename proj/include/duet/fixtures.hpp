#pragma once

#include <string>

#include "duet/clip.hpp"
#include "duet/robot_model.hpp"

namespace duet {

/// JSON text of the bundled 29-DoF humanoid (two 6-DoF legs, 3-DoF waist,
/// two 7-DoF arms, about 1.25 m head-to-foot).
const std::string& g1_like_robot_json();
RobotSpec make_g1_like_robot();

/// Upright human keypoint template (15 keypoints, z-up, facing +x, head at
/// height h, soles at z = 0), used by the synthetic clip generators.
std::vector<Vec3> human_template(double h);
const std::vector<std::string>& human_template_names();

/// Two actors (1.75 m and 1.80 m) walk together, clasp right hands near the
/// midline, shake and part. 240 frames at 50 Hz.
DualMotionClip make_handshake_clip();

/// Close embrace: both actors wrap their hands to points just inside the
/// peer's torso, so unconstrained tracking has to penetrate. 260 frames.
DualMotionClip make_hug_clip();

/// Both agents hold the given pose (already expressed as keypoints) for the
/// requested number of frames.
DualMotionClip make_static_clip(const std::vector<std::vector<Vec3>>& agents_frame0,
                                const std::vector<std::string>& names, int frames, double dt);

/// Small BVH text (greeting wave plus approach) for the named actor height;
/// exercises the skeleton-hierarchy input path.
std::string make_greeting_bvh(double height, double approach_sign);

/// Keypoint-map JSON binding the template keypoint names to the BVH joints.
std::string greeting_bvh_map_json();

}  // namespace duet
