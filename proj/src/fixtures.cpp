#include "duet/fixtures.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace duet {
namespace {

using njson = nlohmann::ordered_json;

njson joint_json(const std::string& name, const std::string& parent, const std::string& child,
                 const Vec3& origin, const Vec3& axis, double lo, double hi) {
  return njson{{"name", name},
               {"parent", parent},
               {"child", child},
               {"origin", {origin.x(), origin.y(), origin.z()}},
               {"axis", {axis.x(), axis.y(), axis.z()}},
               {"limits", {lo, hi}}};
}

njson capsule_json(const Vec3& a, const Vec3& b, double r) {
  return njson{{"a", {a.x(), a.y(), a.z()}}, {"b", {b.x(), b.y(), b.z()}}, {"radius", r}};
}

njson link_json(const std::string& name) { return njson{{"name", name}}; }

njson link_json(const std::string& name, const njson& capsules) {
  return njson{{"name", name}, {"capsules", capsules}};
}

std::string build_g1_like_json() {
  njson links = njson::array();
  njson joints = njson::array();

  links.push_back(link_json(
      "pelvis", njson::array({capsule_json(Vec3(0, 0, -0.05), Vec3(0, 0, 0.06), 0.10)})));

  auto add_leg = [&](const std::string& side, double sign) {
    const std::string hp = side + "_hip_pitch_link";
    const std::string hr = side + "_hip_roll_link";
    const std::string hy = side + "_hip_yaw_link";
    const std::string kn = side + "_knee_link";
    const std::string ap = side + "_ankle_pitch_link";
    const std::string ar = side + "_ankle_roll_link";
    joints.push_back(joint_json(side + "_hip_pitch", "pelvis", hp, Vec3(0, sign * 0.10, -0.10),
                                Vec3::UnitY(), -2.5, 2.5));
    links.push_back(link_json(hp));
    joints.push_back(joint_json(side + "_hip_roll", hp, hr, Vec3::Zero(), Vec3::UnitX(), -1.0, 1.0));
    links.push_back(link_json(hr));
    joints.push_back(joint_json(side + "_hip_yaw", hr, hy, Vec3::Zero(), Vec3::UnitZ(), -2.7, 2.7));
    links.push_back(link_json(
        hy, njson::array({capsule_json(Vec3::Zero(), Vec3(0, 0, -0.30), 0.06)})));
    joints.push_back(joint_json(side + "_knee", hy, kn, Vec3(0, 0, -0.30), Vec3::UnitY(), -0.08, 2.5));
    links.push_back(link_json(
        kn, njson::array({capsule_json(Vec3::Zero(), Vec3(0, 0, -0.30), 0.05)})));
    joints.push_back(
        joint_json(side + "_ankle_pitch", kn, ap, Vec3(0, 0, -0.30), Vec3::UnitY(), -0.9, 0.6));
    links.push_back(link_json(ap));
    joints.push_back(joint_json(side + "_ankle_roll", ap, ar, Vec3::Zero(), Vec3::UnitX(), -0.3, 0.3));
    links.push_back(link_json(
        ar, njson::array({capsule_json(Vec3(-0.05, 0, -0.04), Vec3(0.12, 0, -0.04), 0.025)})));
  };
  add_leg("left", 1.0);
  add_leg("right", -1.0);

  joints.push_back(joint_json("waist_yaw", "pelvis", "waist_yaw_link", Vec3(0, 0, 0.08),
                              Vec3::UnitZ(), -2.6, 2.6));
  links.push_back(link_json("waist_yaw_link"));
  joints.push_back(joint_json("waist_roll", "waist_yaw_link", "waist_roll_link", Vec3::Zero(),
                              Vec3::UnitX(), -0.5, 0.5));
  links.push_back(link_json("waist_roll_link"));
  joints.push_back(joint_json("waist_pitch", "waist_roll_link", "torso_link", Vec3::Zero(),
                              Vec3::UnitY(), -0.5, 0.5));
  links.push_back(link_json(
      "torso_link", njson::array({capsule_json(Vec3(0, 0, 0.02), Vec3(0, 0, 0.28), 0.11),
                                  capsule_json(Vec3(0, 0, 0.38), Vec3(0, 0, 0.44), 0.08)})));

  auto add_arm = [&](const std::string& side, double sign) {
    const std::string sp = side + "_shoulder_pitch_link";
    const std::string sr = side + "_shoulder_roll_link";
    const std::string sy = side + "_shoulder_yaw_link";
    const std::string el = side + "_elbow_link";
    const std::string wr = side + "_wrist_roll_link";
    const std::string wp = side + "_wrist_pitch_link";
    const std::string wy = side + "_wrist_yaw_link";
    joints.push_back(joint_json(side + "_shoulder_pitch", "torso_link", sp,
                                Vec3(0, sign * 0.16, 0.26), Vec3::UnitY(), -3.0, 2.6));
    links.push_back(link_json(sp));
    joints.push_back(joint_json(side + "_shoulder_roll", sp, sr, Vec3::Zero(), Vec3::UnitX(), -2.2, 2.2));
    links.push_back(link_json(sr));
    joints.push_back(joint_json(side + "_shoulder_yaw", sr, sy, Vec3::Zero(), Vec3::UnitZ(), -2.6, 2.6));
    links.push_back(link_json(
        sy, njson::array({capsule_json(Vec3::Zero(), Vec3(0, 0, -0.20), 0.04)})));
    joints.push_back(joint_json(side + "_elbow", sy, el, Vec3(0, 0, -0.20), -Vec3::UnitY(), -0.3, 2.5));
    links.push_back(link_json(
        el, njson::array({capsule_json(Vec3::Zero(), Vec3(0, 0, -0.18), 0.035)})));
    joints.push_back(joint_json(side + "_wrist_roll", el, wr, Vec3(0, 0, -0.18), Vec3::UnitX(), -1.9, 1.9));
    links.push_back(link_json(wr));
    joints.push_back(joint_json(side + "_wrist_pitch", wr, wp, Vec3::Zero(), Vec3::UnitY(), -1.6, 1.6));
    links.push_back(link_json(wp));
    joints.push_back(joint_json(side + "_wrist_yaw", wp, wy, Vec3::Zero(), Vec3::UnitZ(), -1.6, 1.6));
    links.push_back(link_json(
        wy, njson::array({capsule_json(Vec3::Zero(), Vec3(0, 0, -0.06), 0.025)})));
  };
  add_arm("left", 1.0);
  add_arm("right", -1.0);

  njson keypoints = njson::array();
  auto bind = [&](const std::string& name, const std::string& link, const Vec3& offset) {
    keypoints.push_back(
        njson{{"name", name}, {"link", link}, {"offset", {offset.x(), offset.y(), offset.z()}}});
  };
  bind("pelvis", "pelvis", Vec3::Zero());
  bind("torso", "torso_link", Vec3(0, 0, 0.15));
  bind("head", "torso_link", Vec3(0, 0, 0.42));
  bind("l_shoulder", "left_shoulder_roll_link", Vec3::Zero());
  bind("r_shoulder", "right_shoulder_roll_link", Vec3::Zero());
  bind("l_elbow", "left_elbow_link", Vec3::Zero());
  bind("r_elbow", "right_elbow_link", Vec3::Zero());
  bind("l_hand", "left_wrist_yaw_link", Vec3(0, 0, -0.04));
  bind("r_hand", "right_wrist_yaw_link", Vec3(0, 0, -0.04));
  bind("l_hip", "left_hip_yaw_link", Vec3::Zero());
  bind("r_hip", "right_hip_yaw_link", Vec3::Zero());
  bind("l_knee", "left_knee_link", Vec3::Zero());
  bind("r_knee", "right_knee_link", Vec3::Zero());
  bind("l_foot", "left_ankle_roll_link", Vec3(0.03, 0, -0.05));
  bind("r_foot", "right_ankle_roll_link", Vec3(0.03, 0, -0.05));

  njson j;
  j["schema"] = "duet-robot";
  j["schema_version"] = 1;
  j["name"] = "g1_like_29dof";
  j["nominal_root_height"] = 0.765;
  j["links"] = std::move(links);
  j["joints"] = std::move(joints);
  j["keypoints"] = std::move(keypoints);
  j["key_links"] = {"pelvis", "torso_link", "left_wrist_yaw_link", "right_wrist_yaw_link",
                    "left_ankle_roll_link", "right_ankle_roll_link"};
  j["foot_links"] = {"left_ankle_roll_link", "right_ankle_roll_link"};
  std::vector<double> q_nom(29, 0.0);
  q_nom[16] = 0.18;   // left_shoulder_roll: arms slightly out
  q_nom[23] = -0.18;  // right_shoulder_roll
  q_nom[18] = 0.3;    // left_elbow: slight forward bend
  q_nom[25] = 0.3;    // right_elbow
  j["q_nom"] = q_nom;
  return j.dump(1) + "\n";
}

}  // namespace

const std::string& g1_like_robot_json() {
  static const std::string text = build_g1_like_json();
  return text;
}

RobotSpec make_g1_like_robot() { return load_robot_spec_text(g1_like_robot_json()); }

const std::vector<std::string>& human_template_names() {
  static const std::vector<std::string> names = {
      "pelvis", "torso",   "head",    "l_shoulder", "r_shoulder",
      "l_elbow", "r_elbow", "l_hand",  "r_hand",     "l_hip",
      "r_hip",   "l_knee",  "r_knee",  "l_foot",     "r_foot"};
  return names;
}

std::vector<Vec3> human_template(double h) {
  return {
      Vec3(0, 0, 0.53 * h),          // pelvis
      Vec3(0, 0, 0.70 * h),          // torso
      Vec3(0, 0, h),                 // head (top)
      Vec3(0, 0.115 * h, 0.80 * h),  // l_shoulder
      Vec3(0, -0.115 * h, 0.80 * h),
      Vec3(0, 0.135 * h, 0.62 * h),  // l_elbow
      Vec3(0, -0.135 * h, 0.62 * h),
      Vec3(0, 0.14 * h, 0.46 * h),  // l_hand
      Vec3(0, -0.14 * h, 0.46 * h),
      Vec3(0, 0.06 * h, 0.50 * h),  // l_hip
      Vec3(0, -0.06 * h, 0.50 * h),
      Vec3(0, 0.065 * h, 0.26 * h),  // l_knee
      Vec3(0, -0.065 * h, 0.26 * h),
      Vec3(0.02 * h, 0.07 * h, 0.0),  // l_foot
      Vec3(0.02 * h, -0.07 * h, 0.0),
  };
}

namespace {

std::vector<Vec3> place(const std::vector<Vec3>& pts, double yaw, double x) {
  const Mat3 r = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
  std::vector<Vec3> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = r * pts[i] + Vec3(x, 0, 0);
  return out;
}

double ramp(double t, double t0, double t1) { return smoothstep((t - t0) / (t1 - t0)); }

constexpr int kRHand = 8, kREelbow = 6, kLHand = 7, kLElbow = 5, kRShoulder = 4, kLShoulder = 3;

}  // namespace

DualMotionClip make_handshake_clip() {
  const double h1 = 1.75, h2 = 1.80, dt = 0.02;
  const int frames = 240;
  const auto tmpl1 = human_template(h1);
  const auto tmpl2 = human_template(h2);

  std::vector<std::vector<Vec3>> a1(frames), a2(frames);
  for (int f = 0; f < frames; ++f) {
    const double t = f * dt;
    const double d = 1.9 - 0.9 * ramp(t, 0.0, 1.2) + 0.7 * ramp(t, 3.8, 4.8);
    const double w = ramp(t, 1.0, 1.9) - ramp(t, 3.3, 4.0);
    const double bob = (t > 1.9 && t < 3.3) ? 0.02 * std::sin(2.0 * M_PI * 1.5 * (t - 1.9)) : 0.0;

    auto p1 = place(tmpl1, 0.0, -0.5 * d);
    auto p2 = place(tmpl2, M_PI, 0.5 * d);

    const Vec3 grip(0.0, 0.0, 1.19 + w * bob);
    const Vec3 rh1 = grip + Vec3(-0.025, 0, 0);
    const Vec3 rh2 = grip + Vec3(0.025, 0, 0);
    const Vec3 re1 = 0.5 * (p1[kRShoulder] + rh1) + Vec3(0, -0.07, -0.03);
    const Vec3 re2 = 0.5 * (p2[kRShoulder] + rh2) + Vec3(0, 0.07, -0.03);

    p1[kRHand] = (1.0 - w) * p1[kRHand] + w * rh1;
    p1[kREelbow] = (1.0 - w) * p1[kREelbow] + w * re1;
    p2[kRHand] = (1.0 - w) * p2[kRHand] + w * rh2;
    p2[kREelbow] = (1.0 - w) * p2[kREelbow] + w * re2;

    a1[static_cast<std::size_t>(f)] = std::move(p1);
    a2[static_cast<std::size_t>(f)] = std::move(p2);
  }
  return clip_from_tracks(dt, human_template_names(), std::move(a1), std::move(a2));
}

DualMotionClip make_hug_clip() {
  const double h1 = 1.75, h2 = 1.80, dt = 0.02;
  const int frames = 260;
  const auto tmpl1 = human_template(h1);
  const auto tmpl2 = human_template(h2);

  std::vector<std::vector<Vec3>> a1(frames), a2(frames);
  for (int f = 0; f < frames; ++f) {
    const double t = f * dt;
    const double d = 1.9 - 1.48 * ramp(t, 0.0, 2.0) + 1.18 * ramp(t, 4.2, 5.2);
    const double w = ramp(t, 1.6, 2.4) - ramp(t, 3.8, 4.4);

    auto p1 = place(tmpl1, 0.0, -0.5 * d);
    auto p2 = place(tmpl2, M_PI, 0.5 * d);
    const double x1 = -0.5 * d, x2 = 0.5 * d;

    // hands wrap to points just past the peer's torso axis
    const Vec3 lh1(x2 + 0.04, 0.12, 1.22), rh1(x2 + 0.04, -0.12, 1.22);
    const Vec3 lh2(x1 - 0.04, -0.12, 1.24), rh2(x1 - 0.04, 0.12, 1.24);
    const Vec3 le1 = 0.5 * (p1[kLShoulder] + lh1) + Vec3(0, 0.16, 0);
    const Vec3 re1 = 0.5 * (p1[kRShoulder] + rh1) + Vec3(0, -0.16, 0);
    const Vec3 le2 = 0.5 * (p2[kLShoulder] + lh2) + Vec3(0, -0.16, 0);
    const Vec3 re2 = 0.5 * (p2[kRShoulder] + rh2) + Vec3(0, 0.16, 0);

    auto blend = [w](Vec3& p, const Vec3& target) { p = (1.0 - w) * p + w * target; };
    blend(p1[kLHand], lh1);
    blend(p1[kRHand], rh1);
    blend(p1[kLElbow], le1);
    blend(p1[kREelbow], re1);
    blend(p2[kLHand], lh2);
    blend(p2[kRHand], rh2);
    blend(p2[kLElbow], le2);
    blend(p2[kREelbow], re2);

    a1[static_cast<std::size_t>(f)] = std::move(p1);
    a2[static_cast<std::size_t>(f)] = std::move(p2);
  }
  return clip_from_tracks(dt, human_template_names(), std::move(a1), std::move(a2));
}

DualMotionClip make_static_clip(const std::vector<std::vector<Vec3>>& agents_frame0,
                                const std::vector<std::string>& names, int frames, double dt) {
  if (agents_frame0.size() != 2) throw ConfigError("make_static_clip expects two agents");
  std::vector<std::vector<Vec3>> a1(static_cast<std::size_t>(frames), agents_frame0[0]);
  std::vector<std::vector<Vec3>> a2(static_cast<std::size_t>(frames), agents_frame0[1]);
  return clip_from_tracks(dt, names, std::move(a1), std::move(a2));
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string make_greeting_bvh(double h, double approach_sign) {
  std::ostringstream out;
  auto offset = [&](double x, double y, double z) {
    out << "    OFFSET " << fmt(x) << " " << fmt(y) << " " << fmt(z) << "\n";
  };

  out << "HIERARCHY\n";
  out << "ROOT Hips\n{\n";
  offset(0, 0, 0.53 * h);
  out << "    CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n";
  out << "    JOINT Chest\n    {\n";
  offset(0, 0, 0.17 * h);
  out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n";
  out << "    JOINT Head\n    {\n";
  offset(0, 0, 0.30 * h);
  out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n    End Site\n    {\n";
  offset(0, 0, 0.05 * h);
  out << "    }\n    }\n";
  for (const auto& [side, sign] : {std::pair<std::string, double>{"Left", 1.0}, {"Right", -1.0}}) {
    out << "    JOINT " << side << "Shoulder\n    {\n";
    offset(0, sign * 0.115 * h, 0.10 * h);
    out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n";
    out << "    JOINT " << side << "Elbow\n    {\n";
    offset(0, sign * 0.02 * h, -0.18 * h);
    out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n";
    out << "    JOINT " << side << "Hand\n    {\n";
    offset(0, sign * 0.005 * h, -0.16 * h);
    out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n    End Site\n    {\n";
    offset(0, 0, -0.04 * h);
    out << "    }\n    }\n    }\n    }\n";
  }
  out << "    }\n";  // Chest
  for (const auto& [side, sign] : {std::pair<std::string, double>{"Left", 1.0}, {"Right", -1.0}}) {
    out << "    JOINT " << side << "Hip\n    {\n";
    offset(0, sign * 0.06 * h, -0.03 * h);
    out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n";
    out << "    JOINT " << side << "Knee\n    {\n";
    offset(0, sign * 0.005 * h, -0.24 * h);
    out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n";
    out << "    JOINT " << side << "Foot\n    {\n";
    offset(0.02 * h, sign * 0.005 * h, -0.26 * h);
    out << "    CHANNELS 3 Zrotation Xrotation Yrotation\n    End Site\n    {\n";
    offset(0.06 * h, 0, 0);
    out << "    }\n    }\n    }\n    }\n";
  }
  out << "}\n";

  const int frames = 160;
  const double dt = 0.02;
  out << "MOTION\nFrames: " << frames << "\nFrame Time: " << fmt(dt) << "\n";

  // channel layout: Hips(6) Chest(3) Head(3) LS(3) LE(3) LH(3) RS(3) RE(3)
  // RH(3) LHip(3) LKnee(3) LFoot(3) RHip(3) RKnee(3) RFoot(3) = 48
  for (int f = 0; f < frames; ++f) {
    const double t = f * dt;
    const double x = approach_sign * (0.9 - 0.35 * smoothstep(t / 1.4));
    const double yaw = approach_sign < 0 ? 0.0 : 180.0;
    const double raise = -70.0 * (smoothstep((t - 1.4) / 0.8) - smoothstep((t - 2.8) / 0.4));
    const double wave = (t > 1.8 && t < 2.8) ? 15.0 * std::sin(2.0 * M_PI * 2.0 * (t - 1.8)) : 0.0;

    std::vector<double> ch(48, 0.0);
    ch[0] = x;
    ch[3] = yaw;
    ch[23] = raise + wave;  // RightShoulder Yrotation
    bool first = true;
    for (double v : ch) {
      if (!first) out << " ";
      out << fmt(v);
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

std::string greeting_bvh_map_json() {
  njson map;
  map["pelvis"] = "Hips";
  map["torso"] = "Chest";
  map["head"] = "Head";
  map["l_shoulder"] = "LeftShoulder";
  map["r_shoulder"] = "RightShoulder";
  map["l_elbow"] = "LeftElbow";
  map["r_elbow"] = "RightElbow";
  map["l_hand"] = "LeftHand";
  map["r_hand"] = "RightHand";
  map["l_hip"] = "LeftHip";
  map["r_hip"] = "RightHip";
  map["l_knee"] = "LeftKnee";
  map["r_knee"] = "RightKnee";
  map["l_foot"] = "LeftFoot";
  map["r_foot"] = "RightFoot";
  return map.dump(1) + "\n";
}

}  // namespace duet
