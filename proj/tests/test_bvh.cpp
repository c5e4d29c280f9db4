#include <random>
#include <sstream>

#include "doctest.h"

#include "duet/bvh.hpp"
#include "duet/fixtures.hpp"
#include "support/oracles.hpp"

using namespace duet;

namespace {

const char* kThreeJoint = R"(HIERARCHY
ROOT Hips
{
    OFFSET 0.0 0.0 1.0
    CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
    JOINT Spine
    {
        OFFSET 0.0 0.0 0.3
        CHANNELS 3 Zrotation Xrotation Yrotation
        End Site
        {
            OFFSET 0.0 0.0 0.2
        }
    }
    JOINT LeftLeg
    {
        OFFSET 0.0 0.1 -0.4
        CHANNELS 3 Zrotation Xrotation Yrotation
        End Site
        {
            OFFSET 0.0 0.0 -0.5
        }
    }
}
MOTION
Frames: 2
Frame Time: 0.033333
0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0
0.1 0.2 0.3 10.0 20.0 30.0 5.0 0.0 0.0 0.0 0.0 15.0
)";

BvhDocument parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_bvh(in);
}

}  // namespace

TEST_SUITE("bvh") {

TEST_CASE("three-joint fixture parses") {
  const BvhDocument doc = parse_text(kThreeJoint);
  CHECK(doc.skeleton.joints.size() == 3);
  CHECK(doc.frames.size() == 2);
  CHECK(doc.frame_dt == doctest::Approx(0.033333).epsilon(1e-9));
  CHECK(doc.skeleton.channel_count() == 12);
  CHECK(doc.skeleton.joints[0].parent == -1);
  CHECK(doc.skeleton.joints[1].parent == 0);
  CHECK(doc.skeleton.joints[2].parent == 0);
  CHECK(doc.skeleton.joints[1].has_end_site);
  // topological order
  for (std::size_t i = 1; i < doc.skeleton.joints.size(); ++i)
    CHECK(doc.skeleton.joints[i].parent < static_cast<int>(i));
}

TEST_CASE("missing MOTION section") {
  std::string text(kThreeJoint);
  text = text.substr(0, text.find("MOTION"));
  CHECK_THROWS_WITH_AS(parse_text(text), doctest::Contains("MOTION"), ParseError);
}

TEST_CASE("unbalanced braces carry a line number") {
  std::string text(kThreeJoint);
  const auto pos = text.rfind('}');
  text.erase(pos, 1);
  try {
    parse_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() > 0);
  }
}

TEST_CASE("frame-count and channel mismatches") {
  std::string shorter(kThreeJoint);
  shorter = shorter.substr(0, shorter.rfind("0.1"));
  CHECK_THROWS_WITH_AS(parse_text(shorter), doctest::Contains("frame-count"), ParseError);

  std::string extra(kThreeJoint);
  extra += "1.0 2.0\n";
  CHECK_THROWS_AS(parse_text(extra), ParseError);
}

TEST_CASE("non-finite values are rejected") {
  std::string text(kThreeJoint);
  text.replace(text.find("0.1 0.2"), 3, "nan");
  CHECK_THROWS_AS(parse_text(text), ParseError);
}

TEST_CASE("90 degree Z rotation moves the child by the rotated offset") {
  const char* text = R"(HIERARCHY
ROOT A
{
    OFFSET 0 0 0
    CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
    JOINT B
    {
        OFFSET 1.0 0.0 0.0
        CHANNELS 3 Zrotation Xrotation Yrotation
        End Site
        {
            OFFSET 0.1 0 0
        }
    }
}
MOTION
Frames: 1
Frame Time: 0.02
0 0 0 90 0 0 0 0 0
)";
  const BvhDocument doc = parse_text(text);
  const auto world = bvh_frame_transforms(doc.skeleton, doc.frames[0]);
  const Vec3 child = world[1].translation();
  CHECK(child.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(child.y() == doctest::Approx(1.0).epsilon(1e-12));

  // independent check: compose homogeneous transforms by hand
  const Eigen::Matrix4d expect =
      oracles::hom_axis_rotation(2, M_PI / 2.0) * oracles::hom_translation(Vec3(1, 0, 0));
  CHECK((child - expect.block<3, 1>(0, 3)).norm() < 1e-12);
}

TEST_CASE("extract_keypoints on zero channels gives cumulative offsets") {
  const BvhDocument doc = parse_text(kThreeJoint);
  const auto kp = extract_keypoints(doc, {"Hips", "Spine", "LeftLeg"});
  REQUIRE(kp.size() == 2);
  CHECK((kp[0][0] - Vec3(0, 0, 1.0)).norm() < 1e-15);
  CHECK((kp[0][1] - Vec3(0, 0, 1.3)).norm() < 1e-15);
  CHECK((kp[0][2] - Vec3(0, 0.1, 0.6)).norm() < 1e-15);
}

TEST_CASE("extract_keypoints edge cases") {
  const BvhDocument doc = parse_text(kThreeJoint);
  CHECK_THROWS_AS(extract_keypoints(doc, {"NoSuchJoint"}), ConfigError);
  const auto empty = extract_keypoints(doc, {});
  REQUIRE(empty.size() == 2);
  CHECK(empty[0].empty());
}

TEST_CASE("random channels match the homogeneous-transform oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  const BvhDocument doc = parse_text(kThreeJoint);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> ch(12);
    for (double& v : ch) v = angle(rng) / 50.0;
    for (int c = 3; c < 6; ++c) ch[static_cast<std::size_t>(c)] = angle(rng);
    for (int c = 6; c < 12; ++c) ch[static_cast<std::size_t>(c)] = angle(rng);

    const auto world = bvh_frame_transforms(doc.skeleton, ch);

    auto deg = [](double d) { return d * M_PI / 180.0; };
    const Eigen::Matrix4d root = oracles::hom_translation(Vec3(0, 0, 1.0)) *
                                 oracles::hom_translation(Vec3(ch[0], ch[1], ch[2])) *
                                 oracles::hom_axis_rotation(2, deg(ch[3])) *
                                 oracles::hom_axis_rotation(0, deg(ch[4])) *
                                 oracles::hom_axis_rotation(1, deg(ch[5]));
    const Eigen::Matrix4d spine = root * oracles::hom_translation(Vec3(0, 0, 0.3)) *
                                  oracles::hom_axis_rotation(2, deg(ch[6])) *
                                  oracles::hom_axis_rotation(0, deg(ch[7])) *
                                  oracles::hom_axis_rotation(1, deg(ch[8]));
    CHECK((world[0].matrix() - root).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((world[1].matrix() - spine).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("FK is bitwise deterministic") {
  const BvhDocument doc = parse_text(kThreeJoint);
  const auto a = bvh_frame_transforms(doc.skeleton, doc.frames[1]);
  const auto b = bvh_frame_transforms(doc.skeleton, doc.frames[1]);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].matrix() == b[i].matrix());
}

TEST_CASE("parser totality: mutated documents parse fully or throw ParseError") {
  std::mt19937 rng(97);
  const std::string base(kThreeJoint);
  int parsed = 0, rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = base;
    const int edits = 1 + static_cast<int>(rng() % 3u);
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = rng() % text.size();
      switch (rng() % 3u) {
        case 0: text.erase(pos, 1 + rng() % 4u); break;
        case 1: text.insert(pos, std::string(1, "xX{}1."[rng() % 6u])); break;
        default: text[pos] = static_cast<char>('0' + rng() % 10u); break;
      }
    }
    try {
      const BvhDocument doc = parse_text(text);
      // whatever survived must be internally consistent
      CHECK(doc.skeleton.joints.size() >= 1);
      CHECK(doc.skeleton.joints[0].parent == -1);
      for (const auto& frame : doc.frames)
        CHECK(frame.size() == static_cast<std::size_t>(doc.skeleton.channel_count()));
      ++parsed;
    } catch (const ParseError& err) {
      CHECK(err.line() >= 1);
      ++rejected;
    }
    // nothing else may escape: other exception types would fail the test here
  }
  CHECK(parsed + rejected == 300);
  CHECK(rejected > 50);  // the mutations do bite
}

TEST_CASE("generated greeting BVH parses and extracts") {
  const std::string text = make_greeting_bvh(1.75, -1.0);
  const BvhDocument doc = parse_text(text);
  CHECK(doc.skeleton.joints.size() == 15);
  CHECK(doc.frames.size() == 160);
  const auto kp = extract_keypoints(doc, {"Hips", "RightHand"});
  CHECK(kp.size() == 160);
  // actor stands at roughly pelvis height 0.53 * 1.75
  CHECK(kp[0][0].z() == doctest::Approx(0.9275).epsilon(1e-6));
}

}  // TEST_SUITE
