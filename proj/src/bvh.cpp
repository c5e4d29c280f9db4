#include "duet/bvh.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace duet {
namespace {

struct Token {
  std::string text;
  int line;
};

struct Lexer {
  std::deque<Token> tokens;
  int last_line = 1;

  explicit Lexer(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back({tok, lineno});
    }
    last_line = lineno > 0 ? lineno : 1;
  }

  bool done() const { return tokens.empty(); }

  const Token& peek() const {
    if (tokens.empty()) throw ParseError(last_line, "unexpected end of file");
    return tokens.front();
  }

  Token next() {
    Token t = peek();
    tokens.pop_front();
    return t;
  }

  Token expect(const std::string& text) {
    Token t = next();
    if (t.text != text) throw ParseError(t.line, "expected '" + text + "', got '" + t.text + "'");
    return t;
  }

  double number() {
    Token t = next();
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(t.text, &pos);
    } catch (const std::exception&) {
      throw ParseError(t.line, "expected a number, got '" + t.text + "'");
    }
    if (pos != t.text.size()) throw ParseError(t.line, "expected a number, got '" + t.text + "'");
    if (!std::isfinite(v)) throw ParseError(t.line, "non-finite value '" + t.text + "'");
    return v;
  }

  long integer() {
    Token t = peek();
    double v = number();
    long i = static_cast<long>(v);
    if (static_cast<double>(i) != v) throw ParseError(t.line, "expected an integer, got '" + t.text + "'");
    return i;
  }
};

Channel channel_from_name(const std::string& name, int line) {
  if (name == "Xposition") return Channel::Xpos;
  if (name == "Yposition") return Channel::Ypos;
  if (name == "Zposition") return Channel::Zpos;
  if (name == "Xrotation") return Channel::Xrot;
  if (name == "Yrotation") return Channel::Yrot;
  if (name == "Zrotation") return Channel::Zrot;
  throw ParseError(line, "unsupported channel '" + name + "'");
}

Vec3 parse_offset(Lexer& lex) {
  lex.expect("OFFSET");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = lex.number();
  return v;
}

// Parses one ROOT/JOINT block (the keyword has been consumed) and appends the
// joint plus its subtree in depth-first order.
void parse_joint(Lexer& lex, int parent, SourceSkeleton& skel, int& channel_cursor) {
  Token name = lex.next();
  const int index = static_cast<int>(skel.joints.size());
  skel.joints.push_back({});
  {
    BvhJoint& j = skel.joints.back();
    j.name = name.text;
    j.parent = parent;
  }

  Token open = lex.expect("{");
  skel.joints[index].offset = parse_offset(lex);

  Token chans = lex.expect("CHANNELS");
  long n = lex.integer();
  if (n != 3 && n != 6) throw ParseError(chans.line, "CHANNELS must declare 3 or 6 channels, got " + std::to_string(n));
  skel.joints[index].channel_start = channel_cursor;
  for (long i = 0; i < n; ++i) {
    Token c = lex.next();
    skel.joints[index].channels.push_back(channel_from_name(c.text, c.line));
  }
  channel_cursor += static_cast<int>(n);

  while (true) {
    Token t = lex.next();
    if (t.text == "}") return;
    if (t.text == "JOINT") {
      parse_joint(lex, index, skel, channel_cursor);
    } else if (t.text == "End") {
      lex.expect("Site");
      lex.expect("{");
      skel.joints[index].end_site = parse_offset(lex);
      skel.joints[index].has_end_site = true;
      lex.expect("}");
    } else {
      throw ParseError(t.line, "expected JOINT, End Site or '}', got '" + t.text + "' (unbalanced braces?)");
    }
  }
  (void)open;
}

Mat3 channel_rotation(Channel c, double degrees) {
  const double rad = degrees * M_PI / 180.0;
  switch (c) {
    case Channel::Xrot: return Eigen::AngleAxisd(rad, Vec3::UnitX()).toRotationMatrix();
    case Channel::Yrot: return Eigen::AngleAxisd(rad, Vec3::UnitY()).toRotationMatrix();
    default: return Eigen::AngleAxisd(rad, Vec3::UnitZ()).toRotationMatrix();
  }
}

}  // namespace

int SourceSkeleton::channel_count() const {
  int n = 0;
  for (const auto& j : joints) n += static_cast<int>(j.channels.size());
  return n;
}

int SourceSkeleton::joint_index(const std::string& name) const {
  for (std::size_t i = 0; i < joints.size(); ++i)
    if (joints[i].name == name) return static_cast<int>(i);
  return -1;
}

BvhDocument parse_bvh(std::istream& in) {
  Lexer lex(in);
  if (lex.done()) throw ParseError(1, "empty input");

  lex.expect("HIERARCHY");
  Token root_kw = lex.next();
  if (root_kw.text != "ROOT") throw ParseError(root_kw.line, "expected ROOT, got '" + root_kw.text + "'");

  BvhDocument doc;
  int channel_cursor = 0;
  parse_joint(lex, -1, doc.skeleton, channel_cursor);

  if (lex.done()) throw ParseError(lex.last_line, "missing MOTION section");
  Token motion = lex.next();
  if (motion.text == "ROOT") throw ParseError(motion.line, "multiple ROOT joints are not supported");
  if (motion.text != "MOTION") throw ParseError(motion.line, "missing MOTION section (got '" + motion.text + "')");

  lex.expect("Frames:");
  long frame_count = lex.integer();
  if (frame_count < 0) throw ParseError(motion.line, "negative frame count");
  lex.expect("Frame");
  Token time_kw = lex.expect("Time:");
  doc.frame_dt = lex.number();
  if (doc.frame_dt <= 0.0) throw ParseError(time_kw.line, "Frame Time must be positive");

  const int per_frame = doc.skeleton.channel_count();
  doc.frames.reserve(static_cast<std::size_t>(frame_count));
  for (long f = 0; f < frame_count; ++f) {
    std::vector<double> row(static_cast<std::size_t>(per_frame));
    for (int c = 0; c < per_frame; ++c) {
      if (lex.done())
        throw ParseError(lex.last_line, "frame-count mismatch: expected " + std::to_string(frame_count) +
                                            " frames of " + std::to_string(per_frame) + " channels, data ended at frame " +
                                            std::to_string(f));
      row[static_cast<std::size_t>(c)] = lex.number();
    }
    doc.frames.push_back(std::move(row));
  }
  if (!lex.done()) {
    Token extra = lex.peek();
    throw ParseError(extra.line, "trailing channel data after declared frame count (channel count mismatch?)");
  }

  for (const auto& j : doc.skeleton.joints) {
    if (!j.offset.allFinite()) throw ParseError(1, "non-finite OFFSET for joint " + j.name);
  }
  return doc;
}

BvhDocument parse_bvh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open BVH file: " + path);
  return parse_bvh(in);
}

std::vector<Transform> bvh_frame_transforms(const SourceSkeleton& skeleton,
                                            const std::vector<double>& channels,
                                            double scale) {
  if (channels.size() != static_cast<std::size_t>(skeleton.channel_count()))
    throw ConfigError("channel row size does not match skeleton layout");

  std::vector<Transform> world(skeleton.joints.size());
  for (std::size_t i = 0; i < skeleton.joints.size(); ++i) {
    const BvhJoint& j = skeleton.joints[i];
    Transform local = make_transform(Mat3::Identity(), j.offset * scale);
    int cursor = j.channel_start;
    for (Channel c : j.channels) {
      const double v = channels[static_cast<std::size_t>(cursor++)];
      switch (c) {
        case Channel::Xpos: local.translation().x() += v * scale; break;
        case Channel::Ypos: local.translation().y() += v * scale; break;
        case Channel::Zpos: local.translation().z() += v * scale; break;
        default: local.linear() = local.linear() * channel_rotation(c, v); break;
      }
    }
    world[i] = (j.parent < 0) ? local : world[static_cast<std::size_t>(j.parent)] * local;
  }
  return world;
}

std::vector<std::vector<Vec3>> extract_keypoints(const BvhDocument& doc,
                                                 const std::vector<std::string>& joint_names,
                                                 double scale) {
  std::vector<int> ids;
  ids.reserve(joint_names.size());
  for (const auto& name : joint_names) {
    int id = doc.skeleton.joint_index(name);
    if (id < 0) throw ConfigError("unknown joint name in keypoint map: " + name);
    ids.push_back(id);
  }

  std::vector<std::vector<Vec3>> out(doc.frames.size());
  for (std::size_t f = 0; f < doc.frames.size(); ++f) {
    const auto world = bvh_frame_transforms(doc.skeleton, doc.frames[f], scale);
    out[f].reserve(ids.size());
    for (int id : ids) out[f].push_back(world[static_cast<std::size_t>(id)].translation());
  }
  return out;
}

}  // namespace duet
