#include "duet/clip.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace duet {

int DualMotionClip::keypoint_index(const std::string& name) const {
  for (std::size_t i = 0; i < keypoint_names.size(); ++i)
    if (keypoint_names[i] == name) return static_cast<int>(i);
  return -1;
}

void DualMotionClip::validate() const {
  if (frame_dt <= 0.0) throw ConfigError("clip frame_dt must be positive");
  const std::size_t k = keypoint_names.size();
  for (std::size_t t = 0; t < frames.size(); ++t) {
    for (int a = 0; a < 2; ++a) {
      if (frames[t][a].size() != k)
        throw ConfigError("clip frame " + std::to_string(t) + " agent " + std::to_string(a + 1) +
                          " has wrong keypoint count");
      for (const Vec3& p : frames[t][a])
        if (!p.allFinite())
          throw ConfigError("clip frame " + std::to_string(t) + " contains non-finite coordinates");
    }
  }
}

namespace {

struct LineReader {
  std::istream& in;
  int lineno = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '#') continue;
      // skip blank lines
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      return true;
    }
    return false;
  }
};

std::pair<std::string, std::string> split_key(const std::string& line, int lineno) {
  std::istringstream ls(line);
  std::string key, rest, extra;
  if (!(ls >> key >> rest)) throw ParseError(lineno, "expected '<key> <value>'");
  std::getline(ls, extra);
  return {key, rest + extra};
}

double parse_double(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    if (!std::isfinite(v)) throw ParseError(lineno, "non-finite value '" + s + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(lineno, "expected a number, got '" + s + "'");
  }
}

long parse_long(const std::string& s, int lineno) {
  double v = parse_double(s, lineno);
  long i = static_cast<long>(v);
  if (static_cast<double>(i) != v) throw ParseError(lineno, "expected an integer, got '" + s + "'");
  return i;
}

}  // namespace

DualMotionClip read_keypoint_clip(std::istream& in) {
  LineReader reader{in};
  std::string line;

  if (!reader.next(line)) throw ParseError(1, "empty keypoint clip");
  {
    std::istringstream ls(line);
    std::string magic, version;
    ls >> magic >> version;
    if (magic != "DUET-KPTS") throw ParseError(reader.lineno, "not a DUET-KPTS file");
    if (version != "1") throw ParseError(reader.lineno, "unsupported DUET-KPTS version '" + version + "'");
  }

  long agents = -1, keypoints = -1, frame_count = -1;
  double frame_dt = 0.0;
  std::vector<std::string> names;

  while (names.empty()) {
    if (!reader.next(line)) throw ParseError(reader.lineno, "truncated header");
    auto [key, value] = split_key(line, reader.lineno);
    if (key == "agents") {
      agents = parse_long(value, reader.lineno);
      if (agents != 2) throw ParseError(reader.lineno, "only 2-agent clips are supported, got " + value);
    } else if (key == "keypoints") {
      keypoints = parse_long(value, reader.lineno);
      if (keypoints <= 0) throw ParseError(reader.lineno, "keypoints must be positive");
    } else if (key == "frame_dt") {
      frame_dt = parse_double(value, reader.lineno);
      if (frame_dt <= 0.0) throw ParseError(reader.lineno, "frame_dt must be positive");
    } else if (key == "frames") {
      frame_count = parse_long(value, reader.lineno);
      if (frame_count < 0) throw ParseError(reader.lineno, "frames must be non-negative");
    } else if (key == "names") {
      if (keypoints < 0) throw ParseError(reader.lineno, "names must come after keypoints");
      std::istringstream ls(line);
      std::string skip, n;
      ls >> skip;
      while (ls >> n) names.push_back(n);
      if (static_cast<long>(names.size()) != keypoints)
        throw ParseError(reader.lineno, "expected " + std::to_string(keypoints) + " names, got " +
                                            std::to_string(names.size()));
    } else {
      throw ParseError(reader.lineno, "unknown header key '" + key + "'");
    }
  }
  if (agents < 0 || keypoints < 0 || frame_count < 0 || frame_dt <= 0.0)
    throw ParseError(reader.lineno, "incomplete header (need agents, keypoints, frame_dt, frames, names)");

  DualMotionClip clip;
  clip.frame_dt = frame_dt;
  clip.keypoint_names = std::move(names);
  clip.frames.resize(static_cast<std::size_t>(frame_count));

  const long per_line = 2 * keypoints * 3;
  for (long t = 0; t < frame_count; ++t) {
    if (!reader.next(line))
      throw ParseError(reader.lineno, "frame-count mismatch: expected " + std::to_string(frame_count) +
                                          " data lines, got " + std::to_string(t));
    std::istringstream ls(line);
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(per_line));
    std::string tok;
    while (ls >> tok) vals.push_back(parse_double(tok, reader.lineno));
    if (static_cast<long>(vals.size()) != per_line)
      throw ParseError(reader.lineno, "expected " + std::to_string(per_line) + " values, got " +
                                          std::to_string(vals.size()));
    auto& frame = clip.frames[static_cast<std::size_t>(t)];
    std::size_t cursor = 0;
    for (int a = 0; a < 2; ++a) {
      frame[a].resize(static_cast<std::size_t>(keypoints));
      for (long k = 0; k < keypoints; ++k) {
        frame[a][static_cast<std::size_t>(k)] =
            Vec3(vals[cursor], vals[cursor + 1], vals[cursor + 2]);
        cursor += 3;
      }
    }
  }

  std::string extra;
  if (reader.next(extra)) throw ParseError(reader.lineno, "trailing data after declared frame count");

  clip.validate();
  return clip;
}

DualMotionClip read_keypoint_clip_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open keypoint clip: " + path);
  return read_keypoint_clip(in);
}

void write_keypoint_clip(const DualMotionClip& clip, std::ostream& out) {
  out << "DUET-KPTS 1\n";
  out << "agents 2\n";
  out << "keypoints " << clip.keypoint_count() << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "frame_dt " << clip.frame_dt << "\n";
  out << "frames " << clip.frame_count() << "\n";
  out << "names";
  for (const auto& n : clip.keypoint_names) out << " " << n;
  out << "\n";
  for (const auto& frame : clip.frames) {
    bool first = true;
    for (int a = 0; a < 2; ++a) {
      for (const Vec3& p : frame[a]) {
        for (int i = 0; i < 3; ++i) {
          if (!first) out << " ";
          out << p[i];
          first = false;
        }
      }
    }
    out << "\n";
  }
}

void write_keypoint_clip_file(const DualMotionClip& clip, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_keypoint_clip(clip, out);
  if (!out) throw IoError("write failed: " + path);
}

DualMotionClip clip_from_tracks(double frame_dt,
                                std::vector<std::string> names,
                                std::vector<std::vector<Vec3>> agent1,
                                std::vector<std::vector<Vec3>> agent2) {
  if (agent1.size() != agent2.size()) throw ConfigError("agent tracks differ in frame count");
  DualMotionClip clip;
  clip.frame_dt = frame_dt;
  clip.keypoint_names = std::move(names);
  clip.frames.resize(agent1.size());
  for (std::size_t t = 0; t < agent1.size(); ++t) {
    clip.frames[t][0] = std::move(agent1[t]);
    clip.frames[t][1] = std::move(agent2[t]);
  }
  clip.validate();
  return clip;
}

}  // namespace duet
