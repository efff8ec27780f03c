#include "fofkit/joints.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "fofkit/error.hpp"

namespace fofkit {

std::uint64_t joint_order_hash(std::span<const std::string_view> names) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  bool first = true;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (std::string_view name : names) {
    if (!first) mix('\n');
    first = false;
    for (char c : name) mix(static_cast<unsigned char>(c));
  }
  return h;
}

std::uint64_t smpl_order_hash() {
  static const std::uint64_t h = joint_order_hash(kSmplJointNames);
  return h;
}

JointSet parse_joints(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("joints: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("joints") || !doc["joints"].is_array()) {
    throw FormatError("joints: expected an object with a \"joints\" array");
  }

  JointSet out;
  if (doc.contains("frame")) {
    if (!doc["frame"].is_string()) throw FormatError("joints: \"frame\" must be a string");
    out.frame = doc["frame"].get<std::string>();
    if (out.frame != "normalized" && out.frame != "metric") {
      throw FormatError("joints: unknown frame \"" + out.frame + "\"");
    }
  }

  std::unordered_map<std::string_view, int> slot;
  for (int k = 0; k < kSmplJointCount; ++k) slot.emplace(kSmplJointNames[k], k);

  std::vector<std::optional<Vec3>> positions(kSmplJointCount);
  for (const auto& entry : doc["joints"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("p") || !entry["p"].is_array() || entry["p"].size() != 3) {
      throw FormatError("joints: each entry needs \"name\" and a 3-element \"p\"");
    }
    const std::string name = entry["name"].get<std::string>();
    const auto it = slot.find(name);
    if (it == slot.end()) throw FormatError("joints: unknown joint " + name);
    if (positions[it->second]) throw FormatError("joints: duplicate joint " + name);
    double xyz[3];
    for (int d = 0; d < 3; ++d) {
      const auto& v = entry["p"][d];
      if (!v.is_number()) throw FormatError("joints: non-numeric coordinate for " + name);
      xyz[d] = v.get<double>();
      if (!std::isfinite(xyz[d])) throw FormatError("joints: non-finite coordinate for " + name);
    }
    positions[it->second] = Vec3{xyz[0], xyz[1], xyz[2]};
  }
  for (int k = 0; k < kSmplJointCount; ++k) {
    if (!positions[k]) {
      throw FormatError("joints: missing joint " + std::string(kSmplJointNames[k]));
    }
    out.joints.push_back({std::string(kSmplJointNames[k]), *positions[k]});
  }
  return out;
}

JointSet load_joints(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_joints(ss.str());
}

JointSet to_normalized(const JointSet& joints, const NormalizedFrame& frame) {
  JointSet out = joints;
  for (Joint& j : out.joints) j.position = frame.to_normalized(j.position);
  out.frame = "normalized";
  return out;
}

CsejGrid embed_joints(const JointSet& joints, double radius, int width, int height,
                      int channels_per_joint) {
  if (!(radius > 0.0)) throw GeometryError("joint radius must be positive");
  if (channels_per_joint < 1) throw FormatError("channels per joint must be >= 1");
  if (joints.frame != "normalized") {
    throw GeometryError("joints must be in the normalized frame before embedding");
  }
  const int count = static_cast<int>(joints.size());
  for (const Joint& j : joints.joints) {
    if (!std::isfinite(j.position.x) || !std::isfinite(j.position.y) ||
        !std::isfinite(j.position.z)) {
      throw GeometryError("joint " + j.name + " has a non-finite position");
    }
  }

  std::vector<std::string_view> names;
  names.reserve(joints.joints.size());
  for (const Joint& j : joints.joints) names.push_back(j.name);

  CsejGrid out{FofGrid(width, height, count * channels_per_joint), count,
               channels_per_joint, radius, joint_order_hash(names)};
  const double r2 = radius * radius;
  const auto cj = static_cast<std::size_t>(channels_per_joint);
#pragma omp parallel
  {
    std::vector<double> acc(cj);
#pragma omp for schedule(static)
    for (int j = 0; j < height; ++j) {
      const double py = pixel_y(j, height);
      for (int i = 0; i < width; ++i) {
        const double px = pixel_x(i, width);
        auto pixel = out.grid.pixel(i, j);
        for (int k = 0; k < count; ++k) {
          const Vec3& c = joints.joints[k].position;
          const double dx = px - c.x;
          const double dy = py - c.y;
          const double d2 = dx * dx + dy * dy;
          if (d2 > r2) continue;
          const double h = std::sqrt(r2 - d2);
          const double s = std::max(c.z - h, -1.0);
          const double e = std::min(c.z + h, 1.0);
          if (!(s < e)) continue;
          std::fill(acc.begin(), acc.end(), 0.0);
          accumulate_interval(s, e, acc);
          for (std::size_t ch = 0; ch < cj; ++ch) {
            pixel[k * cj + ch] = static_cast<float>(acc[ch]);
          }
        }
      }
    }
  }
  return out;
}

ConditionGrid concat_condition(const CsejGrid& csej, const std::optional<Image>& aux) {
  ConditionGrid out;
  const FofGrid& src = csej.grid;
  out.blocks.push_back({"csej", 0, src.channels()});
  if (!aux) {
    out.grid = src;
    return out;
  }
  if (aux->width != src.width() || aux->height != src.height()) {
    throw FormatError("auxiliary image is " + std::to_string(aux->width) + "x" +
                      std::to_string(aux->height) + " but the embedding is " +
                      std::to_string(src.width()) + "x" + std::to_string(src.height()));
  }
  const int total = src.channels() + aux->channels;
  out.grid = FofGrid(src.width(), src.height(), total);
  out.blocks.push_back({"aux", src.channels(), aux->channels});
  for (int j = 0; j < src.height(); ++j) {
    for (int i = 0; i < src.width(); ++i) {
      auto dst = out.grid.pixel(i, j);
      const auto s = src.pixel(i, j);
      std::copy(s.begin(), s.end(), dst.begin());
      const std::uint8_t* a = aux->at(i, j);
      for (int c = 0; c < aux->channels; ++c) dst[src.channels() + c] = a[c];
    }
  }
  return out;
}

}  // namespace fofkit
