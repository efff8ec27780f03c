#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fofkit/fof.hpp"
#include "fofkit/image.hpp"
#include "fofkit/mesh.hpp"

namespace fofkit {

inline constexpr int kSmplJointCount = 24;
inline constexpr int kDefaultJointChannels = 8;
inline constexpr double kDefaultJointRadiusMeters = 0.10;

/// SMPL kinematic-tree order. Channel block i of a joint embedding belongs to
/// kSmplJointNames[i].
inline constexpr std::array<std::string_view, kSmplJointCount> kSmplJointNames{
    "pelvis",         "left_hip",       "right_hip",   "spine1",
    "left_knee",      "right_knee",     "spine2",      "left_ankle",
    "right_ankle",    "spine3",         "left_foot",   "right_foot",
    "neck",           "left_collar",    "right_collar", "head",
    "left_shoulder",  "right_shoulder", "left_elbow",  "right_elbow",
    "left_wrist",     "right_wrist",    "left_hand",   "right_hand"};

/// FNV-1a over the names joined by '\n'.
std::uint64_t joint_order_hash(std::span<const std::string_view> names);
std::uint64_t smpl_order_hash();

struct Joint {
  std::string name;
  Vec3 position;
};

/// Joints in canonical SMPL order.
struct JointSet {
  std::vector<Joint> joints;
  /// "normalized" or "metric" as declared by the source file.
  std::string frame = "normalized";

  std::size_t size() const { return joints.size(); }
};

/// Parses {"frame": "...", "joints": [{"name": str, "p": [x, y, z]}, ...]}
/// and reorders into canonical order. FormatError on unknown, duplicate or
/// missing names and on non-finite coordinates.
JointSet load_joints(const std::filesystem::path& path);
JointSet parse_joints(std::string_view json_text);

/// Maps metric joints into a mesh's normalized frame.
JointSet to_normalized(const JointSet& joints, const NormalizedFrame& frame);

/// Radius in normalized units for a metric radius (meters).
inline double normalized_radius(double meters, const NormalizedFrame& frame) {
  return meters * frame.scale;
}

/// Joint-sphere FOF blocks concatenated channel-wise.
struct CsejGrid {
  FofGrid grid;
  int joints = 0;
  int channels_per_joint = 0;
  double radius = 0.0;
  std::uint64_t order_hash = 0;
};

/// Block i (channels [i * C_j, (i + 1) * C_j)) is
/// sphere_fof(p_i, radius, width, height, C_j). Spheres are not unioned.
CsejGrid embed_joints(const JointSet& joints, double radius, int width,
                      int height, int channels_per_joint);

struct ChannelBlock {
  std::string source;
  int first = 0;
  int count = 0;
};

/// Joint embedding with an optional auxiliary image appended channel-wise.
struct ConditionGrid {
  FofGrid grid;
  std::vector<ChannelBlock> blocks;
};

/// Aux pixel values are appended as-is (raw 8-bit values as floats).
ConditionGrid concat_condition(const CsejGrid& csej,
                               const std::optional<Image>& aux);

}  // namespace fofkit
