#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace fofkit {

/// Pipeline settings shared by every CLI command. Serialized as a flat
/// TOML-style `key = value` file.
struct PipelineConfig {
  int resolution = 512;
  int channels = 32;
  int depth = 512;
  double iso = 0.5;
  double margin = 0.05;
  double joint_radius = 0.1;
  int joint_channels = 8;
  int low_channels = 16;
  std::vector<double> angles{std::numbers::pi / 2.0};
  std::vector<double> weights{0.5, 0.5};
  std::string refiner = "identity";
  std::uint64_t seed = 0x5eed'f0f0'1234'abcdULL;
  int chamfer_samples = 100000;
  int render_views = 18;
  double render_interval = 20.0;
  std::string render_mode = "normal";

  /// FormatError when a value violates a module precondition.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

std::string serialize_config(const PipelineConfig& config);
/// Unknown keys and malformed values are FormatErrors. Missing keys keep
/// their defaults.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Parses yaw lists like "pi/2", "pi/2, pi", "1.5708", "3pi/4". An empty
/// string yields no angles.
std::vector<double> parse_angle_list(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

}  // namespace fofkit
