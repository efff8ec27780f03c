#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "fofkit/fof.hpp"
#include "fofkit/mesh.hpp"

namespace fofkit {

// Binary containers, all little endian:
//   magic[4] | u32 width | u32 height | u32 channels | u32 layout
//   | width * height * channels f32, (j, i, c) order, c fastest
//   [| trailer]
// "FOF1": coefficient grid. "CSE1": joint embedding, followed by a trailer
// (see CsejTrailer). "OCC1": occupancy grid with R in the channels slot.

inline constexpr std::array<char, 4> kFofMagic{'F', 'O', 'F', '1'};
inline constexpr std::array<char, 4> kCsejMagic{'C', 'S', 'E', '1'};
inline constexpr std::array<char, 4> kOccupancyMagic{'O', 'C', 'C', '1'};

/// CSE1 trailer:
///   "CSJM" | u32 joints | u32 channels_per_joint | f64 radius
///   | u64 joint_order_hash | u32 aux_channels
struct CsejTrailer {
  std::uint32_t joints = 0;
  std::uint32_t channels_per_joint = 0;
  double radius = 0.0;
  std::uint64_t order_hash = 0;
  std::uint32_t aux_channels = 0;
};

void write_fof(const FofGrid& grid, const std::filesystem::path& path);
FofGrid read_fof(const std::filesystem::path& path);

void write_csej(const FofGrid& grid, const CsejTrailer& trailer,
                const std::filesystem::path& path);
FofGrid read_csej(const std::filesystem::path& path, CsejTrailer& trailer);

void write_occupancy(const OccupancyGrid& grid,
                     const std::filesystem::path& path);
OccupancyGrid read_occupancy(const std::filesystem::path& path);

/// Reads just the magic; FormatError on short files.
std::array<char, 4> peek_magic(const std::filesystem::path& path);

/// `<file>.frame.json` next to an encoded file.
std::filesystem::path frame_sidecar_path(const std::filesystem::path& file);
void write_frame(const NormalizedFrame& frame,
                 const std::filesystem::path& path);
NormalizedFrame read_frame(const std::filesystem::path& path);
std::optional<NormalizedFrame> read_frame_if_present(
    const std::filesystem::path& path);

}  // namespace fofkit
