#include "fofkit/grid_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "fofkit/error.hpp"

namespace fofkit {

namespace {

constexpr std::array<char, 4> kCsejTrailerMagic{'C', 'S', 'J', 'M'};
constexpr std::size_t kHeaderBytes = 20;
constexpr std::size_t kCsejTrailerBytes = 4 + 4 + 4 + 8 + 8 + 4;

template <typename T>
void put(std::string& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  buf.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw FormatError("file truncated");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf;
}

void write_bytes(const std::string& buf, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string encode(const std::array<char, 4>& magic, std::uint32_t width,
                   std::uint32_t height, std::uint32_t channels,
                   std::span<const float> data) {
  std::string buf;
  buf.reserve(kHeaderBytes + data.size() * 4 + kCsejTrailerBytes);
  buf.append(magic.data(), 4);
  put(buf, width);
  put(buf, height);
  put(buf, channels);
  put(buf, static_cast<std::uint32_t>(ChannelLayout::kCosSinInterleaved));
  for (float v : data) put(buf, v);
  return buf;
}

struct Decoded {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t channels = 0;
  std::vector<float> data;
  std::size_t end = 0;
};

Decoded decode(const std::string& buf, const std::array<char, 4>& magic,
               const std::string& name) {
  if (buf.size() < kHeaderBytes) throw FormatError(name + ": file truncated");
  if (std::memcmp(buf.data(), magic.data(), 4) != 0) {
    throw FormatError(name + ": bad magic, expected " + std::string(magic.data(), 4));
  }
  std::size_t pos = 4;
  Decoded d;
  d.width = get<std::uint32_t>(buf, pos);
  d.height = get<std::uint32_t>(buf, pos);
  d.channels = get<std::uint32_t>(buf, pos);
  const auto layout = get<std::uint32_t>(buf, pos);
  if (layout != static_cast<std::uint32_t>(ChannelLayout::kCosSinInterleaved)) {
    throw FormatError(name + ": unknown layout tag " + std::to_string(layout));
  }
  if (d.width == 0 || d.height == 0 || d.channels == 0 || d.width > 65536 ||
      d.height > 65536 || d.channels > 65536) {
    throw FormatError(name + ": bad shape");
  }
  const std::uint64_t count = static_cast<std::uint64_t>(d.width) * d.height * d.channels;
  if (buf.size() < kHeaderBytes + count * 4) throw FormatError(name + ": file truncated");
  d.data.resize(count);
  for (auto& v : d.data) {
    v = get<float>(buf, pos);
    if (!std::isfinite(v)) throw FormatError(name + ": non-finite value");
  }
  d.end = pos;
  return d;
}

}  // namespace

void write_fof(const FofGrid& grid, const std::filesystem::path& path) {
  write_bytes(encode(kFofMagic, grid.width(), grid.height(), grid.channels(), grid.data()),
              path);
}

FofGrid read_fof(const std::filesystem::path& path) {
  const std::string buf = read_bytes(path);
  Decoded d = decode(buf, kFofMagic, path.string());
  if (d.end != buf.size()) throw FormatError(path.string() + ": trailing bytes");
  return FofGrid(static_cast<int>(d.width), static_cast<int>(d.height),
                 static_cast<int>(d.channels), std::move(d.data));
}

void write_csej(const FofGrid& grid, const CsejTrailer& trailer,
                const std::filesystem::path& path) {
  if (static_cast<std::uint64_t>(trailer.joints) * trailer.channels_per_joint +
          trailer.aux_channels != static_cast<std::uint64_t>(grid.channels())) {
    throw FormatError(path.string() + ": trailer does not match channel count");
  }
  std::string buf =
      encode(kCsejMagic, grid.width(), grid.height(), grid.channels(), grid.data());
  buf.append(kCsejTrailerMagic.data(), 4);
  put(buf, trailer.joints);
  put(buf, trailer.channels_per_joint);
  put(buf, trailer.radius);
  put(buf, trailer.order_hash);
  put(buf, trailer.aux_channels);
  write_bytes(buf, path);
}

FofGrid read_csej(const std::filesystem::path& path, CsejTrailer& trailer) {
  const std::string buf = read_bytes(path);
  Decoded d = decode(buf, kCsejMagic, path.string());
  std::size_t pos = d.end;
  if (buf.size() != pos + kCsejTrailerBytes ||
      std::memcmp(buf.data() + pos, kCsejTrailerMagic.data(), 4) != 0) {
    throw FormatError(path.string() + ": missing or malformed CSE1 trailer");
  }
  pos += 4;
  trailer.joints = get<std::uint32_t>(buf, pos);
  trailer.channels_per_joint = get<std::uint32_t>(buf, pos);
  trailer.radius = get<double>(buf, pos);
  trailer.order_hash = get<std::uint64_t>(buf, pos);
  trailer.aux_channels = get<std::uint32_t>(buf, pos);
  if (static_cast<std::uint64_t>(trailer.joints) * trailer.channels_per_joint +
          trailer.aux_channels != d.channels) {
    throw FormatError(path.string() + ": trailer does not match channel count");
  }
  return FofGrid(static_cast<int>(d.width), static_cast<int>(d.height),
                 static_cast<int>(d.channels), std::move(d.data));
}

void write_occupancy(const OccupancyGrid& grid, const std::filesystem::path& path) {
  write_bytes(encode(kOccupancyMagic, grid.width(), grid.height(), grid.depth(), grid.data()),
              path);
}

OccupancyGrid read_occupancy(const std::filesystem::path& path) {
  const std::string buf = read_bytes(path);
  Decoded d = decode(buf, kOccupancyMagic, path.string());
  if (d.end != buf.size()) throw FormatError(path.string() + ": trailing bytes");
  OccupancyGrid grid(static_cast<int>(d.width), static_cast<int>(d.height),
                     static_cast<int>(d.channels));
  std::copy(d.data.begin(), d.data.end(), grid.data().begin());
  return grid;
}

std::array<char, 4> peek_magic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4)) throw FormatError(path.string() + ": file truncated");
  return magic;
}

std::filesystem::path frame_sidecar_path(const std::filesystem::path& file) {
  return std::filesystem::path(file.string() + ".frame.json");
}

void write_frame(const NormalizedFrame& frame, const std::filesystem::path& path) {
  const nlohmann::json j = {{"scale", frame.scale},
                            {"offset", {frame.offset.x, frame.offset.y, frame.offset.z}}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

NormalizedFrame read_frame(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    NormalizedFrame frame;
    frame.scale = j.at("scale").get<double>();
    const auto& off = j.at("offset");
    if (!off.is_array() || off.size() != 3) throw FormatError("offset must have 3 entries");
    frame.offset = {off[0].get<double>(), off[1].get<double>(), off[2].get<double>()};
    if (!(frame.scale > 0.0) || !std::isfinite(frame.scale)) {
      throw FormatError("frame scale must be positive");
    }
    return frame;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::optional<NormalizedFrame> read_frame_if_present(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  return read_frame(path);
}

}  // namespace fofkit
