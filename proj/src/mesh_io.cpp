#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fofkit/error.hpp"
#include "fofkit/mesh.hpp"

namespace fofkit {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

// Appends a polygon as a triangle fan, dropping triangles with repeated
// indices.
struct FaceSink {
  Mesh& mesh;
  std::vector<std::string>& warnings;
  std::size_t fanned = 0;
  std::size_t degenerate = 0;

  void add(const std::vector<std::int64_t>& poly, std::size_t vertex_count) {
    if (poly.size() < 3) {
      ++degenerate;
      return;
    }
    for (std::int64_t idx : poly) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= vertex_count) {
        throw FormatError("face index " + std::to_string(idx) +
                          " out of range");
      }
    }
    if (poly.size() > 3) ++fanned;
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
      const Triangle t{static_cast<std::uint32_t>(poly[0]),
                       static_cast<std::uint32_t>(poly[k]),
                       static_cast<std::uint32_t>(poly[k + 1])};
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
        ++degenerate;
        continue;
      }
      mesh.triangles.push_back(t);
    }
  }

  void finish() {
    if (fanned > 0) {
      warnings.push_back(std::to_string(fanned) +
                         " non-triangular face(s) fan-triangulated");
    }
    if (degenerate > 0) {
      warnings.push_back(std::to_string(degenerate) +
                         " degenerate face(s) dropped");
    }
  }
};

Mesh parse_obj(const std::string& text, std::vector<std::string>& warnings) {
  Mesh mesh;
  FaceSink sink{mesh, warnings};
  std::istringstream in(text);
  std::string line;
  std::vector<std::int64_t> poly;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z)) {
        throw FormatError("malformed vertex on line " + std::to_string(line_no));
      }
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      poly.clear();
      std::string token;
      while (ls >> token) {
        std::int64_t idx = 0;
        const auto slash = token.find('/');
        const std::string head = token.substr(0, slash);
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || idx == 0) {
          throw FormatError("malformed face on line " + std::to_string(line_no));
        }
        idx = idx < 0 ? static_cast<std::int64_t>(mesh.vertices.size()) + idx
                      : idx - 1;
        poly.push_back(idx);
      }
      sink.add(poly, mesh.vertices.size());
    }
    // Normals, texture coordinates, groups and materials are ignored.
  }
  sink.finish();
  return mesh;
}

enum class PlyFormat { kAscii, kBinaryLittle, kBinaryBig };

enum class PlyType { kI8, kU8, kI16, kU16, kI32, kU32, kF32, kF64 };

PlyType parse_ply_type(const std::string& name) {
  if (name == "char" || name == "int8") return PlyType::kI8;
  if (name == "uchar" || name == "uint8") return PlyType::kU8;
  if (name == "short" || name == "int16") return PlyType::kI16;
  if (name == "ushort" || name == "uint16") return PlyType::kU16;
  if (name == "int" || name == "int32") return PlyType::kI32;
  if (name == "uint" || name == "uint32") return PlyType::kU32;
  if (name == "float" || name == "float32") return PlyType::kF32;
  if (name == "double" || name == "float64") return PlyType::kF64;
  throw FormatError("unsupported PLY property type '" + name + "'");
}

std::size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::kI8:
    case PlyType::kU8:
      return 1;
    case PlyType::kI16:
    case PlyType::kU16:
      return 2;
    case PlyType::kI32:
    case PlyType::kU32:
    case PlyType::kF32:
      return 4;
    case PlyType::kF64:
      return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::kF32;
  bool is_list = false;
  PlyType count_type = PlyType::kU8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

class PlyReader {
 public:
  PlyReader(const std::string& data, std::size_t pos, PlyFormat format)
      : data_(data), pos_(pos), format_(format) {}

  double read(PlyType type) {
    if (format_ == PlyFormat::kAscii) return read_ascii();
    const std::size_t n = ply_type_size(type);
    if (pos_ + n > data_.size()) throw FormatError("PLY body truncated");
    unsigned char bytes[8];
    std::memcpy(bytes, data_.data() + pos_, n);
    pos_ += n;
    const bool swap = (format_ == PlyFormat::kBinaryBig) ==
                      (std::endian::native == std::endian::little);
    if (swap) std::reverse(bytes, bytes + n);
    switch (type) {
      case PlyType::kI8: return static_cast<double>(static_cast<std::int8_t>(bytes[0]));
      case PlyType::kU8: return static_cast<double>(bytes[0]);
      case PlyType::kI16: return static_cast<double>(load<std::int16_t>(bytes));
      case PlyType::kU16: return static_cast<double>(load<std::uint16_t>(bytes));
      case PlyType::kI32: return static_cast<double>(load<std::int32_t>(bytes));
      case PlyType::kU32: return static_cast<double>(load<std::uint32_t>(bytes));
      case PlyType::kF32: return static_cast<double>(load<float>(bytes));
      case PlyType::kF64: return load<double>(bytes);
    }
    return 0.0;
  }

 private:
  template <typename T>
  static T load(const unsigned char* bytes) {
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
  }

  double read_ascii() {
    while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (pos_ >= data_.size()) throw FormatError("PLY body truncated");
    const char* begin = data_.data() + pos_;
    const char* end = data_.data() + data_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) throw FormatError("malformed PLY value");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  const std::string& data_;
  std::size_t pos_;
  PlyFormat format_;
};

Mesh parse_ply(const std::string& data, std::vector<std::string>& warnings) {
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    if (pos >= data.size()) throw FormatError("PLY header truncated");
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    std::string line = data.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != "ply") throw FormatError("missing PLY magic");
  PlyFormat format = PlyFormat::kAscii;
  std::vector<PlyElement> elements;
  for (;;) {
    const std::string line = next_line();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "end_header") break;
    if (kw == "format") {
      std::string f;
      ls >> f;
      if (f == "ascii") format = PlyFormat::kAscii;
      else if (f == "binary_little_endian") format = PlyFormat::kBinaryLittle;
      else if (f == "binary_big_endian") format = PlyFormat::kBinaryBig;
      else throw FormatError("unsupported PLY format '" + f + "'");
    } else if (kw == "element") {
      PlyElement e;
      if (!(ls >> e.name >> e.count)) throw FormatError("malformed PLY element");
      elements.push_back(std::move(e));
    } else if (kw == "property") {
      if (elements.empty()) throw FormatError("PLY property before element");
      PlyProperty p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string count_type;
        std::string item_type;
        ls >> count_type >> item_type;
        p.is_list = true;
        p.count_type = parse_ply_type(count_type);
        p.type = parse_ply_type(item_type);
      } else {
        p.type = parse_ply_type(type);
      }
      if (!(ls >> p.name)) throw FormatError("malformed PLY property");
      elements.back().properties.push_back(p);
    }
    // comment / obj_info lines are skipped.
  }

  Mesh mesh;
  FaceSink sink{mesh, warnings};
  PlyReader reader(data, pos, format);
  std::vector<std::int64_t> poly;
  for (const PlyElement& e : elements) {
    const bool is_vertex = e.name == "vertex";
    const bool is_face = e.name == "face";
    int ix = -1, iy = -1, iz = -1, iface = -1;
    for (std::size_t k = 0; k < e.properties.size(); ++k) {
      const std::string& n = e.properties[k].name;
      if (n == "x") ix = static_cast<int>(k);
      if (n == "y") iy = static_cast<int>(k);
      if (n == "z") iz = static_cast<int>(k);
      if (e.properties[k].is_list &&
          (n == "vertex_indices" || n == "vertex_index")) {
        iface = static_cast<int>(k);
      }
    }
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0)) {
      throw FormatError("PLY vertex element lacks x/y/z");
    }
    if (is_face && iface < 0) {
      throw FormatError("PLY face element lacks vertex_indices");
    }
    for (std::size_t item = 0; item < e.count; ++item) {
      Vec3 v;
      poly.clear();
      for (std::size_t k = 0; k < e.properties.size(); ++k) {
        const PlyProperty& p = e.properties[k];
        if (p.is_list) {
          const double n = reader.read(p.count_type);
          if (n < 0 || n > 1e6) throw FormatError("bad PLY list length");
          for (std::size_t m = 0; m < static_cast<std::size_t>(n); ++m) {
            const double value = reader.read(p.type);
            if (static_cast<int>(k) == iface) poly.push_back(static_cast<std::int64_t>(value));
          }
          continue;
        }
        const double value = reader.read(p.type);
        if (static_cast<int>(k) == ix) v.x = value;
        if (static_cast<int>(k) == iy) v.y = value;
        if (static_cast<int>(k) == iz) v.z = value;
      }
      if (is_vertex) mesh.vertices.push_back(v);
      if (is_face) sink.add(poly, mesh.vertices.size());
    }
  }
  sink.finish();
  return mesh;
}

void write_obj(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  for (const Vec3& v : mesh.vertices) {
    out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  }
  for (const Triangle& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

void write_ply(const Mesh& mesh, std::ostream& out, bool ascii) {
  out << "ply\nformat " << (ascii ? "ascii" : "binary_little_endian")
      << " 1.0\nelement vertex " << mesh.vertices.size()
      << "\nproperty double x\nproperty double y\nproperty double z\n"
      << "element face " << mesh.triangles.size()
      << "\nproperty list uchar uint vertex_indices\nend_header\n";
  if (ascii) {
    out.precision(17);
    for (const Vec3& v : mesh.vertices) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const Triangle& t : mesh.triangles) {
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    return;
  }
  for (const Vec3& v : mesh.vertices) {
    put_le(out, v.x);
    put_le(out, v.y);
    put_le(out, v.z);
  }
  for (const Triangle& t : mesh.triangles) {
    put_le<std::uint8_t>(out, 3);
    for (std::uint32_t idx : t) put_le(out, idx);
  }
}

}  // namespace

Mesh load_mesh(const std::filesystem::path& path,
               std::vector<std::string>& warnings) {
  const std::string ext = lower_extension(path);
  if (ext != ".obj" && ext != ".ply") {
    throw FormatError("unsupported mesh extension '" + ext + "'");
  }
  const std::string data = read_all(path);
  if (data.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw FormatError("no geometry in " + path.string());
  }
  Mesh mesh = ext == ".obj" ? parse_obj(data, warnings) : parse_ply(data, warnings);
  if (mesh.vertices.empty() || mesh.triangles.empty()) {
    throw FormatError("no geometry in " + path.string());
  }
  mesh.watertight = count_nonmanifold_edges(mesh) == 0;
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::vector<std::string> warnings;
  Mesh mesh = load_mesh(path, warnings);
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << path.string() << ": " << w << '\n';
  }
  return mesh;
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path, bool ascii) {
  const std::string ext = lower_extension(path);
  if (ext != ".obj" && ext != ".ply") {
    throw FormatError("unsupported mesh extension '" + ext + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (ext == ".obj") {
    write_obj(mesh, out);
  } else {
    write_ply(mesh, out, ascii);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fofkit
