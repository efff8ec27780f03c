#include "fofkit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fofkit/error.hpp"

namespace fofkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string out(buf, ptr);
  // Keep a decimal marker so the value reads back as a float.
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

double parse_double(std::string_view s, std::string_view key) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw FormatError("config: bad number for '" + std::string(key) + "': " + std::string(s));
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view key) {
  s = trim(s);
  Int v = 0;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("config: bad integer for '" + std::string(key) + "': " + std::string(s));
  }
  return v;
}

std::string parse_string(std::string_view s, std::string_view key) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
    throw FormatError("config: expected quoted string for '" + std::string(key) + "'");
  }
  std::string out;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    if (s[k] == '\\' && k + 2 < s.size()) {
      ++k;
    } else if (s[k] == '"') {
      throw FormatError("config: unescaped quote in '" + std::string(key) + "'");
    }
    out += s[k];
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::vector<double> parse_array(std::string_view s, std::string_view key) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw FormatError("config: expected [..] for '" + std::string(key) + "'");
  }
  return parse_number_list(s.substr(1, s.size() - 2));
}

std::string format_array(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ", ";
    out += format_double(values[k]);
  }
  return out + "]";
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"' && (k == 0 || line[k - 1] != '\\')) in_string = !in_string;
    if (line[k] == '#' && !in_string) return line.substr(0, k);
  }
  return line;
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw FormatError("config: " + msg); };
  if (resolution < 1) fail("resolution must be positive");
  if (channels < 1) fail("channels must be >= 1");
  if (depth < 2) fail("depth must be >= 2");
  if (!(iso > 0.0 && iso < 1.0)) fail("iso must lie in (0, 1)");
  if (!(margin >= 0.0 && margin < 1.0)) fail("margin must lie in [0, 1)");
  if (!(joint_radius > 0.0)) fail("joint_radius must be positive");
  if (joint_channels < 1) fail("joint_channels must be >= 1");
  if (low_channels < 1) fail("low_channels must be >= 1");
  if (weights.size() != angles.size() + 1) fail("weights needs one entry per view");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail("weights must be non-negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) fail("weights must sum to 1");
  if (chamfer_samples < 1) fail("chamfer_samples must be positive");
  if (render_views < 1) fail("render_views must be positive");
  if (std::fabs(render_views * render_interval - 360.0) > 1e-9) {
    fail("render_views * render_interval must equal 360");
  }
  if (render_mode != "normal" && render_mode != "shading") {
    fail("render_mode must be \"normal\" or \"shading\"");
  }
}

std::string serialize_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "resolution = " << c.resolution << '\n'
      << "channels = " << c.channels << '\n'
      << "depth = " << c.depth << '\n'
      << "iso = " << format_double(c.iso) << '\n'
      << "margin = " << format_double(c.margin) << '\n'
      << "joint_radius = " << format_double(c.joint_radius) << '\n'
      << "joint_channels = " << c.joint_channels << '\n'
      << "low_channels = " << c.low_channels << '\n'
      << "angles = " << format_array(c.angles) << '\n'
      << "weights = " << format_array(c.weights) << '\n'
      << "refiner = " << quote(c.refiner) << '\n'
      << "seed = " << c.seed << '\n'
      << "chamfer_samples = " << c.chamfer_samples << '\n'
      << "render_views = " << c.render_views << '\n'
      << "render_interval = " << format_double(c.render_interval) << '\n'
      << "render_mode = " << quote(c.render_mode) << '\n';
  return out.str();
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig c;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"resolution", [&](auto v, auto k) { c.resolution = parse_int<int>(v, k); }},
      {"channels", [&](auto v, auto k) { c.channels = parse_int<int>(v, k); }},
      {"depth", [&](auto v, auto k) { c.depth = parse_int<int>(v, k); }},
      {"iso", [&](auto v, auto k) { c.iso = parse_double(v, k); }},
      {"margin", [&](auto v, auto k) { c.margin = parse_double(v, k); }},
      {"joint_radius", [&](auto v, auto k) { c.joint_radius = parse_double(v, k); }},
      {"joint_channels", [&](auto v, auto k) { c.joint_channels = parse_int<int>(v, k); }},
      {"low_channels", [&](auto v, auto k) { c.low_channels = parse_int<int>(v, k); }},
      {"angles", [&](auto v, auto k) { c.angles = parse_array(v, k); }},
      {"weights", [&](auto v, auto k) { c.weights = parse_array(v, k); }},
      {"refiner", [&](auto v, auto k) { c.refiner = parse_string(v, k); }},
      {"seed", [&](auto v, auto k) { c.seed = parse_int<std::uint64_t>(v, k); }},
      {"chamfer_samples", [&](auto v, auto k) { c.chamfer_samples = parse_int<int>(v, k); }},
      {"render_views", [&](auto v, auto k) { c.render_views = parse_int<int>(v, k); }},
      {"render_interval", [&](auto v, auto k) { c.render_interval = parse_double(v, k); }},
      {"render_mode", [&](auto v, auto k) { c.render_mode = parse_string(v, k); }},
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("config: line " + std::to_string(line_no) + " is not key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const auto it = setters.find(key);
    if (it == setters.end()) throw FormatError("config: unknown key '" + std::string(key) + "'");
    it->second(line.substr(eq + 1), key);
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_double(text.substr(pos, end - pos), "list"));
    pos = end + 1;
  }
  return out;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    // Forms: <num> | [<num>][*]pi[/<num>]
    const auto pi_at = item.find("pi");
    if (pi_at == std::string_view::npos) {
      out.push_back(parse_double(item, "angle"));
      continue;
    }
    std::string_view coef = trim(item.substr(0, pi_at));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double value = std::numbers::pi;
    if (coef == "-") {
      value = -value;
    } else if (!coef.empty()) {
      value *= parse_double(coef, "angle");
    }
    std::string_view rest = trim(item.substr(pi_at + 2));
    if (!rest.empty()) {
      if (rest.front() != '/') throw FormatError("bad angle '" + std::string(item) + "'");
      const double denom = parse_double(rest.substr(1), "angle");
      if (denom == 0.0) throw FormatError("bad angle '" + std::string(item) + "'");
      value /= denom;
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace fofkit
