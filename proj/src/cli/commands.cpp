#include "fofkit/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fofkit/config.hpp"
#include "fofkit/error.hpp"
#include "fofkit/fof.hpp"
#include "fofkit/grid_io.hpp"
#include "fofkit/joints.hpp"
#include "fofkit/marching_cubes.hpp"
#include "fofkit/mesh.hpp"
#include "fofkit/metrics.hpp"
#include "fofkit/parallel.hpp"
#include "fofkit/raycast.hpp"
#include "fofkit/recarve.hpp"
#include "fofkit/render.hpp"
#include "json.hpp"

namespace fofkit {

namespace fs = std::filesystem;

namespace {

// Values of flags that mirror PipelineConfig. Each is applied only when
// given, after the --config file.
struct ConfigFlags {
  std::string config_path;
  int threads = 0;
  int resolution = 0;
  int channels = 0;
  int depth = 0;
  double iso = 0.0;
  double margin = 0.0;
  double joint_radius = 0.0;
  int joint_channels = 0;
  int low_channels = 0;
  std::string refiner;
  std::uint64_t seed = 0;
  int samples = 0;

  CLI::Option* threads_opt = nullptr;
  CLI::Option* config_opt = nullptr;
  CLI::Option* resolution_opt = nullptr;
  CLI::Option* channels_opt = nullptr;
  CLI::Option* depth_opt = nullptr;
  CLI::Option* iso_opt = nullptr;
  CLI::Option* margin_opt = nullptr;
  CLI::Option* joint_radius_opt = nullptr;
  CLI::Option* joint_channels_opt = nullptr;
  CLI::Option* low_channels_opt = nullptr;
  CLI::Option* refiner_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* samples_opt = nullptr;

  void attach(CLI::App& app) {
    config_opt = app.add_option("--config", config_path, "key = value config file");
    threads_opt = app.add_option("--threads", threads, "worker threads (overrides FOFKIT_THREADS)");
    resolution_opt = app.add_option("--resolution", resolution, "image width and height");
    channels_opt = app.add_option("--channels", channels, "FOF channel count");
    depth_opt = app.add_option("--depth", depth, "depth samples per pixel");
    iso_opt = app.add_option("--iso", iso, "occupancy iso level");
    margin_opt = app.add_option("--margin", margin, "normalization margin");
    joint_radius_opt = app.add_option("--joint-radius", joint_radius, "joint sphere radius (normalized)");
    joint_channels_opt = app.add_option("--joint-channels", joint_channels, "channels per joint");
    low_channels_opt = app.add_option("--low-channels", low_channels, "low band channel count");
    refiner_opt = app.add_option("--refiner", refiner, "identity | band-zero | extern:<dir>");
    seed_opt = app.add_option("--seed", seed, "sampling seed");
    samples_opt = app.add_option("--samples", samples, "chamfer samples per mesh");
  }

  PipelineConfig resolve() const {
    PipelineConfig c;
    if (config_opt->count()) c = load_config(config_path);
    if (resolution_opt->count()) c.resolution = resolution;
    if (channels_opt->count()) c.channels = channels;
    if (depth_opt->count()) c.depth = depth;
    if (iso_opt->count()) c.iso = iso;
    if (margin_opt->count()) c.margin = margin;
    if (joint_radius_opt->count()) c.joint_radius = joint_radius;
    if (joint_channels_opt->count()) c.joint_channels = joint_channels;
    if (low_channels_opt->count()) c.low_channels = low_channels;
    if (refiner_opt->count()) c.refiner = refiner;
    if (seed_opt->count()) c.seed = seed;
    if (samples_opt->count()) c.chamfer_samples = samples;
    return c;
  }

  void apply_threads() const {
    apply_thread_env();
    if (threads_opt->count()) set_thread_count(threads);
  }
};

bool is_mesh_path(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".obj" || ext == ".OBJ" || ext == ".ply" || ext == ".PLY";
}

Mesh load_mesh_reporting(const fs::path& path, std::ostream& err) {
  std::vector<std::string> warnings;
  Mesh mesh = load_mesh(path, warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return mesh;
}

NormalizeResult normalize_reporting(const Mesh& mesh, double margin,
                                    std::ostream& err) {
  NormalizeResult n = normalize_mesh(mesh, margin);
  if (n.dropped_degenerate > 0) {
    err << "warning: dropped " << n.dropped_degenerate << " degenerate triangles\n";
  }
  return n;
}

int cmd_encode(const PipelineConfig& cfg, const fs::path& input,
               const fs::path& output, bool allow_open, std::ostream& out,
               std::ostream& err) {
  const Mesh raw = load_mesh_reporting(input, err);
  const NormalizeResult n = normalize_reporting(raw, cfg.margin, err);
  RaycastOptions options;
  options.require_watertight = !allow_open;
  const RaycastResult rc = raycast(n.mesh, cfg.resolution, cfg.resolution, options);
  const FofGrid fof = intervals_to_fof(rc.image, cfg.channels);
  write_fof(fof, output);
  write_frame(n.frame, frame_sidecar_path(output));
  out << "parity audit: " << rc.audit.hit_pixels << " hit pixels, "
      << rc.audit.crossings << " crossings, " << rc.audit.violations
      << " repaired\n";
  out << "wrote " << output.string() << " (" << fof.width() << "x" << fof.height()
      << "x" << fof.channels() << ")\n";
  return kExitOk;
}

int cmd_decode(const PipelineConfig& cfg, const fs::path& input,
               const fs::path& output, bool lanczos, std::ostream& out,
               std::ostream& err) {
  const FofGrid fof = read_fof(input);
  DecodeOptions options;
  options.lanczos_sigma = lanczos;
  Mesh mesh = marching_cubes(fof_to_occupancy(fof, cfg.depth, options), cfg.iso);
  if (mesh.empty()) err << "warning: decoded field has no surface; writing an empty mesh\n";
  if (const auto frame = read_frame_if_present(frame_sidecar_path(input))) {
    mesh = denormalize_mesh(mesh, *frame);
  }
  save_mesh(mesh, output);
  out << "wrote " << output.string() << " (" << mesh.vertices.size() << " vertices, "
      << mesh.triangles.size() << " triangles)\n";
  return kExitOk;
}

struct EmbedArgs {
  fs::path input;
  fs::path output;
  double radius = 0.0;
  double radius_cm = 0.0;
  fs::path frame;
  fs::path aux;
  CLI::Option* radius_opt = nullptr;
  CLI::Option* radius_cm_opt = nullptr;
  CLI::Option* frame_opt = nullptr;
  CLI::Option* aux_opt = nullptr;
};

int cmd_embed(const PipelineConfig& cfg, const EmbedArgs& a, std::ostream& out) {
  JointSet joints = load_joints(a.input);
  std::optional<NormalizedFrame> frame;
  if (a.frame_opt->count()) frame = read_frame(a.frame);

  double radius = cfg.joint_radius;
  if (a.radius_opt->count()) radius = a.radius;
  if (a.radius_cm_opt->count()) {
    if (!frame) throw FormatError("--radius-cm needs --frame <sidecar>");
    radius = normalized_radius(a.radius_cm / 100.0, *frame);
  }
  if (joints.frame == "metric") {
    if (!frame) throw FormatError("metric joints need --frame <sidecar>");
    joints = to_normalized(joints, *frame);
  }

  const CsejGrid csej =
      embed_joints(joints, radius, cfg.resolution, cfg.resolution, cfg.joint_channels);
  std::optional<Image> aux;
  if (a.aux_opt->count()) aux = read_png(a.aux);
  const ConditionGrid cond = concat_condition(csej, aux);

  CsejTrailer trailer;
  trailer.joints = static_cast<std::uint32_t>(csej.joints);
  trailer.channels_per_joint = static_cast<std::uint32_t>(csej.channels_per_joint);
  trailer.radius = csej.radius;
  trailer.order_hash = csej.order_hash;
  trailer.aux_channels = static_cast<std::uint32_t>(aux ? aux->channels : 0);
  write_csej(cond.grid, trailer, a.output);
  out << "wrote " << a.output.string() << " (" << cond.grid.channels()
      << " channels, radius " << radius << ")\n";
  return kExitOk;
}

struct RecarveArgs {
  fs::path input;
  fs::path output;
  std::string views;
  std::string weights;
  fs::path dump_dir;
  CLI::Option* views_opt = nullptr;
  CLI::Option* weights_opt = nullptr;
  CLI::Option* dump_opt = nullptr;
};

int cmd_recarve(PipelineConfig cfg, const RecarveArgs& a, std::ostream& out,
                std::ostream& err) {
  if (a.views_opt->count()) {
    cfg.angles = parse_angle_list(a.views);
    if (!a.weights_opt->count()) {
      cfg.weights.assign(cfg.angles.size() + 1, 1.0 / static_cast<double>(cfg.angles.size() + 1));
    }
  }
  if (a.weights_opt->count()) cfg.weights = parse_number_list(a.weights);
  RecarvePlan plan;
  plan.angles = cfg.angles;
  plan.weights = cfg.weights;
  plan.depth = cfg.depth;
  plan.iso = cfg.iso;
  plan.validate();

  const Mesh raw = load_mesh_reporting(a.input, err);
  const NormalizeResult n = normalize_reporting(raw, cfg.margin, err);
  const auto refiner = make_refiner(cfg.refiner, cfg.low_channels);
  const bool dump = a.dump_opt->count() > 0;
  RecarveResult result = recarve(n.mesh, plan, cfg.channels, *refiner, dump);
  if (dump) {
    fs::create_directories(a.dump_dir);
    for (std::size_t v = 0; v < result.view_fofs.size(); ++v) {
      const fs::path p = a.dump_dir / ("view_" + std::to_string(v) + ".fof");
      write_fof(result.view_fofs[v], p);
      write_frame(n.frame, frame_sidecar_path(p));
    }
  }
  const Mesh mesh = denormalize_mesh(result.mesh, n.frame);
  save_mesh(mesh, a.output);
  out << "recarved with " << plan.angles.size() + 1 << " views, refiner "
      << refiner->name() << "; wrote " << a.output.string() << " ("
      << mesh.triangles.size() << " triangles)\n";
  return kExitOk;
}

struct RenderArgs {
  fs::path input;
  fs::path output_dir;
  int views = 18;
  double interval = 20.0;
  std::string mode = "normal";
  int size = 512;
  CLI::Option* views_opt = nullptr;
  CLI::Option* interval_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
};

std::string view_file_name(int index, double yaw_deg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "view_%02d_yaw%03d.png", index,
                static_cast<int>(std::lround(yaw_deg)));
  return buf;
}

int cmd_render(const PipelineConfig& cfg, const RenderArgs& a, std::ostream& out,
               std::ostream& err) {
  RenderSpec spec;
  spec.view_count = a.views_opt->count() ? a.views : cfg.render_views;
  spec.yaw_interval_deg = a.interval_opt->count() ? a.interval : cfg.render_interval;
  const std::string mode = a.mode_opt->count() ? a.mode : cfg.render_mode;
  if (mode == "normal") {
    spec.mode = RenderMode::kNormal;
  } else if (mode == "shading") {
    spec.mode = RenderMode::kShading;
  } else {
    throw FormatError("unknown render mode '" + mode + "'");
  }
  spec.width = spec.height = a.size;
  spec.validate();

  const Mesh raw = load_mesh_reporting(a.input, err);
  const NormalizeResult n = normalize_reporting(raw, cfg.margin, err);
  const auto views = render_views(n.mesh, spec);
  fs::create_directories(a.output_dir);
  for (std::size_t v = 0; v < views.size(); ++v) {
    write_png(views[v].image, a.output_dir / view_file_name(static_cast<int>(v), views[v].yaw_deg));
  }
  out << "wrote " << views.size() << " views to " << a.output_dir.string() << '\n';
  return kExitOk;
}

int cmd_metrics(const PipelineConfig& cfg, const fs::path& pa, const fs::path& pb,
                std::ostream& out, std::ostream& err) {
  nlohmann::ordered_json report;
  if (is_mesh_path(pa) && is_mesh_path(pb)) {
    const Mesh ma = load_mesh_reporting(pa, err);
    const Mesh mb = load_mesh_reporting(pb, err);
    // Both meshes share the frame that normalizes the first one.
    const NormalizeResult na = normalize_mesh(ma, cfg.margin);
    Mesh nb = mb;
    for (Vec3& v : nb.vertices) v = na.frame.to_normalized(v);
    const auto samples = static_cast<std::size_t>(cfg.chamfer_samples);
    report["chamfer"] = chamfer(na.mesh, nb, samples, cfg.seed);
    const IntervalImage ia = raycast(na.mesh, cfg.resolution, cfg.resolution).image;
    const IntervalImage ib = raycast(nb, cfg.resolution, cfg.resolution).image;
    report["iou"] = interval_iou(ia, ib, cfg.depth);
  } else {
    const auto magic_a = peek_magic(pa);
    const auto magic_b = peek_magic(pb);
    if (magic_a != magic_b) throw FormatError("metrics inputs have different formats");
    if (magic_a == kOccupancyMagic) {
      const OccupancyGrid a = read_occupancy(pa);
      const OccupancyGrid b = read_occupancy(pb);
      report["iou"] = grid_iou(a, b, cfg.iso);
    } else if (magic_a == kFofMagic) {
      const FofGrid a = read_fof(pa);
      const FofGrid b = read_fof(pb);
      if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
        throw FormatError("metrics grid shape mismatch");
      }
      report["iou"] =
          grid_iou(fof_to_occupancy(a, cfg.depth), fof_to_occupancy(b, cfg.depth), cfg.iso);
      if (a.channels() > cfg.low_channels) {
        report["hf_mse"] =
            hf_mse(band_split(a, cfg.low_channels).high, band_split(b, cfg.low_channels).high);
      }
    } else {
      throw FormatError("metrics takes two meshes, two .fof files or two .occ files");
    }
  }
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_selftest(std::ostream& out) {
  bool ok = true;
  auto check = [&](const std::string& name, bool pass) {
    out << (pass ? "PASS " : "FAIL ") << name << '\n';
    ok = ok && pass;
  };

  constexpr int kRes = 64;
  const Mesh cube = make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  const RaycastResult rc = raycast(cube, kRes, kRes, {true});
  check("cube parity audit", rc.audit.violations == 0);

  const FofGrid fof = intervals_to_fof(rc.image, 32);
  const OccupancyGrid occ = fof_to_occupancy(fof, kRes);
  const double iou = grid_iou(occ, voxelize_intervals(rc.image, kRes));
  check("cube round-trip iou", iou >= 0.97);

  const Mesh mesh = marching_cubes(occ);
  check("cube mesh closed", !mesh.empty() && count_nonmanifold_edges(mesh) == 0);
  check("cube mesh volume", std::fabs(mesh_volume(mesh) - 1.0) < 0.05);

  const BandSplit split = band_split(fof, 16);
  check("band merge", band_merge(split) == fof);
  return ok ? kExitOk : kExitGeometry;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fourier occupancy field toolkit", "fofkit"};
  app.require_subcommand(1);
  app.fallthrough();
  ConfigFlags flags;
  flags.attach(app);

  app.add_subcommand("config", "print the effective config");

  auto* encode = app.add_subcommand("encode", "mesh -> .fof");
  fs::path enc_in, enc_out;
  bool allow_open = false;
  encode->add_option("mesh", enc_in, "input mesh (.obj, .ply)")->required();
  encode->add_option("-o,--output", enc_out, "output .fof")->required();
  encode->add_flag("--allow-open", allow_open, "skip the parity-violation check");

  auto* decode = app.add_subcommand("decode", ".fof -> mesh");
  fs::path dec_in, dec_out;
  bool lanczos = false;
  decode->add_option("fof", dec_in, "input .fof")->required();
  decode->add_option("-o,--output", dec_out, "output mesh (.obj, .ply)")->required();
  decode->add_flag("--lanczos", lanczos, "damp high harmonics before inversion");

  auto* embed = app.add_subcommand("embed-joints", "joints JSON -> .cse");
  EmbedArgs ea;
  embed->add_option("joints", ea.input, "joints JSON")->required();
  embed->add_option("-o,--output", ea.output, "output .cse")->required();
  ea.radius_opt = embed->add_option("--radius", ea.radius, "sphere radius, normalized units");
  ea.radius_cm_opt =
      embed->add_option("--radius-cm", ea.radius_cm, "sphere radius in centimeters");
  ea.frame_opt = embed->add_option("--frame", ea.frame, "frame sidecar JSON of the mesh");
  ea.aux_opt = embed->add_option("--aux", ea.aux, "auxiliary PNG appended channel-wise");
  ea.radius_opt->excludes(ea.radius_cm_opt);
  int cpj = 0;
  auto* cpj_opt = embed->add_option("--channels-per-joint", cpj, "channels per joint");

  auto* recarve_cmd = app.add_subcommand("recarve", "multi-view recarving");
  RecarveArgs ra;
  recarve_cmd->add_option("mesh", ra.input, "input mesh")->required();
  recarve_cmd->add_option("-o,--output", ra.output, "output mesh")->required();
  ra.views_opt = recarve_cmd->add_option("--views", ra.views, "auxiliary yaws, e.g. \"pi/2\"");
  ra.weights_opt =
      recarve_cmd->add_option("--weights", ra.weights, "weights, canonical first, e.g. 0.5,0.5");
  ra.dump_opt = recarve_cmd->add_option("--dump-views", ra.dump_dir, "write per-view .fof files");

  auto* render = app.add_subcommand("render", "turntable PNG views");
  RenderArgs rr;
  render->add_option("mesh", rr.input, "input mesh")->required();
  render->add_option("-o,--output", rr.output_dir, "output directory")->required();
  rr.views_opt = render->add_option("--views", rr.views, "view count");
  rr.interval_opt = render->add_option("--interval", rr.interval, "yaw step in degrees");
  rr.mode_opt = render->add_option("--mode", rr.mode, "normal | shading");
  render->add_option("--size", rr.size, "image width and height");

  auto* metrics = app.add_subcommand("metrics", "compare two meshes or grids");
  fs::path ma, mb;
  metrics->add_option("a", ma, "first mesh or grid")->required();
  metrics->add_option("b", mb, "second mesh or grid")->required();

  auto* selftest = app.add_subcommand("selftest", "quick pipeline check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  }

  try {
    flags.apply_threads();
    PipelineConfig cfg = flags.resolve();
    if (cpj_opt->count()) cfg.joint_channels = cpj;
    cfg.validate();

    if (app.got_subcommand("config")) {
      out << serialize_config(cfg);
      return kExitOk;
    }
    if (encode->parsed()) return cmd_encode(cfg, enc_in, enc_out, allow_open, out, err);
    if (decode->parsed()) return cmd_decode(cfg, dec_in, dec_out, lanczos, out, err);
    if (embed->parsed()) return cmd_embed(cfg, ea, out);
    if (recarve_cmd->parsed()) return cmd_recarve(cfg, ra, out, err);
    if (render->parsed()) return cmd_render(cfg, rr, out, err);
    if (metrics->parsed()) return cmd_metrics(cfg, ma, mb, out, err);
    if (selftest->parsed()) return cmd_selftest(out);
    return kExitFormat;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << '\n';
    return kExitGeometry;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace fofkit
