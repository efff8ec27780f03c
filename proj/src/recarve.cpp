#include "fofkit/recarve.hpp"

#include <omp.h>

#include <cmath>
#include <thread>

#include "fofkit/error.hpp"
#include "fofkit/grid_io.hpp"
#include "fofkit/marching_cubes.hpp"
#include "fofkit/raycast.hpp"

namespace fofkit {

FofGrid BandZeroRefiner::refine(const FofGrid& fof, int) const {
  FofGrid out = fof;
  if (low_channels_ >= fof.channels()) return out;
  const int first = std::max(low_channels_, 0);
  for (int j = 0; j < fof.height(); ++j) {
    for (int i = 0; i < fof.width(); ++i) {
      auto px = out.pixel(i, j);
      std::fill(px.begin() + first, px.end(), 0.0f);
    }
  }
  return out;
}

ExternRefiner::ExternRefiner(std::filesystem::path dir, std::chrono::milliseconds timeout,
                             std::chrono::milliseconds poll)
    : dir_(std::move(dir)), timeout_(timeout), poll_(poll) {}

std::filesystem::path ExternRefiner::request_path(const std::filesystem::path& dir, int view) {
  return dir / ("view_" + std::to_string(view) + ".fof");
}

std::filesystem::path ExternRefiner::response_path(const std::filesystem::path& dir,
                                                   int view) {
  return dir / ("view_" + std::to_string(view) + ".refined.fof");
}

FofGrid ExternRefiner::refine(const FofGrid& fof, int view) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
  const auto response = response_path(dir_, view);
  std::filesystem::remove(response, ec);
  write_fof(fof, request_path(dir_, view));

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::string last_error;
  for (;;) {
    if (std::filesystem::exists(response)) {
      try {
        FofGrid refined = read_fof(response);
        if (refined.width() != fof.width() || refined.height() != fof.height() ||
            refined.channels() != fof.channels()) {
          throw FormatError(response.string() + ": refined grid shape differs from request");
        }
        return refined;
      } catch (const FormatError& e) {
        // A partially written file reads as truncated; retry until the deadline.
        last_error = e.what();
        if (std::string(e.what()).find("shape differs") != std::string::npos) throw;
      }
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      throw IoError("timed out waiting for " + response.string() +
                    (last_error.empty() ? "" : " (" + last_error + ")"));
    }
    std::this_thread::sleep_for(poll_);
  }
}

std::unique_ptr<Refiner> make_refiner(std::string_view spec, int low_channels) {
  if (spec == "identity") return std::make_unique<IdentityRefiner>();
  if (spec == "band-zero") return std::make_unique<BandZeroRefiner>(low_channels);
  constexpr std::string_view prefix = "extern:";
  if (spec.substr(0, prefix.size()) == prefix && spec.size() > prefix.size()) {
    return std::make_unique<ExternRefiner>(std::filesystem::path(spec.substr(prefix.size())));
  }
  throw FormatError("unknown refiner '" + std::string(spec) + "'");
}

void RecarvePlan::validate() const {
  if (weights.size() != angles.size() + 1) {
    throw FormatError("plan needs one weight per view (" + std::to_string(angles.size() + 1) +
                      "), got " + std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw FormatError("plan weights must be non-negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw FormatError("plan weights must sum to 1");
  for (double a : angles) {
    if (!std::isfinite(a)) throw FormatError("plan angles must be finite");
  }
  if (depth < 2) throw FormatError("plan depth must be >= 2");
  if (!(iso > 0.0 && iso < 1.0)) throw FormatError("plan iso must lie in (0, 1)");
}

RecarvePlan make_plan(std::vector<double> angles, int depth, double iso) {
  RecarvePlan plan;
  plan.angles = std::move(angles);
  plan.weights.assign(plan.angles.size() + 1, 1.0 / static_cast<double>(plan.angles.size() + 1));
  plan.depth = depth;
  plan.iso = iso;
  return plan;
}

namespace {

FofGrid encode_view(const Mesh& mesh, double theta, int channels, int depth) {
  const Mesh rotated = rotate_yaw(mesh, theta);
  RaycastOptions options;
  options.require_watertight = mesh.watertight;
  const RaycastResult cast = raycast(rotated, depth, depth, options);
  return intervals_to_fof(cast.image, channels);
}

}  // namespace

OccupancyGrid view_occupancy(const Mesh& mesh, double theta, int channels, int depth,
                             const Refiner& refiner, int view) {
  const FofGrid fof = refiner.refine(encode_view(mesh, theta, channels, depth), view);
  return fof_to_occupancy(fof, depth);
}

OccupancyGrid resample_to_canonical(const OccupancyGrid& grid, double theta,
                                    const ResampleOptions& options) {
  const int w = grid.width();
  const int h = grid.height();
  const int r = grid.depth();
  if (w != r && !options.allow_anisotropic) {
    throw FormatError("yaw resampling needs W == R (got " + std::to_string(w) + " and " +
                      std::to_string(r) + ")");
  }
  if (theta == 0.0) return grid;

  OccupancyGrid out(w, h, r);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  auto sample = [&](int i, int j, int k) -> double {
    return grid.at(std::clamp(i, 0, w - 1), j, std::clamp(k, 0, r - 1));
  };
#pragma omp parallel for schedule(static)
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double x = pixel_x(i, w);
      auto column = out.column(i, j);
      for (int k = 0; k < r; ++k) {
        const double z = depth_sample(k, r);
        const double xs = x * c + z * s;
        const double zs = -x * s + z * c;
        if (xs < -1.0 || xs > 1.0 || zs < -1.0 || zs > 1.0) continue;
        // Continuous lattice coordinates; cell centers sit on integers.
        const double u = (xs + 1.0) * 0.5 * w - 0.5;
        const double v = (zs + 1.0) * 0.5 * r - 0.5;
        const double u0 = std::floor(u);
        const double v0 = std::floor(v);
        const double fu = u - u0;
        const double fv = v - v0;
        const int iu = static_cast<int>(u0);
        const int iv = static_cast<int>(v0);
        // y is unchanged by a yaw rotation, so only x and z interpolate.
        const double value = (1.0 - fu) * ((1.0 - fv) * sample(iu, j, iv) + fv * sample(iu, j, iv + 1)) +
                             fu * ((1.0 - fv) * sample(iu + 1, j, iv) + fv * sample(iu + 1, j, iv + 1));
        column[k] = static_cast<float>(value);
      }
    }
  }
  return out;
}

OccupancyGrid blend_fields(std::span<const OccupancyGrid> fields,
                           std::span<const double> weights) {
  if (fields.empty()) throw FormatError("blend needs at least one field");
  if (fields.size() != weights.size()) {
    throw FormatError("blend needs one weight per field");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw FormatError("blend weights must be non-negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw FormatError("blend weights must sum to 1");
  const OccupancyGrid& first = fields.front();
  for (const OccupancyGrid& f : fields) {
    if (f.width() != first.width() || f.height() != first.height() ||
        f.depth() != first.depth()) {
      throw FormatError("blend fields differ in shape");
    }
  }

  OccupancyGrid out(first.width(), first.height(), first.depth());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  auto dst = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    double acc = 0.0;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      acc += weights[f] * static_cast<double>(fields[f].data()[static_cast<std::size_t>(v)]);
    }
    dst[static_cast<std::size_t>(v)] = static_cast<float>(acc);
  }
  return out;
}

RecarveResult recarve(const Mesh& mesh, const RecarvePlan& plan, int channels,
                      const Refiner& refiner, bool keep_view_fofs) {
  plan.validate();
  RecarveResult result;
  std::vector<OccupancyGrid> fields;
  fields.reserve(plan.angles.size() + 1);

  FofGrid canonical = encode_view(mesh, 0.0, channels, plan.depth);
  fields.push_back(fof_to_occupancy(canonical, plan.depth));
  if (keep_view_fofs) result.view_fofs.push_back(std::move(canonical));

  for (std::size_t v = 0; v < plan.angles.size(); ++v) {
    const double theta = plan.angles[v];
    FofGrid fof = refiner.refine(encode_view(mesh, theta, channels, plan.depth),
                                 static_cast<int>(v + 1));
    OccupancyGrid rotated = fof_to_occupancy(fof, plan.depth);
    if (keep_view_fofs) result.view_fofs.push_back(std::move(fof));
    fields.push_back(resample_to_canonical(rotated, theta));
  }

  if (fields.size() == 1 && plan.weights.front() == 1.0) {
    result.occupancy = std::move(fields.front());
  } else {
    result.occupancy = blend_fields(fields, plan.weights);
  }
  fields.clear();
  result.mesh = marching_cubes(result.occupancy, plan.iso);
  return result;
}

}  // namespace fofkit
