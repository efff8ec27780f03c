// Acceptance checks. Usage: fofkit_acceptance [criterion ...]
// Prints one PASS/FAIL line per criterion; exits non-zero if any fails.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "fofkit/commands.hpp"
#include "fofkit/fof.hpp"
#include "fofkit/joints.hpp"
#include "fofkit/marching_cubes.hpp"
#include "fofkit/metrics.hpp"
#include "fofkit/parallel.hpp"
#include "fofkit/raycast.hpp"
#include "fofkit/recarve.hpp"
#include "fofkit/reference.hpp"
#include "fofkit/render.hpp"

namespace {

using namespace fofkit;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Outcome coefficient_oracle() {
  const auto t0 = Clock::now();
  constexpr int kSets = 1000;
  constexpr int kChannels = 32;
  std::mt19937_64 rng(0xC0EFF);
  std::vector<std::vector<std::pair<double, double>>> sets;
  std::vector<std::vector<Interval>> pixels;
  for (int s = 0; s < kSets; ++s) {
    sets.push_back(oracle::random_intervals(rng, 5));
    std::vector<Interval> px;
    for (const auto& [a, b] : sets.back()) px.push_back({a, b});
    pixels.push_back(px);
  }
  const FofGrid fof = intervals_to_fof(IntervalImage(kSets, 1, pixels), kChannels);
  double worst = 0.0;
  for (int s = 0; s < kSets; ++s) {
    const auto quad = oracle::quadrature_coefficients(sets[s], kChannels);
    for (int c = 0; c < kChannels; ++c) {
      worst = std::max(worst, std::fabs(static_cast<double>(fof.at(s, 0, c)) - quad[c]));
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-6 && elapsed < 10.0,
          fmt("max |closed form - quadrature| = %.3g (<= 1e-6), %.2f s (< 10 s)", worst, elapsed)};
}

Outcome round_trip() {
  const auto t0 = Clock::now();
  constexpr int kRes = 512;
  constexpr double kRadius = 0.3;
  const OccupancyGrid occ =
      fof_to_occupancy(sphere_fof({0, 0, 0}, kRadius, kRes, kRes, 32), kRes);
  const Mesh mesh = marching_cubes(occ);

  // Analytic voxelization at the same cell centers, evaluated on the fly.
  std::size_t both = 0, either = 0;
#pragma omp parallel for reduction(+ : both, either) schedule(static)
  for (int j = 0; j < kRes; ++j) {
    for (int i = 0; i < kRes; ++i) {
      const double x = pixel_x(i, kRes), y = pixel_y(j, kRes);
      for (int k = 0; k < kRes; ++k) {
        const double z = depth_sample(k, kRes);
        const bool truth = x * x + y * y + z * z <= kRadius * kRadius;
        const bool got = occ.at(i, j, k) >= 0.5f;
        both += truth && got;
        either += truth || got;
      }
    }
  }
  const double iou = static_cast<double>(both) / static_cast<double>(either);
  const double cd = chamfer(mesh, make_icosphere({0, 0, 0}, kRadius, 6), 100000);
  const double elapsed = seconds_since(t0);
  const double bound = 2.0 * (2.0 / 512.0);
  return {iou >= 0.97 && cd <= bound && elapsed < 30.0,
          fmt("IoU %.5f (>= 0.97), chamfer %.3g (<= %.3g), %.2f s (< 30 s)", iou, cd, bound,
              elapsed)};
}

Outcome parity_audit() {
  struct Case {
    const char* name;
    Mesh mesh;
  };
  const std::vector<Case> cases = {
      {"unit cube", make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5})},
      {"normalized cube", normalize_mesh(make_box({0, 0, 0}, {1, 1, 1})).mesh},
      {"icosphere L3", make_icosphere({0, 0, 0}, 0.5, 3)},
      {"icosphere L5", make_icosphere({0, 0, 0}, 0.9, 5)},
  };
  bool pass = true;
  std::ostringstream detail;
  for (const Case& c : cases) {
    const RaycastResult r = raycast(c.mesh, 512, 512);
    pass = pass && r.audit.violations == 0 && r.audit.hit_pixels > 0;
    detail << c.name << ": " << r.audit.violations << "/" << r.audit.hit_pixels << "  ";
  }
  return {pass, "violations/hit pixels over 512x512 rays: " + detail.str()};
}

Outcome csej_contract() {
  constexpr int kRes = 512;
  constexpr double kRadius = 0.1;
  JointSet js;
  std::vector<Vec3> centers;
  for (int k = 0; k < kSmplJointCount; ++k) {
    // On pixel centers, spread over a grid, fully inside the depth domain.
    const int i = 40 + (k % 6) * 80, j = 50 + (k / 6) * 110;
    const Vec3 p{pixel_x(i, kRes), pixel_y(j, kRes), 0.5 * std::sin(k)};
    js.joints.push_back({std::string(kSmplJointNames[k]), p});
    centers.push_back(p);
  }
  const CsejGrid c = embed_joints(js, kRadius, kRes, kRes, 8);
  bool zeros = true;
  std::size_t outside = 0;
  for (int j = 0; j < kRes; ++j) {
    for (int i = 0; i < kRes; ++i) {
      const double x = pixel_x(i, kRes), y = pixel_y(j, kRes);
      bool near = false;
      for (const Vec3& p : centers) near = near || std::hypot(x - p.x, y - p.y) <= kRadius;
      if (near) continue;
      ++outside;
      for (float v : c.grid.pixel(i, j)) zeros = zeros && v == 0.0f;
    }
  }
  double worst = 0.0;
  for (int k = 0; k < kSmplJointCount; ++k) {
    const int i = 40 + (k % 6) * 80, j = 50 + (k / 6) * 110;
    worst = std::max(worst, std::fabs(c.grid.at(i, j, 8 * k) - 2.0 * kRadius));
  }
  const bool pass = c.grid.channels() == 192 && zeros && worst <= 1e-6;
  return {pass, fmt("channels %d (== 192), %zu outside pixels all zero: %s, max |a0 - 2r| = %.3g",
                    c.grid.channels(), outside, zeros ? "yes" : "no", worst)};
}

Outcome recarving_identity() {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  OccupancyGrid f(64, 64, 64);
  for (float& v : f.data()) v = u(rng);
  const std::vector<OccupancyGrid> pair{f, f};
  const std::vector<double> half{0.5, 0.5};
  const bool bit_equal = blend_fields(pair, half) == f;

  const RecarvePlan plan;  // yaw pi/2, weights 0.5/0.5, 512^3
  const IdentityRefiner id;
  const Mesh sphere = make_icosphere({0, 0, 0}, 0.6, 5);
  const double v_in = mesh_volume(sphere);
  const double v_out = mesh_volume(recarve(sphere, plan, 32, id).mesh);
  const double dv = std::fabs(v_out - v_in) / v_in;

  const Mesh cube = make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  double iou = 0.0;
  {
    const RecarveResult r = recarve(cube, plan, 32, id);
    const IntervalImage truth = raycast(cube, plan.depth, plan.depth).image;
    iou = grid_iou(r.occupancy, voxelize_intervals(truth, plan.depth));
  }
  const bool pass = bit_equal && dv <= 0.02 && iou >= 0.97;
  return {pass, fmt("blend(F,F) bit-equal: %s, sphere volume change %.3f%% (<= 2%%), cube IoU "
                    "%.5f (>= 0.97)",
                    bit_equal ? "yes" : "no", 100.0 * dv, iou)};
}

Outcome band_algebra() {
  std::mt19937_64 rng(66);
  std::uniform_int_distribution<int> dim(1, 40), chans(2, 48);
  int exact = 0;
  bool zero_self = true;
  for (int g = 0; g < 100; ++g) {
    const int c = chans(rng);
    const FofGrid f = oracle::random_fof(rng, dim(rng), dim(rng), c, 3.0);
    const int split = std::uniform_int_distribution<int>(1, c - 1)(rng);
    exact += band_merge(band_split(f, split)) == f;
    zero_self = zero_self && hf_mse(f, f) == 0.0;
  }
  // Dyadic data keeps every sum exact, so the shift must be exactly k^2.
  bool shift_exact = true;
  double worst_general = 0.0;
  for (double k : {0.5, 1.0, 0.125, 3.0, -0.75}) {
    FofGrid x(32, 32, 16), shifted(32, 32, 16);
    std::uniform_int_distribution<int> q(-1024, 1024);
    for (std::size_t n = 0; n < x.data().size(); ++n) {
      x.data()[n] = static_cast<float>(q(rng) / 256.0);
      shifted.data()[n] = static_cast<float>(x.data()[n] + k);
    }
    shift_exact = shift_exact && hf_mse(shifted, x) == k * k;
    // General data: mse(x + k, y) = mse(x, y) + 2k mean(x - y) + k^2.
    const FofGrid a = oracle::random_fof(rng, 32, 32, 16);
    const FofGrid b = oracle::random_fof(rng, 32, 32, 16);
    FofGrid ak = a;
    double mean = 0.0;
    for (std::size_t n = 0; n < a.data().size(); ++n) {
      ak.data()[n] = static_cast<float>(a.data()[n] + k);
      mean += (static_cast<double>(ak.data()[n]) - k) - b.data()[n];
    }
    mean /= static_cast<double>(a.data().size());
    const double predicted = hf_mse(ak, b) - 2.0 * k * mean - k * k;
    // Float rounding of a + k perturbs each value by up to 2^-24 |a + k|.
    worst_general = std::max(worst_general, std::fabs(predicted - hf_mse(
        [&] {
          FofGrid back = ak;
          for (float& v : back.data()) v = static_cast<float>(v - k);
          return back;
        }(), b)));
  }
  const bool pass = exact == 100 && zero_self && shift_exact && worst_general < 1e-9;
  return {pass, fmt("merge(split) bit-exact %d/100, hf_mse(x,x)=0: %s, hf_mse(x+k,x)=k^2 "
                    "exactly: %s, general shift residual %.3g",
                    exact, zero_self ? "yes" : "no", shift_exact ? "yes" : "no",
                    worst_general)};
}

Outcome inversion_equivalence() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int g = 0; g < 3; ++g) {
    const FofGrid f = oracle::random_fof(rng, 128, 128, 32, g == 0 ? 1.0 : 2.0);
    const OccupancyGrid fast = fof_to_occupancy(f, 128);
    const OccupancyGrid slow = reference::fof_to_occupancy(f, 128);
    for (std::size_t n = 0; n < fast.size(); ++n) {
      worst = std::max(worst, std::fabs(static_cast<double>(fast.data()[n]) - slow.data()[n]));
    }
  }
  return {worst <= 1e-5,
          fmt("max |matrix - naive| = %.3g over 3 random 128x128x32 grids (<= 1e-5)", worst)};
}

Outcome rendering_protocol() {
  testutil::TempDir dir;
  const Mesh torus = make_torus({0, 0, 0}, 0.6, 0.25, 96, 48);
  save_mesh(torus, dir / "torus.ply");
  std::vector<std::string> names;
  bool same_bytes = true;
  std::size_t count = 0;
  for (int run = 0; run < 2; ++run) {
    std::ostringstream out, err;
    const auto target = dir / ("run" + std::to_string(run));
    const int code = run_cli({"fofkit", "render", (dir / "torus.ply").string(), "-o",
                              target.string(), "--threads", run == 0 ? "1" : "4"},
                             out, err);
    if (code != 0) return {false, "render exited " + std::to_string(code) + ": " + err.str()};
    std::size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(target)) {
      ++n;
      if (run == 1) {
        same_bytes = same_bytes && testutil::read_bytes(e.path()) ==
                                       testutil::read_bytes(dir / "run0" / e.path().filename());
      }
    }
    count = n;
  }
  const auto views = render_views(torus);
  bool angles = views.size() == 18;
  for (std::size_t v = 0; angles && v < views.size(); ++v) {
    angles = views[v].yaw_deg == 20.0 * static_cast<double>(v) && views[v].image.width == 512;
  }
  const bool pass = count == 18 && angles && same_bytes;
  return {pass, fmt("%zu PNG files, yaws 0..340 step 20: %s, byte-identical across runs: %s",
                    count, angles ? "yes" : "no", same_bytes ? "yes" : "no")};
}

Outcome performance() {
  const Mesh mesh = normalize_mesh(make_torus({0, 0, 0}, 0.6, 0.25, 448, 112)).mesh;
  auto encode = [&] { return intervals_to_fof(raycast(mesh, 512, 512).image, 32); };
  auto timed = [&](int threads, FofGrid& out) {
    set_thread_count(threads);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      out = encode();
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  FofGrid one, eight;
  const double t1 = timed(1, one);
  const double t8 = timed(8, eight);
  set_thread_count(0);
  const double speedup = t1 / t8;
  const bool identical = one == eight;
  const unsigned cores = std::thread::hardware_concurrency();
  const bool pass = t1 < 5.0 && speedup >= 4.0 && identical;
  return {pass, fmt("%zu triangles: 1 thread %.3f s (< 5 s), 8 threads %.3f s, speedup %.2fx "
                    "(>= 4x), bit-identical: %s, hardware threads available: %u",
                    mesh.triangles.size(), t1, t8, speedup, identical ? "yes" : "no", cores)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "coefficient oracle", coefficient_oracle},
      {2, "sphere round trip", round_trip},
      {3, "parity audit", parity_audit},
      {4, "joint embedding contract", csej_contract},
      {5, "recarving identity", recarving_identity},
      {6, "band algebra", band_algebra},
      {7, "inversion equivalence", inversion_equivalence},
      {8, "rendering protocol", rendering_protocol},
      {9, "performance", performance},
  };
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
