// Serial reference kernels against the OpenMP kernels at several thread
// counts. Usage: fofkit_bench [resolution] [channels] [max_threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "fofkit/fof.hpp"
#include "fofkit/mesh.hpp"
#include "fofkit/parallel.hpp"
#include "fofkit/raycast.hpp"
#include "fofkit/reference.hpp"

namespace {

double seconds(const std::function<void()>& fn, int reps = 1) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fofkit;
  const int res = argc > 1 ? std::atoi(argv[1]) : 256;
  const int channels = argc > 2 ? std::atoi(argv[2]) : 32;
  const int max_threads = argc > 3 ? std::atoi(argv[3]) : 8;

  const Mesh torus = normalize_mesh(make_torus({0, 0, 0}, 0.6, 0.25, 448, 112)).mesh;
  std::printf("mesh: %zu triangles, image %dx%d, C=%d\n", torus.triangles.size(), res, res,
              channels);

  // The brute-force reference is O(pixels * triangles); time it on a small image.
  const int ref_res = 32;
  const double t_ref_rc = seconds([&] { reference::raycast(torus, ref_res, ref_res); });
  std::printf("reference raycast %dx%d: %.3f s (%.2f us/ray)\n", ref_res, ref_res, t_ref_rc,
              1e6 * t_ref_rc / (ref_res * ref_res));

  const IntervalImage image = raycast(torus, res, res).image;
  const FofGrid fof = intervals_to_fof(image, channels);
  const double t_ref_enc = seconds([&] { reference::intervals_to_fof(image, channels); });
  const double t_ref_dec = seconds([&] { reference::fof_to_occupancy(fof, res); });
  std::printf("reference encode: %.3f s, reference decode (R=%d): %.3f s\n", t_ref_enc, res,
              t_ref_dec);

  std::printf("%8s %12s %12s %12s %10s\n", "threads", "raycast[s]", "encode[s]", "decode[s]",
              "speedup");
  double base = 0.0;
  for (int t = 1; t <= max_threads; t *= 2) {
    set_thread_count(t);
    const double rc = seconds([&] { raycast(torus, res, res); }, 3);
    const double enc = seconds([&] { intervals_to_fof(image, channels); }, 3);
    const double dec = seconds([&] { fof_to_occupancy(fof, res); }, 3);
    const double total = rc + enc;
    if (t == 1) base = total;
    std::printf("%8d %12.4f %12.4f %12.4f %9.2fx\n", t, rc, enc, dec, base / total);
  }
  return 0;
}
