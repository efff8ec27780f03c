#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library kernels it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "fofkit/fof.hpp"
#include "fofkit/mesh.hpp"

namespace oracle {

using fofkit::Vec3;

// Adaptive Simpson on [a, b].
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  // Fixed pre-split so oscillating integrands cannot fool the first
  // error estimate.
  constexpr int kPieces = 64;
  double total = 0.0;
  for (int p = 0; p < kPieces; ++p) {
    const double lo = a + (b - a) * p / kPieces;
    const double hi = p + 1 == kPieces ? b : a + (b - a) * (p + 1) / kPieces;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(f, lo, hi, fa, fm, fb, whole, tol / kPieces, 50);
  }
  return total;
}

// Basis function of channel c in the [a0, a1, b1, a2, b2, ...] layout,
// without the 1/2 on a0.
inline double basis(int c, double z) {
  if (c == 0) return 1.0;
  const int n = (c + 1) / 2;
  return (c % 2 == 1) ? std::cos(n * std::numbers::pi * z)
                      : std::sin(n * std::numbers::pi * z);
}

// Coefficients of the indicator of a union of disjoint intervals by
// quadrature of each basis function over each interval.
inline std::vector<double> quadrature_coefficients(
    const std::vector<std::pair<double, double>>& intervals, int channels) {
  std::vector<double> out(static_cast<std::size_t>(channels), 0.0);
  for (int c = 0; c < channels; ++c) {
    for (const auto& [s, e] : intervals) {
      out[static_cast<std::size_t>(c)] +=
          integrate([c](double z) { return basis(c, z); }, s, e);
    }
  }
  return out;
}

// f(z) = a0/2 + sum a_n cos + b_n sin, evaluated term by term.
inline double series(const std::vector<double>& coeffs, double z) {
  double value = 0.5 * coeffs[0];
  for (std::size_t c = 1; c < coeffs.size(); ++c) {
    value += coeffs[c] * basis(static_cast<int>(c), z);
  }
  return value;
}

// Yaw about +y as an explicit 3x3 matrix.
inline std::array<std::array<double, 3>, 3> yaw_matrix(double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
}

inline Vec3 apply(const std::array<std::array<double, 3>, 3>& m, const Vec3& p) {
  return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
          m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
          m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
}

// +z ray through (x, y) against a sphere / axis-aligned box.
inline std::optional<std::pair<double, double>> sphere_chord(const Vec3& c,
                                                             double r, double x,
                                                             double y) {
  const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
  if (d2 > r * r) return std::nullopt;
  const double h = std::sqrt(r * r - d2);
  return std::make_pair(c.z - h, c.z + h);
}

inline std::optional<std::pair<double, double>> box_chord(const Vec3& lo,
                                                          const Vec3& hi,
                                                          double x, double y) {
  if (x < lo.x || x > hi.x || y < lo.y || y > hi.y) return std::nullopt;
  return std::make_pair(lo.z, hi.z);
}

// Cell-center voxelizations on the (pixel x, pixel y, depth z) lattice.
inline std::vector<std::uint8_t> voxelize(int res, int depth,
                                          const std::function<bool(const Vec3&)>& inside) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(res) * res * depth);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      for (int k = 0; k < depth; ++k) {
        const Vec3 p{-1.0 + (2.0 * i + 1.0) / res, 1.0 - (2.0 * j + 1.0) / res,
                     -1.0 + (2.0 * k + 1.0) / depth};
        v[(static_cast<std::size_t>(j) * res + i) * depth + k] = inside(p) ? 1 : 0;
      }
    }
  }
  return v;
}

inline std::vector<std::uint8_t> threshold(const fofkit::OccupancyGrid& g,
                                           double iso = 0.5) {
  std::vector<std::uint8_t> v(g.size());
  const auto d = g.data();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = d[n] >= iso ? 1 : 0;
  return v;
}

inline double iou(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::size_t both = 0, either = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    both += a[n] & b[n];
    either += a[n] | b[n];
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

inline double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = fofkit::dot(ab, ab);
  double t = len2 > 0.0 ? fofkit::dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return fofkit::norm(p - (a + ab * t));
}

// Plane distance when the projection falls inside, else nearest edge.
inline double triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                                const Vec3& c) {
  const Vec3 n = fofkit::cross(b - a, c - a);
  const double n2 = fofkit::dot(n, n);
  if (n2 > 0.0) {
    const double dist = fofkit::dot(p - a, n) / n2;
    const Vec3 q = p - n * dist;
    const double u = fofkit::dot(fofkit::cross(b - q, c - q), n);
    const double v = fofkit::dot(fofkit::cross(c - q, a - q), n);
    const double w = fofkit::dot(fofkit::cross(a - q, b - q), n);
    if (u >= 0.0 && v >= 0.0 && w >= 0.0) return std::fabs(dist) * std::sqrt(n2);
  }
  return std::min({segment_distance(p, a, b), segment_distance(p, b, c),
                   segment_distance(p, c, a)});
}

inline double mesh_distance(const Vec3& p, const fofkit::Mesh& m) {
  double best = 1e300;
  for (const auto& t : m.triangles) {
    best = std::min(best, triangle_distance(p, m.vertices[t[0]], m.vertices[t[1]],
                                            m.vertices[t[2]]));
  }
  return best;
}

// Two-pass MSE: differences first, then a plain double sum.
inline double naive_mse(const fofkit::FofGrid& a, const fofkit::FofGrid& b) {
  std::vector<double> diff;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t n = 0; n < da.size(); ++n) {
    diff.push_back(static_cast<double>(da[n]) - static_cast<double>(db[n]));
  }
  long double sum = 0.0L;
  for (double d : diff) sum += static_cast<long double>(d) * d;
  return static_cast<double>(sum / static_cast<long double>(diff.size()));
}

// Random sorted disjoint intervals inside [-1, 1].
inline std::vector<std::pair<double, double>> random_intervals(std::mt19937_64& rng,
                                                               int max_count) {
  std::uniform_int_distribution<int> count_dist(0, max_count);
  std::uniform_real_distribution<double> z(-1.0, 1.0);
  const int count = count_dist(rng);
  std::vector<double> ends;
  for (int k = 0; k < 2 * count; ++k) ends.push_back(z(rng));
  std::sort(ends.begin(), ends.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k + 1 < ends.size(); k += 2) {
    if (ends[k] < ends[k + 1] && (out.empty() || ends[k] > out.back().second)) {
      out.emplace_back(ends[k], ends[k + 1]);
    }
  }
  return out;
}

// Removes every triangle lying in the plane of the largest z, opening the
// mesh toward the camera axis.
inline fofkit::Mesh without_far_face(fofkit::Mesh m) {
  double zmax = -1e300;
  for (const Vec3& v : m.vertices) zmax = std::max(zmax, v.z);
  std::erase_if(m.triangles, [&](const auto& t) {
    return m.vertices[t[0]].z == zmax && m.vertices[t[1]].z == zmax &&
           m.vertices[t[2]].z == zmax;
  });
  m.watertight = false;
  return m;
}

inline fofkit::FofGrid random_fof(std::mt19937_64& rng, int w, int h, int c,
                                  double scale = 1.0) {
  fofkit::FofGrid g(w, h, c);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (float& v : g.data()) v = static_cast<float>(u(rng));
  return g;
}

}  // namespace oracle
