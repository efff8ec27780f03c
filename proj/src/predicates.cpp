#include "fofkit/predicates.hpp"

#include <cmath>
#include <limits>

namespace fofkit {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon() * 0.5;
// Error bound of the straightforward determinant evaluation.
constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;

inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  err = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& d, double& err) {
  d = a - b;
  const double bv = a - d;
  const double av = d + bv;
  err = (a - av) + (bv - b);
}

inline void two_product(double a, double b, double& p, double& err) {
  p = a * b;
  err = std::fma(a, b, -p);
}

// Grows a nonoverlapping expansion (increasing magnitude, zeros eliminated)
// by one term.
inline int grow_expansion(const double* e, int n, double b, double* h) {
  double q = b;
  int out = 0;
  for (int i = 0; i < n; ++i) {
    double s;
    double err;
    two_sum(q, e[i], s, err);
    q = s;
    if (err != 0.0) h[out++] = err;
  }
  if (q != 0.0 || out == 0) h[out++] = q;
  return out;
}

int exact_orient_sign(double ax, double ay, double bx, double by, double px,
                      double py) {
  // (ax - px) = u0 + u1 exactly, etc.
  double u0, u1, v0, v1, w0, w1, t0, t1;
  two_diff(ax, px, u0, u1);
  two_diff(by, py, v0, v1);
  two_diff(ay, py, w0, w1);
  two_diff(bx, px, t0, t1);

  const double left[2] = {u0, u1};
  const double right_a[2] = {v0, v1};
  const double neg_w[2] = {-w0, -w1};
  const double right_b[2] = {t0, t1};

  double terms[16];
  int m = 0;
  for (double l : left) {
    for (double r : right_a) {
      two_product(l, r, terms[m], terms[m + 1]);
      m += 2;
    }
  }
  for (double l : neg_w) {
    for (double r : right_b) {
      two_product(l, r, terms[m], terms[m + 1]);
      m += 2;
    }
  }

  double buf_a[20];
  double buf_b[20];
  double* cur = buf_a;
  double* next = buf_b;
  int n = 0;
  for (double term : terms) {
    if (term == 0.0) continue;
    n = grow_expansion(cur, n, term, next);
    std::swap(cur, next);
  }
  for (int i = n - 1; i >= 0; --i) {
    if (cur[i] > 0.0) return 1;
    if (cur[i] < 0.0) return -1;
  }
  return 0;
}

}  // namespace

int orient2d_sign(double ax, double ay, double bx, double by, double px,
                  double py) {
  const double left = (ax - px) * (by - py);
  const double right = (ay - py) * (bx - px);
  const double det = left - right;
  const double bound = kOrientBound * (std::fabs(left) + std::fabs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orient_sign(ax, ay, bx, by, px, py);
}

int edge_side(double ax, double ay, double bx, double by, double px,
              double py) {
  const int s = orient2d_sign(ax, ay, bx, by, px, py);
  if (s != 0) return s;
  // d/dpx of the determinant is (ay - by); d/dpy is (bx - ax).
  if (ay != by) return ay > by ? 1 : -1;
  if (bx != ax) return bx > ax ? 1 : -1;
  return 0;
}

}  // namespace fofkit
