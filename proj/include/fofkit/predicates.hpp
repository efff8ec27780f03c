#pragma once

namespace fofkit {

/// Exact sign of the 2D orientation determinant
///   (ax - px) * (by - py) - (ay - py) * (bx - px)
/// using a floating-point filter with an expansion-arithmetic fallback.
int orient2d_sign(double ax, double ay, double bx, double by, double px,
                  double py);

/// Same as orient2d_sign but never returns 0: ties are broken by simulating
/// the perturbation p + (eps, eps^2). Antisymmetric in (a, b), so an edge
/// shared by two triangles classifies a point consistently for both. Returns
/// 0 only when a and b coincide in xy.
int edge_side(double ax, double ay, double bx, double by, double px,
              double py);

}  // namespace fofkit
