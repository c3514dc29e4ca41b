#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "prismshell/basis.hpp"
#include "prismshell/core.hpp"

namespace prismshell {

struct QuadPoint1D {
  double x;
  double w;
};

/// Gauss-Legendre rule with n points on [0,1]; exact for degree 2n-1.
inline std::vector<QuadPoint1D> gauss_legendre_01(int n) {
  if (n < 1) throw Error("gauss_legendre_01: need at least one point");
  std::vector<QuadPoint1D> pts(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate of the i-th root of L_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const LegendreValue L = legendre(n, x);
      const double dx = L.value / L.derivative;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const LegendreValue L = legendre(n, x);
    const double w = 2.0 / ((1.0 - x * x) * L.derivative * L.derivative);
    pts[n - 1 - i] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return pts;
}

struct TriQuadPoint {
  double xi;
  double eta;
  double w;
};

namespace detail {

inline void orbit1(std::vector<TriQuadPoint>& r, double w) {
  r.push_back({1.0 / 3.0, 1.0 / 3.0, w});
}

// Symmetric orbit (a, a, 1-2a) in barycentric coordinates.
inline void orbit3(std::vector<TriQuadPoint>& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.push_back({a, a, w});
  r.push_back({b, a, w});
  r.push_back({a, b, w});
}

} // namespace detail

/// Quadrature on the reference triangle (weights sum to 1/2), exact for all
/// polynomials up to `degree`. Low degrees use classical positive symmetric
/// rules; higher degrees fall back to a collapsed tensor rule.
inline std::vector<TriQuadPoint> triangle_rule(int degree) {
  if (degree < 0) throw Error("triangle_rule: negative degree");
  std::vector<TriQuadPoint> r;
  if (degree <= 1) {
    detail::orbit1(r, 1.0);
  } else if (degree == 2) {
    detail::orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
  } else if (degree <= 4) {
    detail::orbit3(r, 0.445948490915965, 0.223381589678011);
    detail::orbit3(r, 0.091576213509771, 0.109951743655322);
  } else if (degree == 5) {
    detail::orbit1(r, 0.225);
    detail::orbit3(r, 0.470142064105115, 0.132394152788506);
    detail::orbit3(r, 0.101286507323456, 0.125939180544827);
  } else {
    // Duffy map (s,t) -> (s(1-t), t) with the (1-t) factor absorbed into
    // the weight; one extra point in t covers the added degree.
    const int ns = (degree + 2) / 2;
    const int nt = (degree + 3) / 2;
    const auto gs = gauss_legendre_01(ns);
    const auto gt = gauss_legendre_01(nt);
    for (const auto& t : gt)
      for (const auto& s : gs)
        r.push_back({s.x * (1.0 - t.x), t.x, 2.0 * s.w * t.w * (1.0 - t.x)});
  }
  for (auto& p : r) p.w *= 0.5; // reference triangle area
  return r;
}

/// Combined prism rule: triangle rule in-plane and Gauss through the
/// thickness. Full integration: the triangle rule is exact for degree
/// 2*p_face and the thickness rule has p_thick + 1 points.
struct Quadrature {
  std::vector<TriQuadPoint> tri;
  std::vector<QuadPoint1D> line;
  std::vector<std::pair<RefPoint, double>> points;
};

inline Quadrature make_quadrature(int p_face, int p_thick) {
  if (p_face < 1 || p_thick < 1) throw Error("make_quadrature: orders must be >= 1");
  Quadrature q;
  q.tri = triangle_rule(2 * p_face);
  q.line = gauss_legendre_01(p_thick + 1);
  for (const auto& l : q.line)
    for (const auto& t : q.tri)
      q.points.push_back({RefPoint{t.xi, t.eta, l.x}, t.w * l.w});
  return q;
}

} // namespace prismshell
