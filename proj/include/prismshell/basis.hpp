#pragma once

#include <array>
#include <vector>

#include "prismshell/core.hpp"
#include "prismshell/legendre.hpp"

namespace prismshell {

/// Point in the reference prism: 0 <= xi,eta,zeta <= 1, xi + eta <= 1.
struct RefPoint {
  double xi = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
};

inline bool in_reference_prism(const RefPoint& p, double tol = 1e-12) {
  return p.xi >= -tol && p.eta >= -tol && p.zeta >= -tol &&
         p.zeta <= 1.0 + tol && p.xi + p.eta <= 1.0 + tol;
}

/// Barycentric coordinates of the triangle cross-section and affine
/// coordinates of the thickness segment, with their constant gradients
/// with respect to (xi, eta, zeta).
struct BaryCoords {
  std::array<double, 3> lambda{};
  std::array<double, 2> mu{};
  std::array<Vec3, 3> grad_lambda{};
  std::array<Vec3, 2> grad_mu{};
};

inline BaryCoords bary(const RefPoint& p) {
  if (!in_reference_prism(p))
    throw Error("bary: point outside the reference prism");
  BaryCoords b;
  b.lambda = {1.0 - p.xi - p.eta, p.xi, p.eta};
  b.mu = {1.0 - p.zeta, p.zeta};
  b.grad_lambda = {Vec3(-1, -1, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  b.grad_mu = {Vec3(0, 0, -1), Vec3(0, 0, 1)};
  return b;
}

/// Value of a shape function together with its gradient w.r.t. (xi,eta,zeta).
struct ShapeFn {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
};

namespace detail {

// Forward-mode scalar: value and reference-space gradient.
struct VG {
  double v;
  Vec3 g;
};

inline VG operator*(const VG& a, const VG& b) {
  return {a.v * b.v, a.v * b.g + b.v * a.g};
}

inline VG lam(const BaryCoords& b, int i) { return {b.lambda[i], b.grad_lambda[i]}; }
inline VG mu(const BaryCoords& b, int i) { return {b.mu[i], b.grad_mu[i]}; }

// Legendre of a linear argument; `reversed` negates the argument.
inline VG leg(int ell, const VG& s, bool reversed = false) {
  const double sign = reversed ? -1.0 : 1.0;
  const LegendreValue L = legendre(ell, sign * s.v);
  return {L.value, L.derivative * sign * s.g};
}

inline VG diff(const VG& a, const VG& b) { return {a.v - b.v, a.g - b.g}; }

// Index tables of the entity constructions. Vertices 0,1,2 lie on the
// bottom triangle (zeta = 0), vertices 3,4,5 on the top (zeta = 1).
inline constexpr int kVertexLambda[6] = {0, 1, 2, 0, 1, 2};
inline constexpr int kVertexMu[6] = {0, 0, 0, 1, 1, 1};

// Triangle edges 0-1, 1-2, 2-0 (bottom), 3-4, 4-5, 5-3 (top).
inline constexpr int kTriEdgeMu[6] = {0, 0, 0, 1, 1, 1};
inline constexpr int kTriEdgeJ[6] = {1, 2, 0, 1, 2, 0};
inline constexpr int kTriEdgeK[6] = {0, 1, 2, 0, 1, 2};

// Quadrilateral faces 0-1-4-3, 1-2-5-4, 2-0-3-5.
inline constexpr int kQuadFaceI[3] = {0, 1, 2};
inline constexpr int kQuadFaceJ[3] = {1, 2, 0};

} // namespace detail

/// phi^v = lambda_i mu_j; equals one at vertex v, zero at the others.
inline ShapeFn vertex_shape(int v, const RefPoint& p) {
  assert(v >= 0 && v < 6);
  const BaryCoords b = bary(p);
  const detail::VG r =
      detail::lam(b, detail::kVertexLambda[v]) * detail::mu(b, detail::kVertexMu[v]);
  return {r.v, r.g};
}

/// phi^te_ell = mu_i lambda_j lambda_k L_ell(lambda_j - lambda_k) on a
/// triangle edge; `reversed` flips the edge direction seen by L_ell.
inline ShapeFn tri_edge_shape(int edge, int ell, const RefPoint& p, bool reversed = false) {
  assert(edge >= 0 && edge < 6);
  if (ell < 0) throw Error("tri_edge_shape: ell out of range");
  const BaryCoords b = bary(p);
  const detail::VG lj = detail::lam(b, detail::kTriEdgeJ[edge]);
  const detail::VG lk = detail::lam(b, detail::kTriEdgeK[edge]);
  const detail::VG r = detail::mu(b, detail::kTriEdgeMu[edge]) * lj * lk *
                       detail::leg(ell, detail::diff(lj, lk), reversed);
  return {r.v, r.g};
}

/// phi^qe_ell = lambda_i mu_0 mu_1 L_ell(mu_1 - mu_0) on a through-thickness
/// edge (edges 0-3, 1-4, 2-5 map to i = 0, 1, 2).
inline ShapeFn quad_edge_shape(int edge, int ell, const RefPoint& p, bool reversed = false) {
  assert(edge >= 0 && edge < 3);
  if (ell < 0) throw Error("quad_edge_shape: ell out of range");
  const BaryCoords b = bary(p);
  const detail::VG m0 = detail::mu(b, 0);
  const detail::VG m1 = detail::mu(b, 1);
  const detail::VG r =
      detail::lam(b, edge) * m0 * m1 * detail::leg(ell, detail::diff(m1, m0), reversed);
  return {r.v, r.g};
}

/// phi^tri_{k,ell} = mu_i lambda_0 lambda_1 lambda_2
///                   L_k(lambda_1 - lambda_0) L_ell(lambda_2 - lambda_0);
/// face 0 is the bottom triangle 0-1-2, face 1 the top triangle 3-4-5.
inline ShapeFn tri_face_shape(int face, int k, int ell, const RefPoint& p) {
  assert(face == 0 || face == 1);
  if (k < 0 || ell < 0) throw Error("tri_face_shape: index out of range");
  const BaryCoords b = bary(p);
  const detail::VG l0 = detail::lam(b, 0);
  const detail::VG l1 = detail::lam(b, 1);
  const detail::VG l2 = detail::lam(b, 2);
  const detail::VG r = detail::mu(b, face) * l0 * l1 * l2 *
                       detail::leg(k, detail::diff(l1, l0)) *
                       detail::leg(ell, detail::diff(l2, l0));
  return {r.v, r.g};
}

/// phi^quad_{k,ell} = mu_0 mu_1 lambda_i lambda_j
///                    L_k(mu_1 - mu_0) L_ell(lambda_j - lambda_i)
/// on quadrilateral faces 0-1-4-3, 1-2-5-4, 2-0-3-5; `reversed` flips the
/// in-plane direction only.
inline ShapeFn quad_face_shape(int face, int k, int ell, const RefPoint& p,
                               bool reversed = false) {
  assert(face >= 0 && face < 3);
  if (k < 0 || ell < 0) throw Error("quad_face_shape: index out of range");
  const BaryCoords b = bary(p);
  const detail::VG m0 = detail::mu(b, 0);
  const detail::VG m1 = detail::mu(b, 1);
  const detail::VG li = detail::lam(b, detail::kQuadFaceI[face]);
  const detail::VG lj = detail::lam(b, detail::kQuadFaceJ[face]);
  const detail::VG r = m0 * m1 * li * lj * detail::leg(k, detail::diff(m1, m0)) *
                       detail::leg(ell, detail::diff(lj, li), reversed);
  return {r.v, r.g};
}

/// phi^P_{k,ell,m} = mu_0 mu_1 lambda_0 lambda_1 lambda_2
///                   L_k(mu_1-mu_0) L_ell(lambda_1-lambda_0) L_m(lambda_2-lambda_0).
inline ShapeFn volume_shape(int k, int ell, int m, const RefPoint& p) {
  if (k < 0 || ell < 0 || m < 0) throw Error("volume_shape: index out of range");
  const BaryCoords b = bary(p);
  const detail::VG m0 = detail::mu(b, 0);
  const detail::VG m1 = detail::mu(b, 1);
  const detail::VG l0 = detail::lam(b, 0);
  const detail::VG l1 = detail::lam(b, 1);
  const detail::VG l2 = detail::lam(b, 2);
  const detail::VG r = m0 * m1 * l0 * l1 * l2 * detail::leg(k, detail::diff(m1, m0)) *
                       detail::leg(ell, detail::diff(l1, l0)) *
                       detail::leg(m, detail::diff(l2, l0));
  return {r.v, r.g};
}

/// Per-entity polynomial orders of one prism. Triangle entities carry the
/// in-plane (face) order; through-thickness entities carry a thickness order
/// and, for quadrilateral faces and the volume, an independent in-plane order.
/// Entity functions exist only for order >= 2.
struct PrismOrders {
  std::array<int, 6> tri_edge{1, 1, 1, 1, 1, 1};
  std::array<int, 2> tri_face{1, 1};
  std::array<int, 3> quad_edge{1, 1, 1};
  std::array<int, 3> quad_face{1, 1, 1};         // thickness order of face functions
  std::array<int, 3> quad_face_plane{1, 1, 1};   // in-plane order of face functions
  int volume = 1;                                // thickness order of volume functions
  int volume_plane = 1;                          // in-plane order of volume functions

  static PrismOrders uniform(int p_face, int p_thick) {
    PrismOrders o;
    o.tri_edge.fill(p_face);
    o.tri_face.fill(p_face);
    o.quad_edge.fill(p_thick);
    o.quad_face.fill(p_thick);
    o.quad_face_plane.fill(p_face);
    o.volume = p_thick;
    o.volume_plane = p_face;
    return o;
  }

  // Function counts per entity.
  static int n_edge_fns(int p) { return p >= 2 ? p - 1 : 0; }
  static int n_tri_face_fns(int p) { return p >= 3 ? (p - 1) * (p - 2) / 2 : 0; }
  static int n_quad_face_fns(int p_t, int p_in) {
    return n_edge_fns(p_t) * n_edge_fns(p_in);
  }
  static int n_volume_fns(int p_t, int p_in) {
    return n_edge_fns(p_t) * n_tri_face_fns(p_in);
  }
};

enum class EntityKind { Vertex, TriEdge, QuadEdge, TriFace, QuadFace, Volume };

/// Identifies one basis function: the entity it lives on and its
/// polynomial multi-index. Unused indices stay at -1.
struct EntityFnId {
  EntityKind kind;
  int entity;
  int k = -1;
  int l = -1;
  int m = -1;
};

/// Orientation flags of the three mid-surface edges (local edges (0,1),
/// (1,2), (2,0)); `true` means the canonical (ascending global vertex id)
/// direction opposes the local direction. The flag applies to both
/// triangle-edge layers and to the in-plane direction of the matching
/// quadrilateral face. Through-thickness edges are never reversed.
struct EdgeOrientations {
  std::array<bool, 3> reversed{false, false, false};
};

struct ShapeTableEntry {
  EntityFnId id;
  double value;
  Vec3 grad;
};

/// All active shape functions of one prism at one point, enumerated in the
/// canonical order: vertices, triangle edges, quadrilateral edges, triangle
/// faces, quadrilateral faces, volume.
struct ShapeTable {
  std::vector<ShapeTableEntry> entries;
};

namespace detail {

template <class F>
inline void for_each_tri_face_index(int p, F&& f) {
  for (int d = 0; d + 3 <= p; ++d)
    for (int k = 0; k <= d; ++k) f(k, d - k);
}

} // namespace detail

inline ShapeTable shape_table(const PrismOrders& orders, const RefPoint& p,
                              const EdgeOrientations& orient = {}) {
  ShapeTable t;
  for (int v = 0; v < 6; ++v) {
    const ShapeFn s = vertex_shape(v, p);
    t.entries.push_back({{EntityKind::Vertex, v}, s.value, s.grad});
  }
  for (int e = 0; e < 6; ++e) {
    const bool rev = orient.reversed[e % 3];
    for (int l = 0; l + 2 <= orders.tri_edge[e]; ++l) {
      const ShapeFn s = tri_edge_shape(e, l, p, rev);
      t.entries.push_back({{EntityKind::TriEdge, e, -1, l}, s.value, s.grad});
    }
  }
  for (int e = 0; e < 3; ++e) {
    for (int l = 0; l + 2 <= orders.quad_edge[e]; ++l) {
      const ShapeFn s = quad_edge_shape(e, l, p);
      t.entries.push_back({{EntityKind::QuadEdge, e, -1, l}, s.value, s.grad});
    }
  }
  for (int f = 0; f < 2; ++f) {
    detail::for_each_tri_face_index(orders.tri_face[f], [&](int k, int l) {
      const ShapeFn s = tri_face_shape(f, k, l, p);
      t.entries.push_back({{EntityKind::TriFace, f, k, l}, s.value, s.grad});
    });
  }
  for (int f = 0; f < 3; ++f) {
    const bool rev = orient.reversed[f];
    for (int k = 0; k + 2 <= orders.quad_face[f]; ++k)
      for (int l = 0; l + 2 <= orders.quad_face_plane[f]; ++l) {
        const ShapeFn s = quad_face_shape(f, k, l, p, rev);
        t.entries.push_back({{EntityKind::QuadFace, f, k, l}, s.value, s.grad});
      }
  }
  for (int k = 0; k + 2 <= orders.volume; ++k) {
    detail::for_each_tri_face_index(orders.volume_plane, [&](int l, int m) {
      const ShapeFn s = volume_shape(k, l, m, p);
      t.entries.push_back({{EntityKind::Volume, 0, k, l, m}, s.value, s.grad});
    });
  }
  return t;
}

/// Scalar functions of the displacement field u: vertices, triangle edges
/// and triangle faces of both layers, in canonical order.
inline ShapeTable tabulate_u(const PrismOrders& orders, const RefPoint& p,
                             const EdgeOrientations& orient = {}) {
  ShapeTable t;
  for (int v = 0; v < 6; ++v) {
    const ShapeFn s = vertex_shape(v, p);
    t.entries.push_back({{EntityKind::Vertex, v}, s.value, s.grad});
  }
  for (int e = 0; e < 6; ++e) {
    const bool rev = orient.reversed[e % 3];
    for (int l = 0; l + 2 <= orders.tri_edge[e]; ++l) {
      const ShapeFn s = tri_edge_shape(e, l, p, rev);
      t.entries.push_back({{EntityKind::TriEdge, e, -1, l}, s.value, s.grad});
    }
  }
  for (int f = 0; f < 2; ++f) {
    detail::for_each_tri_face_index(orders.tri_face[f], [&](int k, int l) {
      const ShapeFn s = tri_face_shape(f, k, l, p);
      t.entries.push_back({{EntityKind::TriFace, f, k, l}, s.value, s.grad});
    });
  }
  return t;
}

/// Scalar functions of a through-thickness field (v or w): quadrilateral
/// edges, quadrilateral faces, volume, in canonical order.
inline ShapeTable tabulate_thickness(const PrismOrders& orders, const RefPoint& p,
                                     const EdgeOrientations& orient = {}) {
  ShapeTable t;
  for (int e = 0; e < 3; ++e) {
    for (int l = 0; l + 2 <= orders.quad_edge[e]; ++l) {
      const ShapeFn s = quad_edge_shape(e, l, p);
      t.entries.push_back({{EntityKind::QuadEdge, e, -1, l}, s.value, s.grad});
    }
  }
  for (int f = 0; f < 3; ++f) {
    const bool rev = orient.reversed[f];
    for (int k = 0; k + 2 <= orders.quad_face[f]; ++k)
      for (int l = 0; l + 2 <= orders.quad_face_plane[f]; ++l) {
        const ShapeFn s = quad_face_shape(f, k, l, p, rev);
        t.entries.push_back({{EntityKind::QuadFace, f, k, l}, s.value, s.grad});
      }
  }
  for (int k = 0; k + 2 <= orders.volume; ++k) {
    detail::for_each_tri_face_index(orders.volume_plane, [&](int l, int m) {
      const ShapeFn s = volume_shape(k, l, m, p);
      t.entries.push_back({{EntityKind::Volume, 0, k, l, m}, s.value, s.grad});
    });
  }
  return t;
}

} // namespace prismshell
