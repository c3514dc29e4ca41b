#pragma once

#include "prismshell/basis.hpp"
#include "prismshell/core.hpp"
#include "prismshell/mesh.hpp"

namespace prismshell {

/// Spin[a] b = a x b; antisymmetric.
inline Mat3 spin(const Vec3& a) {
  Mat3 s;
  s << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return s;
}

/// Reference frame at one material point: the Jacobian of the prism-to-space
/// map, and the local curvilinear basis used by the convected formulation.
/// Columns of G are the covariant vectors G_0, G_1 (mid-surface tangents)
/// and G_2 (thickness-scaled unit normal); Gc holds the contravariant duals
/// and Gup the contravariant metric G^{AB}.
struct RefFrame {
  Mat3 J;
  Mat3 Jinv;
  double detJ = 0.0;
  Mat3 G;
  Mat3 Gc;
  Mat3 Gup;
};

/// Geometry of one prism element: linear mid-surface triangle with nodal
/// directors and thickness. The through-thickness fiber a D is interpolated
/// as one nodal field (the layered form Z = mu_0 Z_l + mu_1 Z_u), which keeps
/// rigid motions exactly representable by the vertex displacement functions.
struct ElementGeometry {
  std::array<Vec3, 3> Z;
  std::array<Vec3, 3> D;
  std::array<double, 3> a;
  // Nodal in-plane tangents of the curvilinear frame (single-valued across
  // elements so the convected directions conform on shared entities).
  std::array<Vec3, 3> T0;
  std::array<Vec3, 3> T1;

  static ElementGeometry from_mesh(const ShellMesh& m, int t) {
    if (m.tangent0.size() != m.X.size())
      throw Error("ElementGeometry: mesh tangent frames missing");
    ElementGeometry g;
    for (int i = 0; i < 3; ++i) {
      const int n = m.tris[t][i];
      g.Z[i] = m.X[n];
      g.D[i] = m.director[n];
      g.a[i] = m.thickness[n];
      g.T0[i] = m.tangent0[n];
      g.T1[i] = m.tangent1[n];
    }
    return g;
  }

  /// Derive tangents from the directors and a reference axis (tests,
  /// standalone elements).
  void derive_tangents(const Vec3& axis) {
    for (int i = 0; i < 3; ++i) {
      T0[i] = axis.cross(D[i]).normalized();
      T1[i] = D[i].cross(T0[i]);
    }
  }

  Vec3 mid_position(double xi, double eta) const {
    return (1.0 - xi - eta) * Z[0] + xi * Z[1] + eta * Z[2];
  }
  /// Interpolated fiber vector a D.
  Vec3 mid_fiber(double xi, double eta) const {
    return (1.0 - xi - eta) * a[0] * D[0] + xi * a[1] * D[1] + eta * a[2] * D[2];
  }
  double mid_thickness(double xi, double eta) const {
    return (1.0 - xi - eta) * a[0] + xi * a[1] + eta * a[2];
  }

  /// Z(xi,eta,zeta) = MZ + (zeta - 1/2) (a D).
  Vec3 position(const RefPoint& p) const {
    return mid_position(p.xi, p.eta) + (p.zeta - 0.5) * mid_fiber(p.xi, p.eta);
  }

  /// Exact Jacobian of position(); columns are the covariant base vectors.
  Mat3 jacobian(const RefPoint& p) const {
    const double s = p.zeta - 0.5;
    const Vec3 dT_xi = a[1] * D[1] - a[0] * D[0];
    const Vec3 dT_eta = a[2] * D[2] - a[0] * D[0];
    Mat3 J;
    J.col(0) = Z[1] - Z[0] + s * dT_xi;
    J.col(1) = Z[2] - Z[0] + s * dT_eta;
    J.col(2) = mid_fiber(p.xi, p.eta);
    return J;
  }

  RefFrame frame(const RefPoint& p) const {
    RefFrame f;
    f.J = jacobian(p);
    f.detJ = f.J.determinant();
    if (f.detJ <= 0.0) throw Error("inverted element: det J <= 0");
    f.Jinv = f.J.inverse();
    const double l0 = 1.0 - p.xi - p.eta;
    const Vec3 G0 = l0 * T0[0] + p.xi * T0[1] + p.eta * T0[2];
    const Vec3 G1 = l0 * T1[0] + p.xi * T1[1] + p.eta * T1[2];
    const Vec3 n = spin(G0) * G1;
    if (n.norm() < 1e-12 * G0.norm() * G1.norm())
      throw Error("degenerate in-plane tangents");
    f.G.col(0) = G0;
    f.G.col(1) = G1;
    f.G.col(2) = mid_thickness(p.xi, p.eta) * n.normalized();
    f.Gc = f.G.inverse().transpose();
    f.Gup = f.Gc.transpose() * f.Gc;
    return f;
  }
};

} // namespace prismshell
