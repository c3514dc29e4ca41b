#pragma once

#include <vector>

#include "prismshell/basis.hpp"
#include "prismshell/core.hpp"
#include "prismshell/geometry.hpp"
#include "prismshell/kinematics.hpp"
#include "prismshell/material.hpp"
#include "prismshell/quadrature.hpp"

namespace prismshell {

/// Internal force blocks of one element.
struct ElementVectors {
  Eigen::VectorXd f_u;  // 3 Cartesian components per u shape function
  Eigen::VectorXd f_v;
  Eigen::VectorXd f_w;  // 2 convected components per w shape function
};

/// Dense tangent over the element dof vector [u | v | w].
using ElementTangent = Eigen::MatrixXd;

/// Evaluation kernel for one prism element. Element dofs are ordered as the
/// u block (3 Cartesian components per scalar function, function-major), the
/// v block, then the w block (2 convected components per function).
///
/// The residual is the exact gradient of the discrete strain energy,
/// including the dependence of the convected basis on u, and the tangent is
/// its exact (symmetric) second derivative.
class ElementKernel {
public:
  ElementKernel(const ElementGeometry& geom, const Material& mat,
                const PrismOrders& orders_u, const PrismOrders& orders_v,
                const PrismOrders& orders_w, const EdgeOrientations& orient)
      : geom_(geom), mat_(mat), orders_u_(orders_u), orders_v_(orders_v),
        orders_w_(orders_w), orient_(orient) {
    quad_ = make_quadrature(max_inplane_order() + 1, max_thickness_order() + 1);
    const RefPoint probe{0.25, 0.25, 0.5};
    for (const auto& e : tabulate_u(orders_u_, probe, orient_).entries)
      id_u_.push_back(e.id);
    for (const auto& e : tabulate_thickness(orders_v_, probe, orient_).entries)
      id_v_.push_back(e.id);
    for (const auto& e : tabulate_thickness(orders_w_, probe, orient_).entries)
      id_w_.push_back(e.id);
    nu_ = static_cast<int>(id_u_.size());
    nv_ = static_cast<int>(id_v_.size());
    nw_ = static_cast<int>(id_w_.size());
    qpts_.reserve(quad_.points.size());
    for (const auto& [p, w] : quad_.points) {
      QptData q;
      q.point = p;
      const RefFrame frame = geom_.frame(p);
      q.wdet = w * frame.detJ;
      q.G = frame.G;
      q.Gc = frame.Gc;
      q.Gup = frame.Gup;
      q.JinvT = frame.Jinv.transpose();
      qpts_.push_back(q);
    }
  }

  int nu() const { return nu_; }
  int nv() const { return nv_; }
  int nw() const { return nw_; }
  int ndof() const { return 3 * nu_ + nv_ + 2 * nw_; }
  const Quadrature& quadrature() const { return quad_; }
  const ElementGeometry& geometry() const { return geom_; }
  const Material& material() const { return mat_; }
  const PrismOrders& orders_u() const { return orders_u_; }
  const PrismOrders& orders_v() const { return orders_v_; }
  const PrismOrders& orders_w() const { return orders_w_; }
  const EdgeOrientations& orientations() const { return orient_; }
  const std::vector<EntityFnId>& u_fn_ids() const { return id_u_; }
  const std::vector<EntityFnId>& v_fn_ids() const { return id_v_; }
  const std::vector<EntityFnId>& w_fn_ids() const { return id_w_; }

  double volume() const {
    double v = 0.0;
    for (const auto& q : qpts_) v += q.wdet;
    return v;
  }

  double strain_energy(const Eigen::VectorXd& dofs) const {
    double W = 0.0;
    Tables tb;
    PointState s;
    for (const auto& q : qpts_) {
      fill_tables(q, tb);
      evaluate_point(q, tb, dofs, s);
      W += q.wdet * s.energy_density;
    }
    return W;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& dofs) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof());
    accumulate(dofs, &f, nullptr);
    return f;
  }

  ElementTangent tangent(const Eigen::VectorXd& dofs,
                         Eigen::VectorXd* f_out = nullptr) const {
    ElementTangent K = ElementTangent::Zero(ndof(), ndof());
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof());
    accumulate(dofs, &f, &K);
    if (f_out) *f_out = f;
    return K;
  }

  ElementVectors split(const Eigen::VectorXd& f) const {
    return {f.head(3 * nu_), f.segment(3 * nu_, nv_), f.tail(2 * nw_)};
  }

  /// Kinematic state at an arbitrary reference point (diagnostics, tests).
  KinState state_at(const RefPoint& p, const Eigen::VectorXd& dofs) const {
    const RefFrame frame = geom_.frame(p);
    const ShapeTable tu = tabulate_u(orders_u_, p, orient_);
    const ShapeTable tv = tabulate_thickness(orders_v_, p, orient_);
    const ShapeTable tw = tabulate_thickness(orders_w_, p, orient_);
    Mat3 grad_u = Mat3::Zero();
    for (int n = 0; n < nu_; ++n)
      grad_u += dofs.segment<3>(3 * n) *
                (frame.Jinv.transpose() * tu.entries[n].grad).transpose();
    Vec3 gv = Vec3::Zero(), gw0 = Vec3::Zero(), gw1 = Vec3::Zero();
    for (int m = 0; m < nv_; ++m)
      gv += dofs(3 * nu_ + m) * (frame.Jinv.transpose() * tv.entries[m].grad);
    for (int m = 0; m < nw_; ++m) {
      const Vec3 g = frame.Jinv.transpose() * tw.entries[m].grad;
      gw0 += dofs(3 * nu_ + nv_ + 2 * m) * g;
      gw1 += dofs(3 * nu_ + nv_ + 2 * m + 1) * g;
    }
    return kinematics(frame, grad_u, gv, gw0, gw1, mat_);
  }

  /// Displacement of a material point per the current-configuration
  /// expansion z = Z + u + v g_2 + w^alpha g_alpha.
  Vec3 displacement_at(const RefPoint& p, const Eigen::VectorXd& dofs) const {
    const RefFrame frame = geom_.frame(p);
    const ShapeTable tu = tabulate_u(orders_u_, p, orient_);
    const ShapeTable tv = tabulate_thickness(orders_v_, p, orient_);
    const ShapeTable tw = tabulate_thickness(orders_w_, p, orient_);
    Vec3 u = Vec3::Zero();
    Mat3 grad_u = Mat3::Zero();
    for (int n = 0; n < nu_; ++n) {
      u += dofs.segment<3>(3 * n) * tu.entries[n].value;
      grad_u += dofs.segment<3>(3 * n) *
                (frame.Jinv.transpose() * tu.entries[n].grad).transpose();
    }
    const ConvectedBasis gb = convected_basis(Mat3::Identity() + grad_u, frame);
    double v = 0.0, w0 = 0.0, w1 = 0.0;
    for (int m = 0; m < nv_; ++m) v += dofs(3 * nu_ + m) * tv.entries[m].value;
    for (int m = 0; m < nw_; ++m) {
      w0 += dofs(3 * nu_ + nv_ + 2 * m) * tw.entries[m].value;
      w1 += dofs(3 * nu_ + nv_ + 2 * m + 1) * tw.entries[m].value;
    }
    return u + v * gb.g.col(2) + w0 * gb.g.col(0) + w1 * gb.g.col(1);
  }

  /// Consistent load on the u block for a fixed-direction traction per unit
  /// mid-surface area (shape functions sampled on the mid fiber).
  Eigen::VectorXd surface_load(const Vec3& traction_per_area) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof());
    const double dA =
        (geom_.Z[1] - geom_.Z[0]).cross(geom_.Z[2] - geom_.Z[0]).norm();
    for (const auto& t : triangle_rule(2 * max_inplane_order() + 2)) {
      const ShapeTable tu = tabulate_u(orders_u_, RefPoint{t.xi, t.eta, 0.5}, orient_);
      for (int n = 0; n < nu_; ++n)
        f.segment<3>(3 * n) += t.w * dA * tu.entries[n].value * traction_per_area;
    }
    return f;
  }

  /// Consistent load on the u block for a fixed-direction traction per unit
  /// length along a local mid-surface edge (0: nodes 0-1, 1: 1-2, 2: 2-0).
  Eigen::VectorXd edge_load(int local_edge, const Vec3& traction_per_length) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof());
    static const double ends[3][2][2] = {
        {{0, 0}, {1, 0}}, {{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}};
    const auto& e = ends[local_edge];
    const int a = local_edge, b = (local_edge + 1) % 3;
    const double len = (geom_.Z[b] - geom_.Z[a]).norm();
    for (const auto& g : gauss_legendre_01(max_inplane_order() + 2)) {
      const RefPoint p{e[0][0] + g.x * (e[1][0] - e[0][0]),
                       e[0][1] + g.x * (e[1][1] - e[0][1]), 0.5};
      const ShapeTable tu = tabulate_u(orders_u_, p, orient_);
      for (int n = 0; n < nu_; ++n)
        f.segment<3>(3 * n) += g.w * len * tu.entries[n].value * traction_per_length;
    }
    return f;
  }

private:
  struct QptData {
    RefPoint point;
    double wdet;
    Mat3 G, Gc, Gup, JinvT;
  };

  struct Tables {
    Eigen::Matrix3Xd dG_u, dGc_u, dG_v, dG_w;
  };

  struct PointState {
    Mat3 g, x, S, S_con, T;
    Vec3 dv, dw0, dw1;
    double energy_density;
  };

  int max_inplane_order() const {
    int p = 1;
    for (int e = 0; e < 6; ++e) p = std::max(p, orders_u_.tri_edge[e]);
    for (int f = 0; f < 2; ++f) p = std::max(p, orders_u_.tri_face[f]);
    for (const PrismOrders* o : {&orders_v_, &orders_w_}) {
      for (int e = 0; e < 3; ++e) p = std::max(p, o->quad_face_plane[e]);
      p = std::max(p, o->volume_plane);
    }
    return p;
  }

  int max_thickness_order() const {
    int p = 1;
    for (const PrismOrders* o : {&orders_v_, &orders_w_}) {
      for (int e = 0; e < 3; ++e) {
        p = std::max(p, o->quad_edge[e]);
        p = std::max(p, o->quad_face[e]);
      }
      p = std::max(p, o->volume);
    }
    return p;
  }

  void fill_tables(const QptData& q, Tables& tb) const {
    const ShapeTable tu = tabulate_u(orders_u_, q.point, orient_);
    const ShapeTable tv = tabulate_thickness(orders_v_, q.point, orient_);
    const ShapeTable tw = tabulate_thickness(orders_w_, q.point, orient_);
    tb.dG_u.resize(3, nu_);
    tb.dGc_u.resize(3, nu_);
    for (int n = 0; n < nu_; ++n) {
      const Vec3 gz = q.JinvT * tu.entries[n].grad;
      tb.dG_u.col(n) = q.G.transpose() * gz;
      tb.dGc_u.col(n) = q.Gc.transpose() * gz;
    }
    tb.dG_v.resize(3, nv_);
    for (int m = 0; m < nv_; ++m)
      tb.dG_v.col(m) = q.G.transpose() * (q.JinvT * tv.entries[m].grad);
    tb.dG_w.resize(3, nw_);
    for (int m = 0; m < nw_; ++m)
      tb.dG_w.col(m) = q.G.transpose() * (q.JinvT * tw.entries[m].grad);
  }

  void evaluate_point(const QptData& q, const Tables& tb, const Eigen::VectorXd& dofs,
                      PointState& s) const {
    s.g = q.Gc;
    Mat3 xm = q.G;
    for (int n = 0; n < nu_; ++n) {
      const Vec3 un = dofs.segment<3>(3 * n);
      s.g += un * tb.dGc_u.col(n).transpose();
      xm += un * tb.dG_u.col(n).transpose();
    }
    if (s.g.determinant() <= 0.0)
      throw ElementInversion("element: mid-surface map not invertible");
    s.dv = tb.dG_v * dofs.segment(3 * nu_, nv_);
    s.dw0.setZero();
    s.dw1.setZero();
    for (int m = 0; m < nw_; ++m) {
      s.dw0 += dofs(3 * nu_ + nv_ + 2 * m) * tb.dG_w.col(m);
      s.dw1 += dofs(3 * nu_ + nv_ + 2 * m + 1) * tb.dG_w.col(m);
    }
    s.x = xm + s.g.col(2) * s.dv.transpose() + s.g.col(0) * s.dw0.transpose() +
          s.g.col(1) * s.dw1.transpose();
    if (s.x.determinant() <= 0.0)
      throw ElementInversion("element: current mapping not invertible");
    const Mat3 C = q.Gup * (s.x.transpose() * s.x);
    const Mat3 E = 0.5 * (C - Mat3::Identity());
    s.S = mat_.lambda() * E.trace() * Mat3::Identity() + 2.0 * mat_.mu() * E;
    s.S_con = s.S * q.Gup;
    s.T = s.x * s.S_con; // columns T_A = S^{AB} x_B
    s.energy_density = 0.5 * (s.S * E).trace();
  }

  void accumulate(const Eigen::VectorXd& dofs, Eigen::VectorXd* f,
                  ElementTangent* K) const {
    Tables tb;
    PointState s;
    const int nd = ndof();
    const int off_v = 3 * nu_, off_w = 3 * nu_ + nv_;
    Eigen::MatrixXd Ehat, Shat;
    if (K) {
      Ehat.resize(nd, 9);
      Shat.resize(nd, 9);
    }
    for (const auto& q : qpts_) {
      fill_tables(q, tb);
      evaluate_point(q, tb, dofs, s);
      const double wdet = q.wdet;

      if (f) {
        const Vec3 m_v = s.T * s.dv;
        const Vec3 m_w0 = s.T * s.dw0;
        const Vec3 m_w1 = s.T * s.dw1;
        Eigen::Matrix3Xd Fu = s.T * tb.dG_u;
        Fu += m_v * tb.dGc_u.row(2);
        Fu += m_w0 * tb.dGc_u.row(0);
        Fu += m_w1 * tb.dGc_u.row(1);
        for (int n = 0; n < nu_; ++n) f->segment<3>(3 * n) += wdet * Fu.col(n);
        const Vec3 tv = s.T.transpose() * s.g.col(2);
        const Vec3 tw0 = s.T.transpose() * s.g.col(0);
        const Vec3 tw1 = s.T.transpose() * s.g.col(1);
        f->segment(off_v, nv_) += wdet * (tb.dG_v.transpose() * tv);
        for (int m = 0; m < nw_; ++m) {
          (*f)(off_w + 2 * m) += wdet * tb.dG_w.col(m).dot(tw0);
          (*f)(off_w + 2 * m + 1) += wdet * tb.dG_w.col(m).dot(tw1);
        }
      }
      if (!K) continue;

      // Strain-variation profiles: dx_A/ddof = sigma_A * direction.
      Eigen::Matrix3Xd sig_u = tb.dG_u;
      sig_u += s.dv * tb.dGc_u.row(2);
      sig_u += s.dw0 * tb.dGc_u.row(0);
      sig_u += s.dw1 * tb.dGc_u.row(1);

      const Vec3 xg0 = s.x.transpose() * s.g.col(0);
      const Vec3 xg1 = s.x.transpose() * s.g.col(1);
      const Vec3 xg2 = s.x.transpose() * s.g.col(2);

      // Material part via flattened strain/stress variations.
      const double lam = mat_.lambda(), mu2 = 2.0 * mat_.mu();
      auto fill = [&](int row, const Vec3& sig, const Vec3& ux) {
        const Mat3 e = 0.5 * (sig * ux.transpose() + ux * sig.transpose());
        const Mat3 sh =
            lam * (q.Gup.cwiseProduct(e)).sum() * q.Gup + mu2 * (q.Gup * e * q.Gup);
        for (int c = 0; c < 9; ++c) {
          Ehat(row, c) = e(c / 3, c % 3);
          Shat(row, c) = sh(c / 3, c % 3);
        }
      };
      for (int n = 0; n < nu_; ++n)
        for (int i = 0; i < 3; ++i)
          fill(3 * n + i, sig_u.col(n), s.x.row(i).transpose());
      for (int m = 0; m < nv_; ++m) fill(off_v + m, tb.dG_v.col(m), xg2);
      for (int m = 0; m < nw_; ++m) {
        fill(off_w + 2 * m, tb.dG_w.col(m), xg0);
        fill(off_w + 2 * m + 1, tb.dG_w.col(m), xg1);
      }
      K->noalias() += wdet * (Shat * Ehat.transpose());

      // Geometric part: S^{AC} sigma^j_A sigma^k_C (d_j . d_k).
      const int ns = nu_ + nv_ + nw_;
      Eigen::Matrix3Xd sig_all(3, ns);
      sig_all << sig_u, tb.dG_v, tb.dG_w;
      const Eigen::MatrixXd A = sig_all.transpose() * (s.S_con * sig_all);
      const Vec3 g0 = s.g.col(0), g1 = s.g.col(1), g2 = s.g.col(2);
      const double d00 = g0.dot(g0), d11 = g1.dot(g1), d22 = g2.dot(g2);
      const double d01 = g0.dot(g1), d02 = g0.dot(g2), d12 = g1.dot(g2);
      for (int n = 0; n < nu_; ++n) {
        for (int n2 = 0; n2 < nu_; ++n2) {
          const double a = wdet * A(n, n2);
          (*K)(3 * n, 3 * n2) += a;
          (*K)(3 * n + 1, 3 * n2 + 1) += a;
          (*K)(3 * n + 2, 3 * n2 + 2) += a;
        }
        for (int m = 0; m < nv_; ++m) {
          const double a = wdet * A(n, nu_ + m);
          for (int i = 0; i < 3; ++i) {
            (*K)(3 * n + i, off_v + m) += a * g2(i);
            (*K)(off_v + m, 3 * n + i) += a * g2(i);
          }
        }
        for (int m = 0; m < nw_; ++m) {
          const double a = wdet * A(n, nu_ + nv_ + m);
          for (int i = 0; i < 3; ++i) {
            (*K)(3 * n + i, off_w + 2 * m) += a * g0(i);
            (*K)(off_w + 2 * m, 3 * n + i) += a * g0(i);
            (*K)(3 * n + i, off_w + 2 * m + 1) += a * g1(i);
            (*K)(off_w + 2 * m + 1, 3 * n + i) += a * g1(i);
          }
        }
      }
      for (int m = 0; m < nv_; ++m) {
        for (int m2 = 0; m2 < nv_; ++m2)
          (*K)(off_v + m, off_v + m2) += wdet * A(nu_ + m, nu_ + m2) * d22;
        for (int m2 = 0; m2 < nw_; ++m2) {
          const double a = wdet * A(nu_ + m, nu_ + nv_ + m2);
          (*K)(off_v + m, off_w + 2 * m2) += a * d02;
          (*K)(off_w + 2 * m2, off_v + m) += a * d02;
          (*K)(off_v + m, off_w + 2 * m2 + 1) += a * d12;
          (*K)(off_w + 2 * m2 + 1, off_v + m) += a * d12;
        }
      }
      for (int m = 0; m < nw_; ++m)
        for (int m2 = 0; m2 < nw_; ++m2) {
          const double a = wdet * A(nu_ + nv_ + m, nu_ + nv_ + m2);
          (*K)(off_w + 2 * m, off_w + 2 * m2) += a * d00;
          (*K)(off_w + 2 * m, off_w + 2 * m2 + 1) += a * d01;
          (*K)(off_w + 2 * m + 1, off_w + 2 * m2) += a * d01;
          (*K)(off_w + 2 * m + 1, off_w + 2 * m2 + 1) += a * d11;
        }

      // Second variation of x: the enrichment directions g_a move with u.
      const Eigen::Matrix3Xd tau_v = s.T * tb.dG_v;
      const Eigen::Matrix3Xd tau_w = s.T * tb.dG_w;
      for (int n = 0; n < nu_; ++n) {
        const double e0 = wdet * tb.dGc_u(0, n);
        const double e1 = wdet * tb.dGc_u(1, n);
        const double e2 = wdet * tb.dGc_u(2, n);
        for (int m = 0; m < nv_; ++m)
          for (int i = 0; i < 3; ++i) {
            (*K)(3 * n + i, off_v + m) += e2 * tau_v(i, m);
            (*K)(off_v + m, 3 * n + i) += e2 * tau_v(i, m);
          }
        for (int m = 0; m < nw_; ++m)
          for (int i = 0; i < 3; ++i) {
            (*K)(3 * n + i, off_w + 2 * m) += e0 * tau_w(i, m);
            (*K)(off_w + 2 * m, 3 * n + i) += e0 * tau_w(i, m);
            (*K)(3 * n + i, off_w + 2 * m + 1) += e1 * tau_w(i, m);
            (*K)(off_w + 2 * m + 1, 3 * n + i) += e1 * tau_w(i, m);
          }
      }
    }
  }

  ElementGeometry geom_;
  Material mat_;
  PrismOrders orders_u_, orders_v_, orders_w_;
  EdgeOrientations orient_;
  Quadrature quad_;
  int nu_ = 0, nv_ = 0, nw_ = 0;
  std::vector<EntityFnId> id_u_, id_v_, id_w_;
  std::vector<QptData> qpts_;
};

} // namespace prismshell
