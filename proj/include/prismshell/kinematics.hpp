#pragma once

#include "prismshell/core.hpp"
#include "prismshell/geometry.hpp"
#include "prismshell/material.hpp"

namespace prismshell {

/// Current-configuration curvilinear basis, convected by the mid-surface
/// deformation gradient: g_a = MF G^a, with duals g^a and metric g_ab.
struct ConvectedBasis {
  Mat3 g;    // columns g_0, g_1, g_2
  Mat3 gup;  // columns g^0, g^1, g^2
  Mat3 gab;  // g_ab = g_a . g_b
};

inline ConvectedBasis convected_basis(const Mat3& MF, const RefFrame& frame) {
  if (MF.determinant() <= 0.0)
    throw ElementInversion("convected_basis: mid-surface map not invertible");
  ConvectedBasis b;
  b.g = MF * frame.Gc;
  b.gup = b.g.inverse().transpose();
  b.gab = b.g.transpose() * b.g;
  return b;
}

/// Kinematic state at one material point. The current tangent map is carried
/// as x_A = MF G_A + (grad v . G_A) g_2 + (grad w^alpha . G_A) g_alpha
/// (columns of x); all tensor components follow from it.
struct KinState {
  Mat3 MF;            // mid-surface deformation gradient, global components
  ConvectedBasis gb;
  Mat3 x;             // columns x_A
  Mat3 F_loc;         // F^a_A = g^a . x_A
  Mat3 C;             // C^A_B
  Mat3 E;             // E^A_B
  Mat3 S;             // S^A_B
  Mat3 S_con;         // S^{AB}
  Mat3 P_loc;         // P^A_a (row A, column a)
  Mat3 P_glob;        // P^I_i (row i, column I)
  double energy_density = 0.0;
};

/// C^A_B = G^{AC} (x_C . x_B); reduces to the printed
/// C^A_B = g_ab G^{AC} F^b_C F^a_B on substituting F^a_A = g^a . x_A.
inline Mat3 right_cauchy_green(const RefFrame& frame, const Mat3& x) {
  return frame.Gup * (x.transpose() * x);
}

inline Mat3 green_lagrange(const Mat3& C) {
  return 0.5 * (C - Mat3::Identity());
}

/// Standard St. Venant-Kirchhoff law in mixed components:
/// S^A_B = lambda tr(E) delta^A_B + 2 mu E^A_B.
inline Mat3 svk_stress(const Mat3& E, const Material& mat) {
  return mat.lambda() * E.trace() * Mat3::Identity() + 2.0 * mat.mu() * E;
}

/// First Piola-Kirchhoff stress in local components P^A_a = g_ac G^{AC} F^c_B S^B_C
/// (equivalently S^{BA} (x_B . g_a)) and global components P^I_i = G^I_A g^a_i P^A_a.
struct FirstPk {
  Mat3 local;   // P^A_a
  Mat3 global;  // P^I_i (row i, column I)
};

inline FirstPk first_pk(const RefFrame& frame, const ConvectedBasis& gb, const Mat3& x,
                        const Mat3& S_con) {
  FirstPk p;
  p.local = S_con * (x.transpose() * gb.g);
  p.global = (x * S_con.transpose()) * frame.G.transpose();
  return p;
}

/// Assemble the full kinematic chain from displacement gradients.
/// grad_u is the global gradient of u; grad_v / grad_w are global gradients
/// of the convected through-thickness scalar fields.
inline KinState kinematics(const RefFrame& frame, const Mat3& grad_u, const Vec3& grad_v,
                           const Vec3& grad_w0, const Vec3& grad_w1,
                           const Material& mat) {
  KinState k;
  k.MF = Mat3::Identity() + grad_u;
  k.gb = convected_basis(k.MF, frame);
  const Vec3 dv = frame.G.transpose() * grad_v;    // grad_v . G_A
  const Vec3 dw0 = frame.G.transpose() * grad_w0;
  const Vec3 dw1 = frame.G.transpose() * grad_w1;
  k.x = k.MF * frame.G + k.gb.g.col(2) * dv.transpose() +
        k.gb.g.col(0) * dw0.transpose() + k.gb.g.col(1) * dw1.transpose();
  if (k.x.determinant() <= 0.0)
    throw ElementInversion("kinematics: current mapping not invertible");
  k.F_loc = k.gb.gup.transpose() * k.x;
  k.C = right_cauchy_green(frame, k.x);
  k.E = green_lagrange(k.C);
  k.S = svk_stress(k.E, mat);
  k.S_con = k.S * frame.Gup;
  const FirstPk p = first_pk(frame, k.gb, k.x, k.S_con);
  k.P_loc = p.local;
  k.P_glob = p.global;
  k.energy_density = 0.5 * (k.S * k.E).trace();
  return k;
}

} // namespace prismshell
