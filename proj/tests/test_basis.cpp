#include <catch_amalgamated.hpp>

#include <random>

#include "prismshell/basis.hpp"

using namespace prismshell;

namespace {

std::mt19937 rng(12345);

RefPoint random_interior_point() {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double xi = u(rng), eta = u(rng);
  if (xi + eta > 0.95) {
    xi *= 0.45;
    eta *= 0.45;
  }
  return {xi, eta, u(rng)};
}

// Central finite difference of a shape function value.
template <class F>
Vec3 fd_gradient(F&& f, const RefPoint& p, double h = 1e-6) {
  Vec3 g;
  const double base[3] = {p.xi, p.eta, p.zeta};
  for (int d = 0; d < 3; ++d) {
    double lo[3] = {base[0], base[1], base[2]};
    double hi[3] = {base[0], base[1], base[2]};
    lo[d] -= h;
    hi[d] += h;
    g(d) = (f(RefPoint{hi[0], hi[1], hi[2]}) - f(RefPoint{lo[0], lo[1], lo[2]})) /
           (2.0 * h);
  }
  return g;
}

void check_gradient(const std::function<ShapeFn(const RefPoint&)>& fn) {
  for (int rep = 0; rep < 3; ++rep) {
    const RefPoint p = random_interior_point();
    const ShapeFn s = fn(p);
    const Vec3 g = fd_gradient([&](const RefPoint& q) { return fn(q).value; }, p);
    const double scale = std::max(1.0, s.grad.norm());
    REQUIRE((s.grad - g).norm() / scale < 1e-7);
  }
}

} // namespace

TEST_CASE("legendre recurrence values and derivatives") {
  CHECK(legendre(0, 0.7).value == 1.0);
  CHECK(legendre(0, 0.7).derivative == 0.0);
  CHECK(legendre(1, 0.3).value == Catch::Approx(0.3).margin(1e-15));
  CHECK(legendre(1, 0.3).derivative == Catch::Approx(1.0).margin(1e-15));
  // L_2 = (3 s^2 - 1) / 2
  CHECK(legendre(2, 0.5).value == Catch::Approx(-0.125).margin(1e-15));
  CHECK(legendre(2, 0.5).derivative == Catch::Approx(1.5).margin(1e-15));
  // L_3 = (5 s^3 - 3 s) / 2, L_4 = (35 s^4 - 30 s^2 + 3) / 8
  for (double s : {-0.9, -0.3, 0.2, 0.8}) {
    CHECK(legendre(3, s).value ==
          Catch::Approx(0.5 * (5 * s * s * s - 3 * s)).epsilon(1e-13));
    CHECK(legendre(4, s).value ==
          Catch::Approx((35 * std::pow(s, 4) - 30 * s * s + 3) / 8).epsilon(1e-13));
    CHECK(legendre(4, s).derivative ==
          Catch::Approx((140 * s * s * s - 60 * s) / 8).epsilon(1e-12));
  }
}

TEST_CASE("barycentric and affine coordinates") {
  const BaryCoords b0 = bary({0, 0, 0});
  CHECK(b0.lambda[0] == 1.0);
  CHECK(b0.lambda[1] == 0.0);
  CHECK(b0.lambda[2] == 0.0);
  CHECK(b0.mu[0] == 1.0);
  CHECK(b0.mu[1] == 0.0);

  const BaryCoords bc = bary({1.0 / 3, 1.0 / 3, 0.5});
  for (int i = 0; i < 3; ++i) CHECK(bc.lambda[i] == Catch::Approx(1.0 / 3));
  CHECK(bc.mu[0] == Catch::Approx(0.5));
  CHECK(bc.mu[1] == Catch::Approx(0.5));

  CHECK(bc.grad_lambda[0] == Vec3(-1, -1, 0));
  CHECK(bc.grad_lambda[1] == Vec3(1, 0, 0));
  CHECK(bc.grad_lambda[2] == Vec3(0, 1, 0));
  CHECK(bc.grad_mu[0] == Vec3(0, 0, -1));
  CHECK(bc.grad_mu[1] == Vec3(0, 0, 1));

  CHECK(bc.lambda[0] + bc.lambda[1] + bc.lambda[2] == Catch::Approx(1.0));
  CHECK(bc.mu[0] + bc.mu[1] == Catch::Approx(1.0));

  CHECK_THROWS_AS(bary({0.7, 0.7, 0.5}), Error);
  CHECK_THROWS_AS(bary({-0.1, 0.2, 0.5}), Error);
  CHECK_THROWS_AS(bary({0.1, 0.2, 1.5}), Error);
}

TEST_CASE("vertex shape functions: Kronecker and partition of unity") {
  const RefPoint verts[6] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                             {0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
  for (int v = 0; v < 6; ++v)
    for (int w = 0; w < 6; ++w)
      CHECK(vertex_shape(v, verts[w]).value == (v == w ? 1.0 : 0.0));

  CHECK(vertex_shape(0, {1.0 / 3, 1.0 / 3, 0.5}).value == Catch::Approx(1.0 / 6));

  for (int rep = 0; rep < 100; ++rep) {
    const RefPoint p = random_interior_point();
    double sum = 0.0;
    Vec3 gsum = Vec3::Zero();
    for (int v = 0; v < 6; ++v) {
      const ShapeFn s = vertex_shape(v, p);
      sum += s.value;
      gsum += s.grad;
    }
    CHECK(std::abs(sum - 1.0) < 1e-13);
    CHECK(gsum.norm() < 1e-13);
  }

  for (int v = 0; v < 6; ++v)
    check_gradient([v](const RefPoint& p) { return vertex_shape(v, p); });
}

TEST_CASE("triangle edge shape functions") {
  // Edge 0-1, ell = 0 at (0.5, 0, 0): mu0 lambda1 lambda0 = 0.25.
  CHECK(tri_edge_shape(0, 0, {0.5, 0, 0}).value == Catch::Approx(0.25));

  // Vanishes on edge 1-2 (lambda0 = 0) for any ell.
  for (int ell = 0; ell < 4; ++ell)
    for (double s : {0.1, 0.5, 0.9})
      CHECK(std::abs(tri_edge_shape(0, ell, {1.0 - s, s, 0}).value) < 1e-15);

  // Odd-degree reversal antisymmetry.
  const RefPoint p{0.6, 0.0, 0.0};
  CHECK(tri_edge_shape(0, 1, p, false).value ==
        Catch::Approx(-tri_edge_shape(0, 1, p, true).value));
  CHECK(tri_edge_shape(0, 2, p, false).value ==
        Catch::Approx(tri_edge_shape(0, 2, p, true).value));

  for (int e = 0; e < 6; ++e)
    for (int ell : {0, 1, 3})
      check_gradient(
          [e, ell](const RefPoint& p) { return tri_edge_shape(e, ell, p, false); });
  check_gradient([](const RefPoint& p) { return tri_edge_shape(1, 2, p, true); });
}

TEST_CASE("quadrilateral edge shape functions") {
  CHECK(quad_edge_shape(0, 0, {0, 0, 0.5}).value == Catch::Approx(0.25));
  CHECK(quad_edge_shape(1, 0, {1, 0, 0.5}).value == Catch::Approx(0.25));
  for (int e = 0; e < 3; ++e)
    for (int ell = 0; ell < 3; ++ell) {
      CHECK(std::abs(quad_edge_shape(e, ell, {0.2, 0.3, 0.0}).value) < 1e-15);
      CHECK(std::abs(quad_edge_shape(e, ell, {0.2, 0.3, 1.0}).value) < 1e-15);
    }
  const RefPoint p{0.0, 0.0, 0.3};
  CHECK(quad_edge_shape(0, 1, p, false).value ==
        Catch::Approx(-quad_edge_shape(0, 1, p, true).value));
  for (int e = 0; e < 3; ++e)
    for (int ell : {0, 2})
      check_gradient(
          [e, ell](const RefPoint& p) { return quad_edge_shape(e, ell, p); });
}

TEST_CASE("triangle face shape functions") {
  CHECK(tri_face_shape(0, 0, 0, {1.0 / 3, 1.0 / 3, 0}).value ==
        Catch::Approx(1.0 / 27));
  // mu0 factor kills face 0 functions on the top plane.
  CHECK(std::abs(tri_face_shape(0, 1, 1, {0.2, 0.3, 1.0}).value) < 1e-15);
  // Bubble factor kills them on all triangle edges.
  CHECK(std::abs(tri_face_shape(0, 0, 0, {0.5, 0.0, 0.0}).value) < 1e-15);
  CHECK(std::abs(tri_face_shape(0, 0, 0, {0.5, 0.5, 0.0}).value) < 1e-15);
  CHECK(std::abs(tri_face_shape(0, 0, 0, {0.0, 0.4, 0.0}).value) < 1e-15);
  for (int f = 0; f < 2; ++f)
    check_gradient([f](const RefPoint& p) { return tri_face_shape(f, 1, 0, p); });
}

TEST_CASE("quadrilateral face shape functions") {
  CHECK(quad_face_shape(0, 0, 0, {0.5, 0, 0.5}).value == Catch::Approx(0.0625));
  for (int f = 0; f < 3; ++f) {
    CHECK(std::abs(quad_face_shape(f, 0, 1, {0.2, 0.3, 0.0}).value) < 1e-15);
    CHECK(std::abs(quad_face_shape(f, 0, 1, {0.2, 0.3, 1.0}).value) < 1e-15);
  }
  // lambda_i lambda_j factor: zero where lambda0 = 0 or lambda1 = 0.
  CHECK(std::abs(quad_face_shape(0, 0, 0, {0.6, 0.4, 0.5}).value) < 1e-15);
  CHECK(std::abs(quad_face_shape(0, 0, 0, {0.0, 0.4, 0.5}).value) < 1e-15);
  const RefPoint p{0.3, 0.0, 0.4};
  CHECK(quad_face_shape(0, 0, 1, p, false).value ==
        Catch::Approx(-quad_face_shape(0, 0, 1, p, true).value));
  for (int f = 0; f < 3; ++f)
    check_gradient(
        [f](const RefPoint& p) { return quad_face_shape(f, 1, 1, p, false); });
}

TEST_CASE("volume shape functions") {
  CHECK(volume_shape(0, 0, 0, {1.0 / 3, 1.0 / 3, 0.5}).value ==
        Catch::Approx(0.25 / 27));
  // Zero on all five faces.
  CHECK(std::abs(volume_shape(0, 0, 0, {0.2, 0.3, 0.0}).value) < 1e-15);
  CHECK(std::abs(volume_shape(0, 0, 0, {0.2, 0.3, 1.0}).value) < 1e-15);
  CHECK(std::abs(volume_shape(1, 0, 0, {0.0, 0.3, 0.5}).value) < 1e-15);
  CHECK(std::abs(volume_shape(1, 0, 0, {0.3, 0.0, 0.5}).value) < 1e-15);
  CHECK(std::abs(volume_shape(1, 0, 0, {0.6, 0.4, 0.5}).value) < 1e-15);
  check_gradient([](const RefPoint& p) { return volume_shape(0, 1, 0, p); });
  check_gradient([](const RefPoint& p) { return volume_shape(1, 0, 1, p); });
}

TEST_CASE("entity trace property") {
  // Sample points of each sub-entity of the prism.
  struct Entity {
    EntityKind kind;
    int index;
    std::function<RefPoint(double, double)> param;
  };
  const auto lerp = [](const RefPoint& a, const RefPoint& b, double t) {
    return RefPoint{a.xi + t * (b.xi - a.xi), a.eta + t * (b.eta - a.eta),
                    a.zeta + t * (b.zeta - a.zeta)};
  };
  const RefPoint verts[6] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                             {0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
  const int tri_edges[6][2] = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
  std::vector<Entity> entities;
  for (int v = 0; v < 6; ++v)
    entities.push_back({EntityKind::Vertex, v,
                        [=](double, double) { return verts[v]; }});
  for (int e = 0; e < 6; ++e)
    entities.push_back({EntityKind::TriEdge, e, [=](double s, double) {
                          return lerp(verts[tri_edges[e][0]], verts[tri_edges[e][1]], s);
                        }});
  for (int e = 0; e < 3; ++e)
    entities.push_back({EntityKind::QuadEdge, e, [=](double s, double) {
                          return lerp(verts[e], verts[e + 3], s);
                        }});
  for (int f = 0; f < 2; ++f)
    entities.push_back({EntityKind::TriFace, f, [=](double s, double t) {
                          double a = s, b = t * (1.0 - s);
                          return RefPoint{a, b, static_cast<double>(f)};
                        }});
  const int quad_faces[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int f = 0; f < 3; ++f)
    entities.push_back({EntityKind::QuadFace, f, [=](double s, double t) {
                          RefPoint p = lerp(verts[quad_faces[f][0]],
                                            verts[quad_faces[f][1]], s);
                          p.zeta = t;
                          return p;
                        }});

  // contains(container, member): member entity lies in the container closure.
  const auto contains = [&](EntityKind ck, int ce, EntityKind mk, int me) {
    if (ck == mk && ce == me) return true;
    if (ck == EntityKind::Vertex) return false;
    if (ck == EntityKind::TriEdge)
      return mk == EntityKind::Vertex && (me == tri_edges[ce][0] || me == tri_edges[ce][1]);
    if (ck == EntityKind::QuadEdge)
      return mk == EntityKind::Vertex && (me == ce || me == ce + 3);
    if (ck == EntityKind::TriFace) {
      if (mk == EntityKind::Vertex) return me / 3 == ce;
      if (mk == EntityKind::TriEdge) return me / 3 == ce;
      return false;
    }
    if (ck == EntityKind::QuadFace) {
      const int i = quad_faces[ce][0], j = quad_faces[ce][1];
      if (mk == EntityKind::Vertex) return me % 3 == i || me % 3 == j;
      if (mk == EntityKind::TriEdge) return me % 3 == ce;
      if (mk == EntityKind::QuadEdge) return me == i || me == j;
      return false;
    }
    return true; // the volume contains everything
  };

  // All non-vertex functions of a heterogeneous order-4 prism.
  const PrismOrders orders = PrismOrders::uniform(4, 4);
  const ShapeTable probe = shape_table(orders, {0.2, 0.2, 0.4});
  std::uniform_real_distribution<double> u01(0.03, 0.97);
  for (const auto& entry : probe.entries) {
    if (entry.id.kind == EntityKind::Vertex) continue;
    for (const auto& ent : entities) {
      if (entry.id.kind == EntityKind::Volume) break; // vanishes on all of them
      if (contains(ent.kind, ent.index, entry.id.kind, entry.id.entity)) continue;
      for (int rep = 0; rep < 20; ++rep) {
        const RefPoint p = ent.param(u01(rng), u01(rng));
        const ShapeTable t = shape_table(orders, p);
        double val = 0.0;
        for (const auto& e2 : t.entries) {
          if (e2.id.kind == entry.id.kind && e2.id.entity == entry.id.entity &&
              e2.id.k == entry.id.k && e2.id.l == entry.id.l && e2.id.m == entry.id.m)
            val = e2.value;
        }
        CHECK(std::abs(val) < 1e-13);
      }
    }
  }
  // Volume functions vanish on every face.
  for (const auto& ent : entities) {
    if (ent.kind == EntityKind::Vertex) continue;
    for (int rep = 0; rep < 20; ++rep) {
      const RefPoint p = ent.param(u01(rng), u01(rng));
      CHECK(std::abs(volume_shape(1, 1, 0, p).value) < 1e-13);
    }
  }
}

TEST_CASE("orientation conformity across a shared edge") {
  // Two prisms share a triangle edge with opposite local orderings. Prism 1
  // sees the edge in canonical direction, prism 2 reversed; the globally
  // oriented functions must agree pointwise along the edge.
  for (int ell = 0; ell < 5; ++ell) {
    for (double s : {0.05, 0.2, 0.45, 0.7, 0.95}) {
      const double f1 = tri_edge_shape(0, ell, {s, 0, 0}, false).value;
      const double f2 = tri_edge_shape(0, ell, {1.0 - s, 0, 0}, true).value;
      CHECK(std::abs(f1 - f2) < 1e-13);
    }
  }
  // Same along the in-plane direction of a shared quadrilateral face.
  for (int ell = 0; ell < 4; ++ell)
    for (double s : {0.1, 0.5, 0.8})
      for (double z : {0.25, 0.75}) {
        const double f1 = quad_face_shape(0, 1, ell, {s, 0, z}, false).value;
        const double f2 = quad_face_shape(0, 1, ell, {1.0 - s, 0, z}, true).value;
        CHECK(std::abs(f1 - f2) < 1e-13);
      }
}

TEST_CASE("shape table enumeration and counts") {
  const RefPoint p{0.2, 0.3, 0.4};

  // All orders 1: vertices only.
  CHECK(shape_table(PrismOrders::uniform(1, 1), p).entries.size() == 6);

  // Triangle edge order 3 gives two functions per edge.
  {
    PrismOrders o = PrismOrders::uniform(1, 1);
    o.tri_edge.fill(3);
    const ShapeTable t = shape_table(o, p);
    CHECK(t.entries.size() == 6 + 6 * 2);
  }

  // Full order-2 prism: 6 vertices + 6 edge functions + 3 quad-edge
  // functions + 3 quad-face functions (one per face).
  CHECK(shape_table(PrismOrders::uniform(2, 2), p).entries.size() == 18);

  // Full order-4 prism, counted per the index ranges.
  const ShapeTable t4 = shape_table(PrismOrders::uniform(4, 4), p);
  CHECK(t4.entries.size() == 6 + 6 * 3 + 3 * 3 + 2 * 3 + 3 * 9 + 9);

  // Deterministic canonical order.
  const ShapeTable a = shape_table(PrismOrders::uniform(3, 2), p);
  const ShapeTable b = shape_table(PrismOrders::uniform(3, 2), p);
  REQUIRE(a.entries.size() == b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].id.kind == b.entries[i].id.kind);
    CHECK(a.entries[i].value == b.entries[i].value);
  }

  // u/thickness split covers the full table.
  const PrismOrders o = PrismOrders::uniform(3, 2);
  CHECK(tabulate_u(o, p).entries.size() + tabulate_thickness(o, p).entries.size() ==
        shape_table(o, p).entries.size());
}

TEST_CASE("shape table gradients match finite differences") {
  const PrismOrders orders = PrismOrders::uniform(4, 3);
  for (int rep = 0; rep < 5; ++rep) {
    const RefPoint p = random_interior_point();
    const ShapeTable t = shape_table(orders, p);
    const double h = 1e-6;
    for (size_t i = 0; i < t.entries.size(); ++i) {
      Vec3 fd;
      const double base[3] = {p.xi, p.eta, p.zeta};
      for (int d = 0; d < 3; ++d) {
        double hi[3] = {base[0], base[1], base[2]};
        double lo[3] = {base[0], base[1], base[2]};
        hi[d] += h;
        lo[d] -= h;
        fd(d) = (shape_table(orders, {hi[0], hi[1], hi[2]}).entries[i].value -
                 shape_table(orders, {lo[0], lo[1], lo[2]}).entries[i].value) /
                (2 * h);
      }
      const double scale = std::max(1.0, t.entries[i].grad.norm());
      CHECK((t.entries[i].grad - fd).norm() / scale < 1e-8);
    }
  }
}
