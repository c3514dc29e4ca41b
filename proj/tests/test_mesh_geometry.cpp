#include <catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "prismshell/geometry.hpp"
#include "prismshell/mesh.hpp"
#include "prismshell/quadrature.hpp"

using namespace prismshell;

namespace {

ShellMesh flat_grid(int nx, int ny, double lx = 1.0, double ly = 1.0) {
  ShellMesh m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.X.push_back(Vec3(lx * i / nx, ly * j / ny, 0.0));
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.finalize();
  return m;
}

ShellMesh cylinder_patch(int n, double R, double span, double length) {
  ShellMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double phi = span * i / n;
      m.X.push_back(Vec3(R * std::sin(phi), length * j / n, R * std::cos(phi)));
    }
  auto id = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.finalize();
  return m;
}

} // namespace

TEST_CASE("compute_directors") {
  SECTION("flat plate gives the plane normal everywhere") {
    ShellMesh m = flat_grid(4, 3);
    compute_directors(m);
    for (const auto& d : m.director) CHECK((d - Vec3(0, 0, 1)).norm() < 1e-14);
  }
  SECTION("single triangle gives its unit normal") {
    ShellMesh m;
    m.X = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 0, 3)};
    m.tris = {{0, 1, 2}};
    m.finalize();
    compute_directors(m);
    for (const auto& d : m.director) CHECK((d - Vec3(0, -1, 0)).norm() < 1e-14);
  }
  SECTION("fine cylinder approximates the radial direction") {
    const int n = 24;
    ShellMesh m = cylinder_patch(n, 10.0, 0.8, 8.0);
    compute_directors(m);
    // Interior nodes; patch-boundary nodes see one-sided averages.
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i) {
        const int id = j * (n + 1) + i;
        const Vec3 radial = Vec3(m.X[id].x(), 0.0, m.X[id].z()).normalized();
        CHECK((m.director[id] - radial).norm() < 1e-3);
      }
  }
  SECTION("degenerate triangle is reported by id") {
    ShellMesh m;
    m.X = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(0, 1, 0)};
    m.tris = {{0, 1, 3}, {0, 1, 2}};
    m.finalize();
    try {
      compute_directors(m);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
  }
}

TEST_CASE("mesh connectivity and validation") {
  ShellMesh m = flat_grid(2, 2);
  // Euler: V - E + F = 1 for a disc.
  CHECK(m.n_nodes() - m.n_edges() + m.n_tris() == 1);
  // Shared edges appear once.
  std::set<std::array<int, 2>> uniq(m.edges.begin(), m.edges.end());
  CHECK(uniq.size() == m.edges.size());

  compute_directors(m);
  set_uniform_thickness(m, 0.1);
  validate(m);

  ShellMesh bad = m;
  bad.director[0] = Vec3(0, 0, 2);
  CHECK_THROWS_AS(validate(bad), Error);
  bad = m;
  bad.thickness[2] = -1.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("mesh file round trip") {
  ShellMesh m = cylinder_patch(3, 5.0, 0.6, 4.0);
  compute_directors(m);
  set_uniform_thickness(m, 0.25);
  m.node_sets["rim"] = {0, 1, 2, 3};
  m.tri_sets["all"] = {0, 1, 2};
  const std::string path = "roundtrip_mesh.txt";
  save_mesh(m, path);
  const ShellMesh r = load_mesh(path);
  REQUIRE(r.n_nodes() == m.n_nodes());
  REQUIRE(r.n_tris() == m.n_tris());
  for (int i = 0; i < m.n_nodes(); ++i) {
    CHECK((r.X[i] - m.X[i]).norm() == 0.0);
    CHECK((r.director[i] - m.director[i]).norm() == 0.0);
    CHECK(r.thickness[i] == m.thickness[i]);
  }
  CHECK(r.tris == m.tris);
  CHECK(r.node_sets.at("rim") == m.node_sets.at("rim"));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_mesh("does_not_exist.mesh"), Error);
}

TEST_CASE("spin operator") {
  CHECK((spin(Vec3(1, 0, 0)) * Vec3(0, 1, 0) - Vec3(0, 0, 1)).norm() == 0.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 10; ++rep) {
    const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
    CHECK((spin(a) * b - a.cross(b)).norm() < 1e-15);
    CHECK((spin(a) * a).norm() < 1e-15);
    CHECK((spin(a).transpose() + spin(a)).norm() == 0.0);
  }
}

TEST_CASE("reference position") {
  ElementGeometry g;
  g.Z = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  g.D = {Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3(0, 0, 1)};
  g.a = {2.0, 2.0, 2.0};
  g.T0 = {Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)};
  g.T1 = {Vec3(0, 1, 0), Vec3(0, 1, 0), Vec3(0, 1, 0)};

  // Mid-surface at zeta = 1/2.
  CHECK((g.position({0.3, 0.2, 0.5}) - Vec3(0.3, 0.2, 0.0)).norm() < 1e-15);
  // Flat plate with a = 2 at zeta = 1.
  CHECK((g.position({0.3, 0.2, 1.0}) - Vec3(0.3, 0.2, 1.0)).norm() < 1e-15);
  // Top/bottom average recovers the mid-surface.
  const Vec3 avg = 0.5 * (g.position({0.2, 0.3, 1.0}) + g.position({0.2, 0.3, 0.0}));
  CHECK((avg - g.position({0.2, 0.3, 0.5})).norm() < 1e-15);
}

TEST_CASE("jacobian matches finite differences of the position") {
  ElementGeometry g;
  g.Z = {Vec3(0.1, -0.05, 0.02), Vec3(1.2, 0.1, 0.3), Vec3(-0.1, 0.9, -0.2)};
  g.D = {Vec3(0.1, 0.2, 1).normalized(), Vec3(-0.1, 0.1, 1).normalized(),
         Vec3(0.05, -0.15, 1).normalized()};
  g.a = {0.3, 0.35, 0.4};
  g.derive_tangents(Vec3(1, 0, 0));
  const double h = 1e-6;
  for (const RefPoint p : {RefPoint{0.2, 0.3, 0.4}, RefPoint{0.5, 0.1, 0.9}}) {
    const Mat3 J = g.jacobian(p);
    Mat3 Jfd;
    const double base[3] = {p.xi, p.eta, p.zeta};
    for (int d = 0; d < 3; ++d) {
      double hi[3] = {base[0], base[1], base[2]}, lo[3] = {base[0], base[1], base[2]};
      hi[d] += h;
      lo[d] -= h;
      Jfd.col(d) = (g.position({hi[0], hi[1], hi[2]}) -
                    g.position({lo[0], lo[1], lo[2]})) /
                   (2 * h);
    }
    CHECK((J - Jfd).norm() / J.norm() < 1e-7);
  }

  // Flat unit-thickness plate: G_2 = a D.
  ElementGeometry flat;
  flat.Z = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  flat.D = {Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3(0, 0, 1)};
  flat.a = {1, 1, 1};
  flat.T0 = {Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)};
  flat.T1 = {Vec3(0, 1, 0), Vec3(0, 1, 0), Vec3(0, 1, 0)};
  CHECK((flat.jacobian({0.2, 0.2, 0.7}).col(2) - Vec3(0, 0, 1)).norm() < 1e-15);

  // In-plane frame vectors do not depend on zeta.
  const RefFrame f1 = g.frame({0.2, 0.3, 0.1});
  const RefFrame f2 = g.frame({0.2, 0.3, 0.9});
  CHECK((f1.G.col(0) - f2.G.col(0)).norm() == 0.0);
  CHECK((f1.G.col(1) - f2.G.col(1)).norm() == 0.0);

  // Inverted element raises.
  ElementGeometry inv = flat;
  std::swap(inv.Z[1], inv.Z[2]);
  CHECK_THROWS_AS(inv.frame({0.2, 0.2, 0.5}), Error);
}

TEST_CASE("curvilinear basis duality and metric") {
  ElementGeometry g;
  g.Z = {Vec3(0.1, -0.05, 0.02), Vec3(1.2, 0.1, 0.3), Vec3(-0.1, 0.9, -0.2)};
  g.D = {Vec3(0.1, 0.2, 1).normalized(), Vec3(-0.1, 0.1, 1).normalized(),
         Vec3(0.05, -0.15, 1).normalized()};
  g.a = {0.3, 0.35, 0.4};
  g.derive_tangents(Vec3(1, 0, 0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.45);
  for (int rep = 0; rep < 10; ++rep) {
    const RefFrame f = g.frame({u(rng), u(rng), 2 * u(rng)});
    CHECK((f.G.transpose() * f.Gc - Mat3::Identity()).norm() < 1e-12);
    CHECK((f.Gup - f.Gup.transpose()).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Mat3> es(f.Gup);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  // Flat plate: G_2 along the normal; orthonormal tangents with a = 1 give
  // |G_2| = 1.
  ElementGeometry flat;
  flat.Z = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  flat.D = {Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3(0, 0, 1)};
  flat.a = {1, 1, 1};
  flat.T0 = {Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)};
  flat.T1 = {Vec3(0, 1, 0), Vec3(0, 1, 0), Vec3(0, 1, 0)};
  const RefFrame f = flat.frame({0.25, 0.25, 0.5});
  CHECK((f.G.col(2) - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK(f.G.col(2).norm() == Catch::Approx(1.0));
}

TEST_CASE("volume consistency of det J") {
  // Flat slab: integrating det J over the reference prism gives area x thickness.
  ElementGeometry g;
  g.Z = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0.5, 1.5, 0)};
  g.D = {Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3(0, 0, 1)};
  g.a = {0.37, 0.37, 0.37};
  g.T0 = {Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)};
  g.T1 = {Vec3(0, 1, 0), Vec3(0, 1, 0), Vec3(0, 1, 0)};
  const double area = 0.5 * (g.Z[1] - g.Z[0]).cross(g.Z[2] - g.Z[0]).norm();
  const Quadrature q = make_quadrature(3, 2);
  double vol = 0.0;
  for (const auto& [p, w] : q.points) vol += w * g.frame(p).detJ;
  CHECK(vol == Catch::Approx(area * 0.37).epsilon(1e-10));
}
