#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "prismshell/mesh.hpp"
#include "prismshell/problem.hpp"

namespace prismshell {

/// Geometry, material and loading data of one benchmark (the published
/// values; NaN where a parameter does not apply).
struct BenchmarkSpec {
  std::string name;
  double length = std::numeric_limits<double>::quiet_NaN();
  double radius = std::numeric_limits<double>::quiet_NaN();
  double radius_inner = std::numeric_limits<double>::quiet_NaN();
  double radius_outer = std::numeric_limits<double>::quiet_NaN();
  double thickness = 0.0;
  double theta_deg = std::numeric_limits<double>::quiet_NaN();
  double young = 0.0;
  double poisson = 0.0;
  double point_force = std::numeric_limits<double>::quiet_NaN();
  double distributed_force = std::numeric_limits<double>::quiet_NaN();
  double symmetry_fraction = 1.0;
  int default_density = 8;
};

/// The built-in benchmarks: linear pinched cylinder (PC-L), Scordelis-Lo
/// roof (SLR), slit annular plate (SAP), hemispherical shell (HS), pull-out
/// cylinder (POC) and pinched cylinder (PC).
inline std::vector<BenchmarkSpec> benchmark_registry() {
  std::vector<BenchmarkSpec> r;
  {
    BenchmarkSpec b;
    b.name = "PC-L";
    b.length = 600;
    b.radius = 300;
    b.thickness = 3;
    b.young = 3;
    b.poisson = 0.3;
    b.point_force = 1;
    b.symmetry_fraction = 0.125;
    b.default_density = 8;
    r.push_back(b);
  }
  {
    BenchmarkSpec b;
    b.name = "SLR";
    b.length = 50;
    b.radius = 25;
    b.thickness = 0.25;
    b.theta_deg = 40;
    b.young = 4.32e8;
    b.poisson = 0.0;
    b.distributed_force = 90;
    b.symmetry_fraction = 0.25;
    b.default_density = 8;
    r.push_back(b);
  }
  {
    BenchmarkSpec b;
    b.name = "SAP";
    b.radius_inner = 6;
    b.radius_outer = 10;
    b.thickness = 0.03;
    b.young = 21e6;
    b.poisson = 0.0;
    b.distributed_force = 0.8;
    b.symmetry_fraction = 1.0;
    b.default_density = 3;
    r.push_back(b);
  }
  {
    BenchmarkSpec b;
    b.name = "HS";
    b.radius = 10;
    b.thickness = 0.04;
    b.theta_deg = 18;
    b.young = 6.825e7;
    b.poisson = 0.3;
    b.point_force = 400;
    b.symmetry_fraction = 0.25;
    b.default_density = 7;
    r.push_back(b);
  }
  {
    BenchmarkSpec b;
    b.name = "POC";
    b.length = 10.35;
    b.radius = 4.953;
    b.thickness = 0.094;
    b.young = 10.5e6;
    b.poisson = 0.3125;
    b.point_force = 40000;
    b.symmetry_fraction = 0.125;
    b.default_density = 8;
    r.push_back(b);
  }
  {
    BenchmarkSpec b;
    b.name = "PC";
    b.length = 200;
    b.radius = 100;
    b.thickness = 1;
    b.young = 30e3;
    b.poisson = 0.3;
    b.point_force = 12000;
    b.symmetry_fraction = 0.125;
    b.default_density = 8;
    r.push_back(b);
  }
  return r;
}

inline BenchmarkSpec find_benchmark(const std::string& name) {
  for (const auto& b : benchmark_registry())
    if (b.name == name) return b;
  throw Error("unknown benchmark: " + name);
}

/// A ready-to-run case: mesh with sets, boundary conditions, loads at the
/// target level (lambda = 1) and monitored nodes. `target_load` is the
/// published full-structure load reported in the trace.
struct BenchmarkCase {
  BenchmarkSpec spec;
  ShellMesh mesh;
  std::vector<BCSpec> bcs;
  LoadProgram loads;
  std::vector<std::pair<std::string, int>> monitors;
  double target_load = 1.0;
};

namespace bench_detail {

struct Grid {
  int ni, nj;
  std::vector<int> ids;
  int id(int i, int j) const { return ids[j * (ni + 1) + i]; }
};

// Structured grid of (ni x nj) quads split into triangles, with node
// positions and directors from a chart.
struct ChartPoint {
  Vec3 X, D, T0, T1;
};

template <class Chart>
Grid add_grid(ShellMesh& m, int ni, int nj, Chart&& chart) {
  Grid g{ni, nj, {}};
  g.ids.resize((ni + 1) * (nj + 1));
  for (int j = 0; j <= nj; ++j)
    for (int i = 0; i <= ni; ++i) {
      const ChartPoint cp =
          chart(static_cast<double>(i) / ni, static_cast<double>(j) / nj);
      g.ids[j * (ni + 1) + i] = static_cast<int>(m.X.size());
      m.X.push_back(cp.X);
      m.director.push_back(cp.D);
      m.tangent0.push_back(cp.T0);
      m.tangent1.push_back(cp.T1);
    }
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) {
      const int n00 = g.id(i, j), n10 = g.id(i + 1, j);
      const int n11 = g.id(i + 1, j + 1), n01 = g.id(i, j + 1);
      m.tris.push_back({n00, n10, n11});
      m.tris.push_back({n00, n11, n01});
    }
  return g;
}

inline std::vector<int> grid_row(const Grid& g, int j) {
  std::vector<int> out;
  for (int i = 0; i <= g.ni; ++i) out.push_back(g.id(i, j));
  return out;
}

inline std::vector<int> grid_col(const Grid& g, int i) {
  std::vector<int> out;
  for (int j = 0; j <= g.nj; ++j) out.push_back(g.id(i, j));
  return out;
}

} // namespace bench_detail

/// Scordelis-Lo roof quadrant: cylinder of radius R, half-angle theta, with
/// the crown along x = 0, diaphragm at y = L/2, free edge at the full angle.
/// Self-weight acts along -z.
inline BenchmarkCase make_slr(int n_arc = 8, int n_len = 8) {
  BenchmarkCase c;
  c.spec = find_benchmark("SLR");
  const double R = c.spec.radius, L = c.spec.length;
  const double theta = c.spec.theta_deg * M_PI / 180.0;
  auto chart = [&](double s, double t) {
    const double phi = theta * s;
    const Vec3 D(std::sin(phi), 0.0, std::cos(phi));
    return bench_detail::ChartPoint{Vec3(R * std::sin(phi), 0.5 * L * t, R * std::cos(phi)),
                                    D, Vec3(std::cos(phi), 0.0, -std::sin(phi)),
                                    Vec3(0, 1, 0)};
  };
  const auto g = bench_detail::add_grid(c.mesh, n_arc, n_len, chart);
  set_uniform_thickness(c.mesh, c.spec.thickness);
  c.mesh.node_sets["crown"] = bench_detail::grid_col(g, 0);
  c.mesh.node_sets["midspan"] = bench_detail::grid_row(g, 0);
  c.mesh.node_sets["diaphragm"] = bench_detail::grid_row(g, n_len);
  c.mesh.node_sets["free_edge"] = bench_detail::grid_col(g, n_arc);
  c.mesh.node_sets["A"] = {g.id(n_arc, 0)};
  c.mesh.finalize();
  c.bcs = {{"crown", {true, false, false}},
           {"midspan", {false, true, false}},
           {"diaphragm", {true, false, true}}};
  c.loads.surfaces.push_back({Vec3(0, 0, -c.spec.distributed_force)});
  c.monitors = {{"A", g.id(n_arc, 0)}};
  c.target_load = c.spec.distributed_force;
  return c;
}

/// Perforated Scordelis-Lo roof quadrant: the development of the quadrant is
/// an (arc-length x axial) rectangle; triangles touching a grid of discs of
/// the given radius are removed (holes are resolved at mesh resolution).
inline BenchmarkCase make_slr_perforated(int n_arc = 16, int n_len = 20,
                                         int holes_arc = 3, int holes_len = 4,
                                         double hole_radius = 0.3) {
  BenchmarkCase c = make_slr(n_arc, n_len);
  const double R = c.spec.radius, L = c.spec.length;
  const double theta = c.spec.theta_deg * M_PI / 180.0;
  const double S = R * theta; // developed arc length
  auto develop = [&](const Vec3& X) {
    return Vec2(R * std::atan2(X.x(), X.z()), X.y());
  };
  auto tri_hits_disc = [&](const std::array<int, 3>& tri, const Vec2& ctr, double r) {
    // Distance from the disc centre to the triangle in the development.
    Vec2 p[3];
    for (int k = 0; k < 3; ++k) p[k] = develop(c.mesh.X[tri[k]]);
    double dmin = std::numeric_limits<double>::max();
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = p[k], b = p[(k + 1) % 3];
      const Vec2 ab = b - a;
      const double t = std::clamp((ctr - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      dmin = std::min(dmin, (a + t * ab - ctr).norm());
    }
    // Inside test by sign of cross products.
    int pos = 0, neg = 0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = p[k], b = p[(k + 1) % 3];
      const double cr = (b.x() - a.x()) * (ctr.y() - a.y()) -
                        (b.y() - a.y()) * (ctr.x() - a.x());
      (cr >= 0 ? pos : neg)++;
    }
    if (pos == 3 || neg == 3) return true;
    return dmin <= r;
  };
  std::vector<Vec2> centres;
  for (int ih = 0; ih < holes_arc; ++ih)
    for (int jh = 0; jh < holes_len; ++jh)
      centres.push_back(Vec2(S * (ih + 1.0) / (holes_arc + 1.0),
                             0.5 * L * (jh + 1.0) / (holes_len + 1.0)));
  std::vector<std::array<int, 3>> kept;
  for (const auto& tri : c.mesh.tris) {
    bool hit = false;
    for (const auto& ctr : centres)
      if (tri_hits_disc(tri, ctr, hole_radius)) {
        hit = true;
        break;
      }
    if (!hit) kept.push_back(tri);
  }
  // Compact unused nodes and remap sets.
  std::vector<int> remap(c.mesh.X.size(), -1);
  ShellMesh m2;
  m2.node_sets = {};
  for (auto& tri : kept) {
    for (int& n : tri) {
      if (remap[n] < 0) {
        remap[n] = static_cast<int>(m2.X.size());
        m2.X.push_back(c.mesh.X[n]);
        m2.director.push_back(c.mesh.director[n]);
        m2.thickness.push_back(c.mesh.thickness[n]);
        m2.tangent0.push_back(c.mesh.tangent0[n]);
        m2.tangent1.push_back(c.mesh.tangent1[n]);
      }
      n = remap[n];
    }
    m2.tris.push_back(tri);
  }
  for (const auto& [name, ids] : c.mesh.node_sets) {
    std::vector<int> mapped;
    for (int n : ids)
      if (remap[n] >= 0) mapped.push_back(remap[n]);
    m2.node_sets[name] = mapped;
  }
  m2.finalize();
  c.mesh = std::move(m2);
  c.monitors = {{"A", c.mesh.node_sets.at("A").at(0)}};
  return c;
}

namespace bench_detail {

// Cylinder octant grid used by PC-L, POC and PC: i along the circumference
// (phi in [0, 90deg] from the crown), j along the axis (y in [0, L/2]).
inline Grid cylinder_octant(ShellMesh& m, double R, double L, int n_phi, int n_len) {
  auto chart = [&](double s, double t) {
    const double phi = 0.5 * M_PI * s;
    const Vec3 D(std::sin(phi), 0.0, std::cos(phi));
    return ChartPoint{Vec3(R * std::sin(phi), 0.5 * L * t, R * std::cos(phi)), D,
                      Vec3(std::cos(phi), 0.0, -std::sin(phi)), Vec3(0, 1, 0)};
  };
  return add_grid(m, n_phi, n_len, chart);
}

} // namespace bench_detail

/// Pinched cylinder (1/8 model): point load at the crown mid-length, rigid
/// diaphragm at the far end. Used for both the linear locking study (PC-L)
/// and the nonlinear benchmark (PC).
inline BenchmarkCase make_pinched_cylinder(const std::string& which, int n_phi = 8,
                                           int n_len = 8) {
  BenchmarkCase c;
  c.spec = find_benchmark(which);
  const auto g = bench_detail::cylinder_octant(c.mesh, c.spec.radius, c.spec.length,
                                               n_phi, n_len);
  set_uniform_thickness(c.mesh, c.spec.thickness);
  c.mesh.node_sets["crown"] = bench_detail::grid_col(g, 0);        // x = 0 plane
  c.mesh.node_sets["side"] = bench_detail::grid_col(g, n_phi);     // z = 0 plane
  c.mesh.node_sets["midspan"] = bench_detail::grid_row(g, 0);      // y = 0 plane
  c.mesh.node_sets["diaphragm"] = bench_detail::grid_row(g, n_len);
  c.mesh.node_sets["A"] = {g.id(0, 0)};
  c.mesh.node_sets["B"] = {g.id(n_phi, 0)};
  c.mesh.finalize();
  c.bcs = {{"crown", {true, false, false}},
           {"side", {false, false, true}},
           {"midspan", {false, true, false}},
           {"diaphragm", {true, false, true}}};
  // Full pinch force P, shared by four mirror images at the load point.
  c.loads.points.push_back({g.id(0, 0), Vec3(0, 0, -0.25 * c.spec.point_force)});
  c.monitors = {{"A", g.id(0, 0)}, {"B", g.id(n_phi, 0)}};
  c.target_load = c.spec.point_force;
  return c;
}

/// Open-ended cylinder under pull-out forces (1/8 model): radial outward
/// load at mid-length, free far end.
inline BenchmarkCase make_poc(int n_phi = 8, int n_len = 8) {
  BenchmarkCase c;
  c.spec = find_benchmark("POC");
  const auto g = bench_detail::cylinder_octant(c.mesh, c.spec.radius, c.spec.length,
                                               n_phi, n_len);
  set_uniform_thickness(c.mesh, c.spec.thickness);
  c.mesh.node_sets["crown"] = bench_detail::grid_col(g, 0);
  c.mesh.node_sets["side"] = bench_detail::grid_col(g, n_phi);
  c.mesh.node_sets["midspan"] = bench_detail::grid_row(g, 0);
  c.mesh.node_sets["A"] = {g.id(0, 0)};
  c.mesh.node_sets["B"] = {g.id(n_phi, 0)};
  c.mesh.node_sets["C"] = {g.id(n_phi, n_len)};
  c.mesh.finalize();
  c.bcs = {{"crown", {true, false, false}},
           {"side", {false, false, true}},
           {"midspan", {false, true, false}}};
  c.loads.points.push_back({g.id(0, 0), Vec3(0, 0, 0.25 * c.spec.point_force)});
  c.monitors = {{"A", g.id(0, 0)}, {"B", g.id(n_phi, 0)}, {"C", g.id(n_phi, n_len)}};
  c.target_load = c.spec.point_force;
  return c;
}

/// Hemispherical shell with an 18 degree pole cutout (quadrant model):
/// alternating point loads at the equator, vertical support along the
/// bottom edge.
inline BenchmarkCase make_hs(int n = 7) {
  BenchmarkCase c;
  c.spec = find_benchmark("HS");
  const double R = c.spec.radius;
  const double cut = c.spec.theta_deg * M_PI / 180.0;
  auto chart = [&](double s, double t) {
    // i (s): polar angle from the cutout to the equator; j (t): azimuth.
    const double thp = cut + (0.5 * M_PI - cut) * s;
    const double phi = 0.5 * M_PI * t;
    const Vec3 D(std::sin(thp) * std::cos(phi), std::sin(thp) * std::sin(phi),
                 std::cos(thp));
    const Vec3 T0(std::cos(thp) * std::cos(phi), std::cos(thp) * std::sin(phi),
                  -std::sin(thp));
    return bench_detail::ChartPoint{Vec3(R * D), D, T0,
                                    Vec3(-std::sin(phi), std::cos(phi), 0)};
  };
  const auto g = bench_detail::add_grid(c.mesh, n, n, chart);
  set_uniform_thickness(c.mesh, c.spec.thickness);
  c.mesh.node_sets["sym_y"] = bench_detail::grid_row(g, 0); // y = 0 plane
  c.mesh.node_sets["sym_x"] = bench_detail::grid_row(g, n); // x = 0 plane
  c.mesh.node_sets["bottom"] = bench_detail::grid_col(g, n);
  c.mesh.node_sets["A"] = {g.id(n, 0)};
  c.mesh.node_sets["B"] = {g.id(n, n)};
  c.mesh.finalize();
  c.bcs = {{"sym_y", {false, true, false}},
           {"sym_x", {true, false, false}},
           {"bottom", {false, false, true}}};
  // Inward at A = (R,0,0), outward at B = (0,R,0); each shared by two
  // mirror images.
  c.loads.points.push_back({g.id(n, 0), Vec3(-0.5 * c.spec.point_force, 0, 0)});
  c.loads.points.push_back({g.id(n, n), Vec3(0, 0.5 * c.spec.point_force, 0)});
  c.monitors = {{"A", g.id(n, 0)}, {"B", g.id(n, n)}};
  c.target_load = c.spec.point_force;
  return c;
}

/// Slit annular plate: a full annulus cut along one radial line; one side of
/// the slit clamped, the other carrying a vertical line load.
inline BenchmarkCase make_sap(int n_r = 3, int n_th = 24) {
  BenchmarkCase c;
  c.spec = find_benchmark("SAP");
  const double Ri = c.spec.radius_inner, Ro = c.spec.radius_outer;
  auto chart = [&](double s, double t) {
    const double r = Ri + (Ro - Ri) * s;
    const double th = 2.0 * M_PI * t;
    return bench_detail::ChartPoint{Vec3(r * std::cos(th), r * std::sin(th), 0.0),
                                    Vec3(0, 0, 1),
                                    Vec3(std::cos(th), std::sin(th), 0),
                                    Vec3(-std::sin(th), std::cos(th), 0)};
  };
  const auto g = bench_detail::add_grid(c.mesh, n_r, n_th, chart);
  set_uniform_thickness(c.mesh, c.spec.thickness);
  c.mesh.node_sets["loaded_edge"] = bench_detail::grid_row(g, 0);
  c.mesh.node_sets["clamped_edge"] = bench_detail::grid_row(g, n_th);
  c.mesh.node_sets["A"] = {g.id(0, 0)};
  c.mesh.node_sets["B"] = {g.id(n_r, 0)};
  c.mesh.finalize();
  c.bcs = {{"clamped_edge", {true, true, true}}};
  c.loads.edges.push_back({"loaded_edge", Vec3(0, 0, c.spec.distributed_force)});
  c.monitors = {{"A", g.id(0, 0)}, {"B", g.id(n_r, 0)}};
  c.target_load = c.spec.distributed_force;
  return c;
}

/// Dispatch by registry name. `density` scales the default structured grid.
inline BenchmarkCase make_benchmark(const std::string& name, int density = 0) {
  if (name == "SLR") return make_slr(density > 0 ? density : 8, density > 0 ? density : 8);
  if (name == "SLR-perforated")
    return make_slr_perforated(density > 0 ? 2 * density : 16,
                               density > 0 ? 2 * density + 4 : 20);
  if (name == "PC-L")
    return make_pinched_cylinder("PC-L", density > 0 ? density : 8,
                                 density > 0 ? density : 8);
  if (name == "PC")
    return make_pinched_cylinder("PC", density > 0 ? density : 8,
                                 density > 0 ? density : 8);
  if (name == "POC") return make_poc(density > 0 ? density : 8, density > 0 ? density : 8);
  if (name == "HS") return make_hs(density > 0 ? density : 7);
  if (name == "SAP") return make_sap(density > 0 ? density : 3,
                                     density > 0 ? 8 * density : 24);
  throw Error("unknown benchmark: " + name);
}

} // namespace prismshell
