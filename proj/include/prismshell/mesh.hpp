#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prismshell/core.hpp"

namespace prismshell {

/// Mid-surface shell mesh: triangles with nodal positions, directors and
/// thickness, plus named node/edge/triangle sets for boundary conditions
/// and loads. Immutable once finalized.
struct ShellMesh {
  std::vector<Vec3> X;
  std::vector<Vec3> director;     // unit length; empty until computed/assigned
  std::vector<double> thickness;  // per node; empty until assigned
  // Nodal in-plane tangent pair spanning the local curvilinear frame; a
  // single-valued nodal field so that the interpolated frame (and with it
  // the convected v, w directions) is continuous across elements.
  std::vector<Vec3> tangent0;
  std::vector<Vec3> tangent1;
  std::vector<std::array<int, 3>> tris;
  std::map<std::string, std::vector<int>> node_sets;
  std::map<std::string, std::vector<int>> edge_sets;
  std::map<std::string, std::vector<int>> tri_sets;
  int geometry_order = 1;

  // Derived connectivity, filled by finalize().
  std::vector<std::array<int, 2>> edges;              // node pairs, a < b, sorted
  std::vector<std::array<int, 3>> tri_edge_ids;       // per triangle, local edges 01,12,20
  std::vector<std::array<bool, 3>> tri_edge_reversed; // local direction opposes ascending ids

  int n_nodes() const { return static_cast<int>(X.size()); }
  int n_tris() const { return static_cast<int>(tris.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  void finalize() {
    if (geometry_order != 1)
      throw Error("ShellMesh: only linear geometry (order 1) is supported");
    std::set<std::array<int, 2>> unique;
    for (const auto& t : tris)
      for (int e = 0; e < 3; ++e) {
        const int a = t[e], b = t[(e + 1) % 3];
        unique.insert({std::min(a, b), std::max(a, b)});
      }
    edges.assign(unique.begin(), unique.end());
    std::map<std::array<int, 2>, int> index;
    for (int i = 0; i < n_edges(); ++i) index[edges[i]] = i;
    tri_edge_ids.resize(tris.size());
    tri_edge_reversed.resize(tris.size());
    for (int t = 0; t < n_tris(); ++t)
      for (int e = 0; e < 3; ++e) {
        const int a = tris[t][e], b = tris[t][(e + 1) % 3];
        tri_edge_ids[t][e] = index.at({std::min(a, b), std::max(a, b)});
        tri_edge_reversed[t][e] = a > b;
      }
  }

  /// Edges whose both endpoints belong to the named node set.
  std::vector<int> edges_in_node_set(const std::string& name) const {
    const auto it = node_sets.find(name);
    if (it == node_sets.end()) throw Error("unknown node set: " + name);
    std::set<int> nodes(it->second.begin(), it->second.end());
    std::vector<int> out;
    for (int e = 0; e < n_edges(); ++e)
      if (nodes.count(edges[e][0]) && nodes.count(edges[e][1])) out.push_back(e);
    return out;
  }
};

inline Vec3 triangle_normal(const ShellMesh& m, int t) {
  const auto& tri = m.tris[t];
  return 0.5 * (m.X[tri[1]] - m.X[tri[0]]).cross(m.X[tri[2]] - m.X[tri[0]]);
}

/// Fill nodal directors as the normalized area-weighted average of the
/// adjacent triangle normals.
inline void compute_directors(ShellMesh& m) {
  std::vector<Vec3> acc(m.X.size(), Vec3::Zero());
  for (int t = 0; t < m.n_tris(); ++t) {
    const Vec3 n = triangle_normal(m, t);
    double scale = 0.0;
    for (int e = 0; e < 3; ++e) {
      const Vec3 d = m.X[m.tris[t][(e + 1) % 3]] - m.X[m.tris[t][e]];
      scale = std::max(scale, d.squaredNorm());
    }
    if (n.norm() <= 1e-14 * scale)
      throw Error("compute_directors: degenerate triangle " + std::to_string(t));
    for (int v : m.tris[t]) acc[v] += n;
  }
  m.director.resize(m.X.size());
  for (size_t i = 0; i < m.X.size(); ++i) {
    const double len = acc[i].norm();
    if (len == 0.0)
      throw Error("compute_directors: node " + std::to_string(i) + " has no triangles");
    m.director[i] = acc[i] / len;
  }
}

inline void set_uniform_thickness(ShellMesh& m, double a) {
  if (a <= 0.0) throw Error("thickness must be positive");
  m.thickness.assign(m.X.size(), a);
}

/// Derive nodal tangent frames from the directors: a fixed reference axis
/// (the one farthest from every director) is crossed with D, giving a
/// continuous orthonormal triad {t0, t1, D} with t0 x t1 = D.
inline void compute_tangent_frames(ShellMesh& m) {
  if (m.director.size() != m.X.size())
    throw Error("compute_tangent_frames: directors missing");
  int best_axis = 0;
  double best = std::numeric_limits<double>::max();
  for (int axis = 0; axis < 3; ++axis) {
    double worst = 0.0;
    for (const auto& d : m.director) worst = std::max(worst, std::abs(d(axis)));
    if (worst < best) {
      best = worst;
      best_axis = axis;
    }
  }
  if (best > 0.99)
    throw Error("compute_tangent_frames: no reference axis clear of the directors");
  Vec3 h = Vec3::Zero();
  h(best_axis) = 1.0;
  m.tangent0.resize(m.X.size());
  m.tangent1.resize(m.X.size());
  for (size_t i = 0; i < m.X.size(); ++i) {
    m.tangent0[i] = h.cross(m.director[i]).normalized();
    m.tangent1[i] = m.director[i].cross(m.tangent0[i]);
  }
}

/// Validity checks on a finalized mesh: unit directors, positive thickness,
/// triangles positively oriented with respect to the director field.
inline void validate(const ShellMesh& m) {
  if (m.director.size() != m.X.size()) throw Error("mesh: directors missing");
  if (m.thickness.size() != m.X.size()) throw Error("mesh: thickness missing");
  for (size_t i = 0; i < m.X.size(); ++i) {
    if (std::abs(m.director[i].norm() - 1.0) > 1e-12)
      throw Error("mesh: director at node " + std::to_string(i) + " is not unit");
    if (m.thickness[i] <= 0.0)
      throw Error("mesh: non-positive thickness at node " + std::to_string(i));
  }
  for (int t = 0; t < m.n_tris(); ++t) {
    Vec3 d = Vec3::Zero();
    for (int v : m.tris[t]) d += m.director[v];
    if (triangle_normal(m, t).dot(d) <= 0.0)
      throw Error("mesh: triangle " + std::to_string(t) +
                  " negatively oriented w.r.t. director");
  }
}

// ---------------------------------------------------------------------------
// Line-oriented mesh file format:
//   prismshell-mesh v1
//   nodes N
//   id x y z [dx dy dz] [a]
//   tris M
//   id n0 n1 n2
//   set <name> <node|edge|tri> id...
// ---------------------------------------------------------------------------

inline void save_mesh(const ShellMesh& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open mesh file for writing: " + path);
  f.precision(17);
  f << "prismshell-mesh v1\n";
  const bool dir = m.director.size() == m.X.size();
  const bool thick = m.thickness.size() == m.X.size();
  f << "nodes " << m.n_nodes() << "\n";
  for (int i = 0; i < m.n_nodes(); ++i) {
    f << i << " " << m.X[i].x() << " " << m.X[i].y() << " " << m.X[i].z();
    if (dir)
      f << " " << m.director[i].x() << " " << m.director[i].y() << " "
        << m.director[i].z();
    if (thick) f << " " << m.thickness[i];
    f << "\n";
  }
  f << "tris " << m.n_tris() << "\n";
  for (int t = 0; t < m.n_tris(); ++t)
    f << t << " " << m.tris[t][0] << " " << m.tris[t][1] << " " << m.tris[t][2] << "\n";
  auto write_sets = [&f](const std::map<std::string, std::vector<int>>& sets,
                         const char* kind) {
    for (const auto& [name, ids] : sets) {
      f << "set " << name << " " << kind;
      for (int i : ids) f << " " << i;
      f << "\n";
    }
  };
  write_sets(m.node_sets, "node");
  write_sets(m.edge_sets, "edge");
  write_sets(m.tri_sets, "tri");
}

inline ShellMesh load_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open mesh file: " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("prismshell-mesh v1", 0) != 0)
    throw Error("mesh file: bad header in " + path);
  ShellMesh m;
  auto next_line = [&]() {
    while (std::getline(f, line)) {
      if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
        return true;
    }
    return false;
  };
  while (next_line()) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "nodes") {
      int n = 0;
      ss >> n;
      m.X.resize(n);
      bool any_dir = false, any_thick = false;
      std::vector<Vec3> dir(n, Vec3::Zero());
      std::vector<double> thick(n, 0.0);
      for (int i = 0; i < n; ++i) {
        if (!next_line()) throw Error("mesh file: truncated node block");
        std::istringstream ls(line);
        int id;
        double vals[7];
        ls >> id;
        int count = 0;
        while (count < 7 && (ls >> vals[count])) ++count;
        if (id < 0 || id >= n) throw Error("mesh file: node id out of range");
        if (count != 3 && count != 4 && count != 6 && count != 7)
          throw Error("mesh file: bad node line: " + line);
        m.X[id] = Vec3(vals[0], vals[1], vals[2]);
        if (count >= 6) {
          dir[id] = Vec3(vals[3], vals[4], vals[5]);
          any_dir = true;
        }
        if (count == 4 || count == 7) {
          thick[id] = vals[count - 1];
          any_thick = true;
        }
      }
      if (any_dir) m.director = dir;
      if (any_thick) m.thickness = thick;
    } else if (tok == "tris") {
      int n = 0;
      ss >> n;
      m.tris.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!next_line()) throw Error("mesh file: truncated tri block");
        std::istringstream ls(line);
        int id, a, b, c;
        ls >> id >> a >> b >> c;
        if (id < 0 || id >= n) throw Error("mesh file: tri id out of range");
        m.tris[id] = {a, b, c};
      }
    } else if (tok == "set") {
      std::string name, kind;
      ss >> name >> kind;
      std::vector<int> ids;
      int id;
      while (ss >> id) ids.push_back(id);
      if (kind == "node")
        m.node_sets[name] = ids;
      else if (kind == "edge")
        m.edge_sets[name] = ids;
      else if (kind == "tri")
        m.tri_sets[name] = ids;
      else
        throw Error("mesh file: unknown set kind: " + kind);
    } else {
      throw Error("mesh file: unknown directive: " + tok);
    }
  }
  m.finalize();
  return m;
}

} // namespace prismshell
