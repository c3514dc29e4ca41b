#pragma once

#include <numeric>
#include <vector>

#include "prismshell/basis.hpp"
#include "prismshell/core.hpp"
#include "prismshell/mesh.hpp"

namespace prismshell {

/// Global DOF enumeration over mesh entities with heterogeneous face orders.
///
/// u DOFs (global Cartesian) live on nodes, triangle edges and triangles,
/// with a lower and an upper layer each; v (1 component) and w (2 convected
/// components) DOFs live on through-thickness entities: quadrilateral edges
/// (at nodes), quadrilateral faces (at mesh edges) and prism volumes (at
/// triangles). Numbering order: nodes, triangle edges, triangles, quad
/// edges, quad faces, volumes; deterministic for a given mesh and orders.
///
/// Shared-entity orders resolve by the max rule; the in-plane order of a
/// quad face follows its mesh edge so that adjacent elements tabulate
/// identical trace functions.
class DofMap {
public:
  DofMap(const ShellMesh& mesh, std::vector<int> p_face, int p_tv, int p_tw)
      : mesh_(&mesh), p_face_(std::move(p_face)), p_tv_(p_tv), p_tw_(p_tw) {
    if (static_cast<int>(p_face_.size()) != mesh.n_tris())
      throw Error("DofMap: one face order per triangle required");
    for (int p : p_face_)
      if (p < 1) throw Error("DofMap: orders must be >= 1");
    if (p_tv < 1 || p_tw < 1) throw Error("DofMap: thickness orders must be >= 1");

    edge_order_.assign(mesh.n_edges(), 1);
    for (int t = 0; t < mesh.n_tris(); ++t)
      for (int e = 0; e < 3; ++e) {
        int& po = edge_order_[mesh.tri_edge_ids[t][e]];
        po = std::max(po, p_face_[t]);
      }

    int next = 0;
    node_u_.resize(mesh.n_nodes());
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      node_u_[n] = next;
      next += 6; // lower xyz, upper xyz
    }
    edge_u_.resize(mesh.n_edges());
    for (int e = 0; e < mesh.n_edges(); ++e) {
      edge_u_[e] = next;
      next += 2 * 3 * PrismOrders::n_edge_fns(edge_order_[e]);
    }
    tri_u_.resize(mesh.n_tris());
    for (int t = 0; t < mesh.n_tris(); ++t) {
      tri_u_[t] = next;
      next += 2 * 3 * PrismOrders::n_tri_face_fns(p_face_[t]);
    }
    node_t_.resize(mesh.n_nodes());
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      node_t_[n] = next;
      next += PrismOrders::n_edge_fns(p_tv_) + 2 * PrismOrders::n_edge_fns(p_tw_);
    }
    edge_t_.resize(mesh.n_edges());
    for (int e = 0; e < mesh.n_edges(); ++e) {
      edge_t_[e] = next;
      next += PrismOrders::n_quad_face_fns(p_tv_, edge_order_[e]) +
              2 * PrismOrders::n_quad_face_fns(p_tw_, edge_order_[e]);
    }
    tri_t_.resize(mesh.n_tris());
    for (int t = 0; t < mesh.n_tris(); ++t) {
      tri_t_[t] = next;
      next += PrismOrders::n_volume_fns(p_tv_, p_face_[t]) +
              2 * PrismOrders::n_volume_fns(p_tw_, p_face_[t]);
    }
    n_dofs_ = next;
  }

  int n_dofs() const { return n_dofs_; }
  int face_order(int tri) const { return p_face_[tri]; }
  int edge_order(int edge) const { return edge_order_[edge]; }
  int thickness_order_v() const { return p_tv_; }
  int thickness_order_w() const { return p_tw_; }
  const std::vector<int>& face_orders() const { return p_face_; }

  /// u DOF of a node: layer 0 = lower, 1 = upper, comp in 0..2.
  int node_u_dof(int node, int layer, int comp) const {
    return node_u_[node] + 3 * layer + comp;
  }

  /// Resolved per-element orders for the element kernel.
  struct ElementOrders {
    PrismOrders u, v, w;
  };
  ElementOrders element_orders(int t) const {
    ElementOrders o;
    o.u = PrismOrders::uniform(1, 1);
    for (int e = 0; e < 3; ++e) {
      const int pe = edge_order_[mesh_->tri_edge_ids[t][e]];
      o.u.tri_edge[e] = pe;
      o.u.tri_edge[e + 3] = pe;
    }
    o.u.tri_face = {p_face_[t], p_face_[t]};
    auto thick = [&](int pt) {
      PrismOrders p = PrismOrders::uniform(1, pt);
      for (int e = 0; e < 3; ++e)
        p.quad_face_plane[e] = edge_order_[mesh_->tri_edge_ids[t][e]];
      p.volume_plane = p_face_[t];
      return p;
    };
    o.v = thick(p_tv_);
    o.w = thick(p_tw_);
    return o;
  }

  EdgeOrientations orientations(int t) const {
    EdgeOrientations o;
    for (int e = 0; e < 3; ++e) o.reversed[e] = mesh_->tri_edge_reversed[t][e];
    return o;
  }

  /// Global indices of the element dofs, in the kernel block order
  /// [u | v | w].
  std::vector<int> element_dofs(int t) const {
    const auto& tri = mesh_->tris[t];
    std::vector<int> g;
    // u block: vertices (lower 0-2, upper 3-5).
    for (int v = 0; v < 6; ++v)
      for (int c = 0; c < 3; ++c) g.push_back(node_u_dof(tri[v % 3], v / 3, c));
    // Triangle edges, lower layer then upper layer.
    for (int layer = 0; layer < 2; ++layer)
      for (int e = 0; e < 3; ++e) {
        const int ge = mesh_->tri_edge_ids[t][e];
        const int nf = PrismOrders::n_edge_fns(edge_order_[ge]);
        for (int l = 0; l < nf; ++l)
          for (int c = 0; c < 3; ++c)
            g.push_back(edge_u_[ge] + layer * 3 * nf + 3 * l + c);
      }
    // Triangle faces.
    for (int layer = 0; layer < 2; ++layer) {
      const int nf = PrismOrders::n_tri_face_fns(p_face_[t]);
      for (int i = 0; i < nf; ++i)
        for (int c = 0; c < 3; ++c)
          g.push_back(tri_u_[t] + layer * 3 * nf + 3 * i + c);
    }
    // v block: quad edges, quad faces, volume.
    for (int n = 0; n < 3; ++n) {
      const int base = node_t_[tri[n]];
      for (int k = 0; k < PrismOrders::n_edge_fns(p_tv_); ++k) g.push_back(base + k);
    }
    for (int e = 0; e < 3; ++e) {
      const int ge = mesh_->tri_edge_ids[t][e];
      const int nf = PrismOrders::n_quad_face_fns(p_tv_, edge_order_[ge]);
      for (int i = 0; i < nf; ++i) g.push_back(edge_t_[ge] + i);
    }
    {
      const int nf = PrismOrders::n_volume_fns(p_tv_, p_face_[t]);
      for (int i = 0; i < nf; ++i) g.push_back(tri_t_[t] + i);
    }
    // w block.
    for (int n = 0; n < 3; ++n) {
      const int base = node_t_[tri[n]] + PrismOrders::n_edge_fns(p_tv_);
      for (int k = 0; k < 2 * PrismOrders::n_edge_fns(p_tw_); ++k)
        g.push_back(base + k);
    }
    for (int e = 0; e < 3; ++e) {
      const int ge = mesh_->tri_edge_ids[t][e];
      const int base =
          edge_t_[ge] + PrismOrders::n_quad_face_fns(p_tv_, edge_order_[ge]);
      const int nf = PrismOrders::n_quad_face_fns(p_tw_, edge_order_[ge]);
      for (int i = 0; i < 2 * nf; ++i) g.push_back(base + i);
    }
    {
      const int base = tri_t_[t] + PrismOrders::n_volume_fns(p_tv_, p_face_[t]);
      const int nf = PrismOrders::n_volume_fns(p_tw_, p_face_[t]);
      for (int i = 0; i < 2 * nf; ++i) g.push_back(base + i);
    }
    return g;
  }

  /// All u dofs (both layers, all functions) of a mesh edge.
  std::vector<int> edge_u_dofs(int edge, int comp) const {
    std::vector<int> out;
    const int nf = PrismOrders::n_edge_fns(edge_order_[edge]);
    for (int layer = 0; layer < 2; ++layer)
      for (int l = 0; l < nf; ++l)
        out.push_back(edge_u_[edge] + layer * 3 * nf + 3 * l + comp);
    return out;
  }

private:
  const ShellMesh* mesh_;
  std::vector<int> p_face_;
  int p_tv_, p_tw_;
  std::vector<int> edge_order_;
  std::vector<int> node_u_, edge_u_, tri_u_, node_t_, edge_t_, tri_t_;
  int n_dofs_ = 0;
};

/// Homogeneous single-point constraints (fixed DOFs), applied by symmetric
/// elimination. v and w DOFs are internal to the convected system and are
/// never constrained.
struct Constraints {
  std::vector<uint8_t> fixed;

  explicit Constraints(int ndofs = 0) : fixed(ndofs, 0) {}
  int count() const { return std::accumulate(fixed.begin(), fixed.end(), 0); }
  bool is_fixed(int dof) const { return fixed[dof] != 0; }

  void fix(int dof) { fixed.at(dof) = 1; }

  /// Zero out fixed entries of a residual/solution vector.
  void project(Eigen::VectorXd& v) const {
    for (size_t i = 0; i < fixed.size(); ++i)
      if (fixed[i]) v(static_cast<Eigen::Index>(i)) = 0.0;
  }
};

/// Boundary condition on a named node set: fixes the given Cartesian u
/// components on every node of the set (both layers) and on every mesh edge
/// whose endpoints both belong to the set.
struct BCSpec {
  std::string node_set;
  std::array<bool, 3> fix{false, false, false};
};

inline void apply_bc(Constraints& c, const ShellMesh& mesh, const DofMap& map,
                     const BCSpec& bc) {
  const auto it = mesh.node_sets.find(bc.node_set);
  if (it == mesh.node_sets.end()) throw Error("apply_bc: unknown set " + bc.node_set);
  for (int n : it->second)
    for (int layer = 0; layer < 2; ++layer)
      for (int comp = 0; comp < 3; ++comp)
        if (bc.fix[comp]) c.fix(map.node_u_dof(n, layer, comp));
  for (int e : mesh.edges_in_node_set(bc.node_set))
    for (int comp = 0; comp < 3; ++comp)
      if (bc.fix[comp])
        for (int dof : map.edge_u_dofs(e, comp)) c.fix(dof);
}

/// Symmetry plane with a Cartesian normal: fixes the normal u component on
/// the set. Clamps fix all three components.
inline void apply_symmetry(Constraints& c, const ShellMesh& mesh, const DofMap& map,
                           const std::string& node_set, int normal_comp) {
  BCSpec bc;
  bc.node_set = node_set;
  bc.fix[normal_comp] = true;
  apply_bc(c, mesh, map, bc);
}

inline void apply_clamp(Constraints& c, const ShellMesh& mesh, const DofMap& map,
                        const std::string& node_set) {
  apply_bc(c, mesh, map, {node_set, {true, true, true}});
}

} // namespace prismshell
