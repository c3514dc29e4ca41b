#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <thread>
#include <vector>

#include "prismshell/dofmap.hpp"
#include "prismshell/element.hpp"

namespace prismshell {

using SpMat = Eigen::SparseMatrix<double>;

/// Point force at a mid-surface node, split equally between the coincident
/// lower and upper vertex DOFs.
struct PointLoad {
  int node;
  Vec3 force;
};

/// Fixed-direction traction per unit length on the mesh edges whose
/// endpoints lie in the named node set.
struct EdgeTraction {
  std::string node_set;
  Vec3 per_length;
};

/// Fixed-direction traction per unit mid-surface area over the whole mesh.
struct SurfaceTraction {
  Vec3 per_area;
};

struct LoadProgram {
  std::vector<PointLoad> points;
  std::vector<EdgeTraction> edges;
  std::vector<SurfaceTraction> surfaces;
};

/// A discretised shell problem: mesh, dof map, one kernel per element, and
/// homogeneous constraints. Assembly may run over several threads; the
/// result is accumulated in element order and does not depend on timing.
class ShellProblem {
public:
  ShellProblem(const ShellMesh& mesh, const Material& mat, std::vector<int> p_face,
               int p_tv, int p_tw, int threads = 1)
      : mesh_(&mesh), mat_(mat), map_(mesh, std::move(p_face), p_tv, p_tw),
        constraints_(map_.n_dofs()), threads_(std::max(1, threads)) {
    kernels_.reserve(mesh.n_tris());
    gather_.reserve(mesh.n_tris());
    for (int t = 0; t < mesh.n_tris(); ++t) {
      const DofMap::ElementOrders o = map_.element_orders(t);
      kernels_.emplace_back(std::make_unique<ElementKernel>(
          ElementGeometry::from_mesh(mesh, t), mat, o.u, o.v, o.w,
          map_.orientations(t)));
      gather_.push_back(map_.element_dofs(t));
      if (static_cast<int>(gather_.back().size()) != kernels_.back()->ndof())
        throw Error("ShellProblem: dof map / kernel size mismatch");
    }
  }

  const ShellMesh& mesh() const { return *mesh_; }
  const Material& material() const { return mat_; }
  const DofMap& dofs() const { return map_; }
  int n_dofs() const { return map_.n_dofs(); }
  Constraints& constraints() { return constraints_; }
  const Constraints& constraints() const { return constraints_; }
  const ElementKernel& kernel(int t) const { return *kernels_[t]; }
  const std::vector<int>& element_dofs(int t) const { return gather_[t]; }
  int n_elements() const { return static_cast<int>(kernels_.size()); }

  Eigen::VectorXd gather(int t, const Eigen::VectorXd& x) const {
    const auto& g = gather_[t];
    Eigen::VectorXd e(g.size());
    for (size_t i = 0; i < g.size(); ++i) e(i) = x(g[i]);
    return e;
  }

  double strain_energy(const Eigen::VectorXd& x) const {
    double W = 0.0;
    for (int t = 0; t < n_elements(); ++t) W += kernels_[t]->strain_energy(gather(t, x));
    return W;
  }

  /// Assemble the internal force and (optionally) the tangent at state x.
  /// Constrained rows and columns of the tangent are eliminated
  /// symmetrically with a unit diagonal; f_int is returned unprojected.
  void assemble(const Eigen::VectorXd& x, Eigen::VectorXd* f_int, SpMat* K) const {
    if (f_int) f_int->setZero(n_dofs());
    struct Chunk {
      std::vector<Eigen::Triplet<double>> trips;
      Eigen::VectorXd f;
      std::exception_ptr err;
    };
    const int nthreads = std::min<int>(threads_, std::max(1, n_elements()));
    std::vector<Chunk> chunks(nthreads);
    auto work = [&](int c) {
      Chunk& ch = chunks[c];
      try {
        if (f_int) ch.f = Eigen::VectorXd::Zero(n_dofs());
        for (int t = c; t < n_elements(); t += nthreads) {
          const Eigen::VectorXd xe = gather(t, x);
          const auto& g = gather_[t];
          if (K) {
            Eigen::VectorXd fe;
            const ElementTangent Ke = kernels_[t]->tangent(xe, &fe);
            if (f_int)
              for (size_t i = 0; i < g.size(); ++i) ch.f(g[i]) += fe(i);
            for (size_t i = 0; i < g.size(); ++i) {
              if (constraints_.is_fixed(g[i])) continue;
              for (size_t j = 0; j < g.size(); ++j) {
                if (constraints_.is_fixed(g[j])) continue;
                ch.trips.emplace_back(g[i], g[j], Ke(i, j));
              }
            }
          } else if (f_int) {
            const Eigen::VectorXd fe = kernels_[t]->residual(xe);
            for (size_t i = 0; i < g.size(); ++i) ch.f(g[i]) += fe(i);
          }
        }
      } catch (...) {
        ch.err = std::current_exception();
      }
    };
    if (nthreads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int c = 0; c < nthreads; ++c) pool.emplace_back(work, c);
      for (auto& th : pool) th.join();
    }
    for (const auto& ch : chunks)
      if (ch.err) std::rethrow_exception(ch.err);
    if (f_int)
      for (const auto& ch : chunks) *f_int += ch.f;
    if (K) {
      std::vector<Eigen::Triplet<double>> trips;
      size_t total = 0;
      for (const auto& ch : chunks) total += ch.trips.size();
      trips.reserve(total + n_dofs());
      for (const auto& ch : chunks)
        trips.insert(trips.end(), ch.trips.begin(), ch.trips.end());
      for (int i = 0; i < n_dofs(); ++i)
        if (constraints_.is_fixed(i)) trips.emplace_back(i, i, 1.0);
      K->resize(n_dofs(), n_dofs());
      K->setFromTriplets(trips.begin(), trips.end());
    }
  }

  /// Consistent global load vector of a load program (u DOFs only).
  Eigen::VectorXd external_load(const LoadProgram& loads) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dofs());
    for (const auto& pl : loads.points) {
      for (int layer = 0; layer < 2; ++layer)
        for (int c = 0; c < 3; ++c)
          f(map_.node_u_dof(pl.node, layer, c)) += 0.5 * pl.force(c);
    }
    for (const auto& st : loads.surfaces)
      for (int t = 0; t < n_elements(); ++t) {
        const Eigen::VectorXd fe = kernels_[t]->surface_load(st.per_area);
        const auto& g = gather_[t];
        for (size_t i = 0; i < g.size(); ++i) f(g[i]) += fe(i);
      }
    if (!loads.edges.empty()) {
      // Owner element of each mesh edge: the lowest adjacent triangle.
      std::vector<std::array<int, 2>> owner(mesh_->n_edges(), {-1, -1});
      for (int t = 0; t < n_elements(); ++t)
        for (int e = 0; e < 3; ++e) {
          auto& o = owner[mesh_->tri_edge_ids[t][e]];
          if (o[0] < 0) o = {t, e};
        }
      for (const auto& et : loads.edges)
        for (int e : mesh_->edges_in_node_set(et.node_set)) {
          const auto [t, le] = owner[e];
          if (t < 0) throw Error("external_load: edge without adjacent element");
          const Eigen::VectorXd fe = kernels_[t]->edge_load(le, et.per_length);
          const auto& g = gather_[t];
          for (size_t i = 0; i < g.size(); ++i) f(g[i]) += fe(i);
        }
    }
    return f;
  }

  /// Mid-surface displacement of a node: the average of the lower and upper
  /// layer u DOFs (the convected fields vanish on the outer surfaces).
  Vec3 node_displacement(const Eigen::VectorXd& x, int node) const {
    Vec3 d;
    for (int c = 0; c < 3; ++c)
      d(c) = 0.5 * (x(map_.node_u_dof(node, 0, c)) + x(map_.node_u_dof(node, 1, c)));
    return d;
  }

private:
  const ShellMesh* mesh_;
  Material mat_;
  DofMap map_;
  Constraints constraints_;
  int threads_;
  std::vector<std::unique_ptr<ElementKernel>> kernels_;
  std::vector<std::vector<int>> gather_;
};

} // namespace prismshell
