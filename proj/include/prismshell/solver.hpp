#pragma once

#include <Eigen/SparseLU>
#include <functional>
#include <optional>
#include <vector>

#include "prismshell/problem.hpp"

namespace prismshell {

namespace detail {

/// LU solve with iterative refinement; shell stiffness matrices are stiff
/// enough that a raw substitution can sit well above the target residual.
inline Eigen::VectorXd lu_solve_refined(const Eigen::SparseLU<SpMat>& lu,
                                        const SpMat& K, const Eigen::VectorXd& b,
                                        int refinements = 2) {
  Eigen::VectorXd x = lu.solve(b);
  for (int i = 0; i < refinements; ++i) {
    const Eigen::VectorXd r = b - K * x;
    x += lu.solve(r);
  }
  return x;
}

} // namespace detail

/// Sparse direct solve with a residual check. On a singular matrix the
/// diagnostic names the best-matching rigid-body candidate when the caller
/// provides one.
inline Eigen::VectorXd linear_solve(
    const SpMat& K, const Eigen::VectorXd& b,
    const std::function<std::string()>& null_space_diagnostic = {}) {
  Eigen::SparseLU<SpMat> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) {
    std::string msg = "linear_solve: factorization failed (singular matrix)";
    if (null_space_diagnostic) msg += "; candidate null-space mode: " + null_space_diagnostic();
    throw Error(msg);
  }
  const Eigen::VectorXd x = detail::lu_solve_refined(lu, K, b, 3);
  const double bn = b.norm();
  if (bn > 0.0 && (K * x - b).norm() > 1e-10 * bn) {
    std::string msg = "linear_solve: residual above 1e-10 of the load";
    if (null_space_diagnostic) msg += "; candidate null-space mode: " + null_space_diagnostic();
    throw Error(msg);
  }
  return x;
}

/// Rigid-mode diagnostic used when a constrained system is singular: reports
/// which rigid translation/rotation the operator annihilates best.
inline std::string rigid_mode_diagnostic(const ShellProblem& problem, const SpMat& K) {
  const char* names[6] = {"translation x", "translation y", "translation z",
                          "rotation x",    "rotation y",    "rotation z"};
  double best = std::numeric_limits<double>::max();
  int best_mode = 0;
  for (int mode = 0; mode < 6; ++mode) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(problem.n_dofs());
    const auto& mesh = problem.mesh();
    for (int n = 0; n < mesh.n_nodes(); ++n)
      for (int layer = 0; layer < 2; ++layer) {
        const Vec3 X = mesh.X[n] + (layer ? 0.5 : -0.5) * mesh.thickness[n] * mesh.director[n];
        Vec3 d = Vec3::Zero();
        if (mode < 3)
          d(mode) = 1.0;
        else {
          Vec3 axis = Vec3::Zero();
          axis(mode - 3) = 1.0;
          d = axis.cross(X);
        }
        for (int c = 0; c < 3; ++c) v(problem.dofs().node_u_dof(n, layer, c)) = d(c);
      }
    const double vn = v.norm();
    if (vn == 0.0) continue;
    const double r = (K * v).norm() / vn;
    if (r < best) {
      best = r;
      best_mode = mode;
    }
  }
  return names[best_mode];
}

struct NewtonConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_iters = 30;
  bool symmetrize = false;
  bool line_search = false;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_norms;
};

namespace detail {

inline SpMat symmetrized(const SpMat& K) {
  SpMat Kt = SpMat(K.transpose());
  return 0.5 * (K + Kt);
}

} // namespace detail

/// Newton-Raphson at a fixed load level: solves f_int(x) = lambda f_ext.
/// The iterative update order follows the system right-hand side: the
/// global u increment and the convected v, w increments are applied
/// together. Returns a failure report (never throws) on divergence or
/// element inversion so the caller can cut the step.
inline NewtonReport newton_solve(const ShellProblem& problem, Eigen::VectorXd& x,
                                 const Eigen::VectorXd& f_ext, double lambda,
                                 const NewtonConfig& cfg) {
  NewtonReport rep;
  const Eigen::VectorXd x0 = x;
  try {
    Eigen::VectorXd f_int(problem.n_dofs());
    SpMat K;
    for (int it = 0; it <= cfg.max_iters; ++it) {
      problem.assemble(x, &f_int, &K);
      Eigen::VectorXd r = lambda * f_ext - f_int;
      problem.constraints().project(r);
      const double rn = r.norm();
      rep.residual_norms.push_back(rn);
      const double scale = std::max(lambda * f_ext.norm(), rep.residual_norms.front());
      if (rn <= std::max(cfg.abs_tol, cfg.rel_tol * scale)) {
        rep.converged = true;
        rep.iterations = it;
        return rep;
      }
      if (it == cfg.max_iters) break;
      if (cfg.symmetrize) K = detail::symmetrized(K);
      Eigen::SparseLU<SpMat> lu;
      lu.compute(K);
      if (lu.info() != Eigen::Success) break;
      const Eigen::VectorXd dx = detail::lu_solve_refined(lu, K, r);
      double eta = 1.0;
      if (cfg.line_search) {
        const double s0 = dx.dot(r);
        for (int ls = 0; ls < 5; ++ls) {
          Eigen::VectorXd rt(problem.n_dofs());
          problem.assemble(x + eta * dx, &rt, nullptr);
          rt = lambda * f_ext - rt;
          problem.constraints().project(rt);
          if (std::abs(dx.dot(rt)) <= 0.8 * std::abs(s0)) break;
          eta *= 0.5;
        }
      }
      x += eta * dx;
    }
  } catch (const ElementInversion&) {
    // fall through to failure
  }
  if (!rep.converged) x = x0;
  rep.iterations = static_cast<int>(rep.residual_norms.size()) - 1;
  return rep;
}

/// One converged equilibrium point of a continuation run.
struct TraceRow {
  int step = 0;
  double lambda = 0.0;
  double load = 0.0;
  std::vector<Vec3> monitors;
  int iterations = 0;
};

struct Trace {
  std::vector<std::string> monitor_names;
  std::vector<TraceRow> rows;
  int total_step_cuts = 0;
  bool reached_target = false;
};

struct ArcLengthConfig {
  double ds0 = 0.05;
  double psi = 1.0;
  int max_steps = 1000;
  int target_iterations = 5;
  int max_cuts = 12;
  double ds_growth_limit = 4.0;
  double ds_shrink_limit = 0.25;
  NewtonConfig newton;
};

/// Crisfield-type spherical arc-length continuation from lambda = 0 to
/// lambda = 1 (the target load f_ext). The quadratic constraint
/// |dx|^2 + psi^2 dlambda^2 |f_ext|^2 = ds^2 is solved each iteration, the
/// root maximizing the cosine with the running increment is taken, and the
/// step length adapts to the iteration count. Newton failures and complex
/// roots cut the step; the trace survives an abort.
class ArcLengthSolver {
public:
  ArcLengthSolver(const ShellProblem& problem, Eigen::VectorXd f_ext,
                  ArcLengthConfig cfg)
      : p_(problem), f_ext_(std::move(f_ext)), cfg_(cfg) {
    p_.constraints().project(f_ext_);
    ff_ = f_ext_.squaredNorm();
  }

  /// Advance one converged step. Returns false when the target was reached.
  bool step(Eigen::VectorXd& x, double& lambda, int& iters) {
    double ds = ds_;
    for (int cut = 0; cut <= cfg_.max_cuts; ++cut) {
      // Exact landing: if the predictor would pass the target, try plain
      // Newton at the target load first.
      if (try_target_landing(x, lambda, ds, iters)) return false;
      if (attempt_step(x, lambda, ds, iters)) {
        prev_ds_ = ds;
        ds_ = std::min(ds * adapt_factor(iters), cfg_.ds0 * 64.0);
        if (lambda >= 1.0 && try_target_landing(x, lambda, ds, iters)) return false;
        return true;
      }
      ds *= 0.5;
      ++cuts_;
    }
    throw Error("arc_length: step failed after " + std::to_string(cfg_.max_cuts) +
                " cuts (trace preserved)");
  }

  int total_cuts() const { return cuts_; }

private:
  double adapt_factor(int iters) const {
    const double f = std::sqrt(static_cast<double>(cfg_.target_iterations) /
                               std::max(1, iters));
    return std::clamp(f, cfg_.ds_shrink_limit, cfg_.ds_growth_limit);
  }

  bool try_target_landing(Eigen::VectorXd& x, double& lambda, double ds, int& iters) {
    // Cheap estimate from the previous increment; also fires after an
    // overshoot so the trace ends exactly at the target.
    if (lambda < 1.0 - 1e-12) {
      if (!have_prev_ || prev_dlam_ <= 0.0) return false;
      const double est = prev_dlam_ * (prev_ds_ > 0.0 ? ds / prev_ds_ : 1.0);
      if (lambda + 1.6 * est < 1.0) return false;
    }
    Eigen::VectorXd xt = x;
    const NewtonReport rep = newton_solve(p_, xt, f_ext_, 1.0, cfg_.newton);
    if (!rep.converged) return false;
    x = xt;
    lambda = 1.0;
    iters = rep.iterations;
    return true;
  }

  bool attempt_step(Eigen::VectorXd& x, double& lambda, double ds, int& iters) {
    const Eigen::VectorXd x0 = x;
    const double lambda0 = lambda;
    try {
      Eigen::VectorXd f_int(p_.n_dofs());
      SpMat K;
      p_.assemble(x, &f_int, &K);
      if (cfg_.newton.symmetrize) K = detail::symmetrized(K);
      Eigen::SparseLU<SpMat> lu0;
      lu0.compute(K);
      if (lu0.info() != Eigen::Success) throw Error("arc_length: singular tangent");
      Eigen::VectorXd dxt = detail::lu_solve_refined(lu0, K, f_ext_);

      // Predictor along the tangent; sign follows the previous increment.
      const double denom = std::sqrt(dxt.squaredNorm() + cfg_.psi * cfg_.psi * ff_);
      double dlam = ds / denom;
      if (have_prev_ && (prev_dx_.dot(dxt) + cfg_.psi * cfg_.psi * prev_dlam_ * ff_) < 0.0)
        dlam = -dlam;
      Eigen::VectorXd Dx = dlam * dxt;
      double Dlam = dlam;
      x += Dx;
      lambda += Dlam;

      for (int it = 1; it <= cfg_.newton.max_iters; ++it) {
        p_.assemble(x, &f_int, &K);
        Eigen::VectorXd r = lambda * f_ext_ - f_int;
        p_.constraints().project(r);
        const double scale = std::max(std::abs(lambda) * f_ext_.norm(), 1e-30);
        if (r.norm() <= std::max(cfg_.newton.abs_tol, cfg_.newton.rel_tol * scale)) {
          prev_dx_ = x - x0;
          prev_dlam_ = lambda - lambda0;
          have_prev_ = true;
          iters = it;
          return true;
        }
        if (cfg_.newton.symmetrize) K = detail::symmetrized(K);
        Eigen::SparseLU<SpMat> lu;
        lu.compute(K);
        if (lu.info() != Eigen::Success) break;
        const Eigen::VectorXd dxr = detail::lu_solve_refined(lu, K, r);
        dxt = detail::lu_solve_refined(lu, K, f_ext_);

        // Quadratic constraint for the load correction.
        const Eigen::VectorXd v = Dx + dxr;
        const double a = dxt.squaredNorm() + cfg_.psi * cfg_.psi * ff_;
        const double b = 2.0 * (v.dot(dxt) + cfg_.psi * cfg_.psi * Dlam * ff_);
        const double c =
            v.squaredNorm() + cfg_.psi * cfg_.psi * Dlam * Dlam * ff_ - ds * ds;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) break;
        const double sq = std::sqrt(disc);
        const double r1 = (-b + sq) / (2.0 * a), r2 = (-b - sq) / (2.0 * a);
        auto cosine = [&](double dl) {
          return Dx.dot(v + dl * dxt) + cfg_.psi * cfg_.psi * Dlam * (Dlam + dl) * ff_;
        };
        const double dl = cosine(r1) >= cosine(r2) ? r1 : r2;

        Eigen::VectorXd dx_full = dxr + dl * dxt;
        double eta = 1.0;
        if (cfg_.newton.line_search) {
          const double s0 = dx_full.dot(r);
          for (int ls = 0; ls < 5; ++ls) {
            Eigen::VectorXd rt(p_.n_dofs());
            try {
              p_.assemble(x + eta * dx_full, &rt, nullptr);
            } catch (const ElementInversion&) {
              eta *= 0.5;
              continue;
            }
            rt = (lambda + eta * dl) * f_ext_ - rt;
            p_.constraints().project(rt);
            if (std::abs(dx_full.dot(rt)) <= 0.8 * std::abs(s0)) break;
            eta *= 0.5;
          }
        }
        x += eta * dx_full;
        lambda += eta * dl;
        Dx = x - x0;
        Dlam = lambda - lambda0;
      }
    } catch (const ElementInversion&) {
      // restore below
    } catch (const Error&) {
      // singular tangent inside a step: cut
    }
    x = x0;
    lambda = lambda0;
    return false;
  }

  const ShellProblem& p_;
  Eigen::VectorXd f_ext_;
  ArcLengthConfig cfg_;
  double ff_ = 0.0;
  double ds_ = 0.0;
  double prev_ds_ = 0.0;
  Eigen::VectorXd prev_dx_;
  double prev_dlam_ = 0.0;
  bool have_prev_ = false;
  int cuts_ = 0;

public:
  void set_initial_ds(double ds) { ds_ = ds; }
};

/// Run arc-length continuation to lambda = 1, recording monitored nodes.
inline Trace arc_length_solve(const ShellProblem& problem, const Eigen::VectorXd& f_ext,
                              const std::vector<std::pair<std::string, int>>& monitors,
                              double target_load, const ArcLengthConfig& cfg,
                              Eigen::VectorXd* state_out = nullptr) {
  Trace trace;
  for (const auto& [name, node] : monitors) trace.monitor_names.push_back(name);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(problem.n_dofs());
  double lambda = 0.0;
  ArcLengthSolver solver(problem, f_ext, cfg);
  solver.set_initial_ds(cfg.ds0);
  for (int step = 1; step <= cfg.max_steps; ++step) {
    int iters = 0;
    bool more = true;
    try {
      more = solver.step(x, lambda, iters);
    } catch (const Error&) {
      trace.total_step_cuts = solver.total_cuts();
      if (state_out) *state_out = x;
      return trace; // aborted; trace preserved
    }
    TraceRow row;
    row.step = step;
    row.lambda = lambda;
    row.load = lambda * target_load;
    row.iterations = iters;
    for (const auto& [name, node] : monitors)
      row.monitors.push_back(problem.node_displacement(x, node));
    trace.rows.push_back(row);
    if (!more) {
      trace.reached_target = true;
      break;
    }
  }
  trace.total_step_cuts = solver.total_cuts();
  if (state_out) *state_out = x;
  return trace;
}

/// Plain incremental Newton continuation with uniform load steps and step
/// halving on failure.
inline Trace newton_continuation(const ShellProblem& problem,
                                 const Eigen::VectorXd& f_ext,
                                 const std::vector<std::pair<std::string, int>>& monitors,
                                 double target_load, double dlambda0, int max_steps,
                                 const NewtonConfig& newton,
                                 Eigen::VectorXd* state_out = nullptr) {
  Trace trace;
  for (const auto& [name, node] : monitors) trace.monitor_names.push_back(name);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(problem.n_dofs());
  double lambda = 0.0, dl = dlambda0;
  for (int step = 1; step <= max_steps && lambda < 1.0 - 1e-12; ++step) {
    double next = std::min(1.0, lambda + dl);
    NewtonReport rep;
    for (int cut = 0;; ++cut) {
      rep = newton_solve(problem, x, f_ext, next, newton);
      if (rep.converged) break;
      ++trace.total_step_cuts;
      if (cut >= 10)
        throw Error("newton_continuation: step failed after repeated cuts");
      next = lambda + 0.5 * (next - lambda);
    }
    lambda = next;
    TraceRow row;
    row.step = step;
    row.lambda = lambda;
    row.load = lambda * target_load;
    row.iterations = rep.iterations;
    for (const auto& [name, node] : monitors)
      row.monitors.push_back(problem.node_displacement(x, node));
    trace.rows.push_back(row);
  }
  trace.reached_target = lambda >= 1.0 - 1e-12;
  if (state_out) *state_out = x;
  return trace;
}

} // namespace prismshell
