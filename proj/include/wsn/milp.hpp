#pragma once

// Best-bound branch and bound over an lp::LinearProgram relaxation.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "wsn/lp.hpp"

namespace wsn::milp {

struct MixedIntegerProgram {
  lp::LinearProgram lp;
  std::vector<int> integer_cols;
};

enum class MilpStatus { Optimal, Infeasible, GapLimit, NodeLimit };

inline const char* status_name(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::GapLimit: return "GapLimit";
    case MilpStatus::NodeLimit: return "NodeLimit";
  }
  return "?";
}

struct MilpOptions {
  double rel_gap = 1e-6;
  double int_tol = 1e-6;
  long node_limit = 200000;
  long heuristic_every = 50;  // rounding attempts: first 20 nodes, then every n-th
  lp::LpOptions lp;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> x;  // empty when no incumbent
  double objective = lp::kInf;
  double best_bound = -lp::kInf;
  long nodes = 0;
  long lp_iterations = 0;
  lp::Basis root_basis;
  bool has_incumbent() const { return !x.empty(); }
};

/// Relative gap between an incumbent and a bound (min sense).
inline double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent) || !std::isfinite(bound)) return lp::kInf;
  return (incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

namespace detail {

struct Node {
  double bound = -lp::kInf;
  long id = 0;
  std::vector<double> lo, up;  // bounds of the integer columns
  std::shared_ptr<const lp::Basis> basis;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

}  // namespace detail

/// Minimizes `mip` (Maximize sense is rejected). `root_warm` seeds the root
/// relaxation; `start` is an optional candidate point whose integer values are
/// fixed and completed by one LP to give an initial incumbent.
inline MilpSolution solve_milp(const MixedIntegerProgram& mip, const MilpOptions& opts = {},
                               const lp::Basis* root_warm = nullptr,
                               const std::vector<double>* start = nullptr) {
  if (mip.lp.sense != lp::Sense::Minimize) throw std::invalid_argument("solve_milp: minimization only");
  for (int j : mip.integer_cols) {
    if (j < 0 || j >= mip.lp.num_cols()) throw std::invalid_argument("solve_milp: integer column out of range");
    if (!std::isfinite(mip.lp.lower[j]) || !std::isfinite(mip.lp.upper[j])) {
      throw std::invalid_argument("solve_milp: integer column " + std::to_string(j) + " needs finite bounds");
    }
  }
  MilpSolution out;
  lp::LinearProgram work = mip.lp;
  const auto& ints = mip.integer_cols;
  const std::size_t K = ints.size();

  auto apply = [&](const std::vector<double>& lo, const std::vector<double>& up) {
    for (std::size_t k = 0; k < K; ++k) {
      work.lower[ints[k]] = lo[k];
      work.upper[ints[k]] = up[k];
    }
  };
  auto fractional = [&](const std::vector<double>& x) {
    int best = -1;
    double best_frac = opts.int_tol;
    for (std::size_t k = 0; k < K; ++k) {
      const double v = x[ints[k]];
      const double f = std::min(v - std::floor(v), std::ceil(v) - v);
      if (f > best_frac) {
        best_frac = f;
        best = static_cast<int>(k);
      }
    }
    return best;
  };
  auto accept = [&](const lp::LpSolution& sol) {
    if (sol.objective < out.objective) {
      out.objective = sol.objective;
      out.x = sol.x;
      for (int j : ints) out.x[j] = std::round(out.x[j]);
    }
  };
  auto cutoff = [&](double bound) {
    if (!out.has_incumbent()) return false;
    return bound >= out.objective - opts.rel_gap * std::max(1.0, std::abs(out.objective));
  };

  // Fix the integers at rounded relaxation values and re-solve for the rest.
  auto try_rounding = [&](const lp::LpSolution& sol, const std::vector<double>& lo, const std::vector<double>& up) {
    std::vector<double> fix(K);
    for (int mode = 0; mode < 2; ++mode) {
      bool same = mode == 1;
      for (std::size_t k = 0; k < K; ++k) {
        const double v = sol.x[ints[k]];
        const double r = std::clamp(mode == 0 ? std::floor(v + opts.int_tol) : std::round(v), lo[k], up[k]);
        same = same && r == fix[k];
        fix[k] = r;
      }
      if (same) continue;
      apply(fix, fix);
      const auto h = lp::solve_lp(work, opts.lp, &sol.basis);
      out.lp_iterations += h.iterations;
      if (h.status == lp::LpStatus::Optimal) accept(h);
    }
  };

  std::vector<double> root_lo(K), root_up(K);
  for (std::size_t k = 0; k < K; ++k) {
    root_lo[k] = std::ceil(mip.lp.lower[ints[k]] - opts.int_tol);
    root_up[k] = std::floor(mip.lp.upper[ints[k]] + opts.int_tol);
  }

  if (start != nullptr && start->size() == static_cast<std::size_t>(mip.lp.num_cols())) {
    std::vector<double> lo(K), up(K);
    bool inside = true;
    for (std::size_t k = 0; k < K; ++k) {
      lo[k] = up[k] = std::round((*start)[ints[k]]);
      inside = inside && lo[k] >= root_lo[k] && lo[k] <= root_up[k];
    }
    if (inside) {
      apply(lo, up);
      const auto sol = lp::solve_lp(work, opts.lp, root_warm);
      out.lp_iterations += sol.iterations;
      if (sol.status == lp::LpStatus::Optimal) accept(sol);
    }
  }

  std::priority_queue<std::shared_ptr<detail::Node>, std::vector<std::shared_ptr<detail::Node>>, detail::NodeOrder> open;
  long next_id = 0;
  {
    auto root = std::make_shared<detail::Node>();
    root->id = next_id++;
    root->lo = root_lo;
    root->up = root_up;
    if (root_warm != nullptr) root->basis = std::make_shared<lp::Basis>(*root_warm);
    open.push(root);
  }

  bool root_done = false;
  bool limit = false;
  while (!open.empty()) {
    auto node = open.top();
    out.best_bound = std::max(out.best_bound, std::min(node->bound, out.objective));
    if (cutoff(node->bound)) break;
    if (out.nodes >= opts.node_limit) {
      limit = true;
      break;
    }
    open.pop();
    ++out.nodes;
    bool empty_box = false;
    for (std::size_t k = 0; k < K; ++k) empty_box = empty_box || node->lo[k] > node->up[k];
    if (empty_box) continue;
    apply(node->lo, node->up);
    auto sol = lp::solve_lp(work, opts.lp, node->basis.get());
    out.lp_iterations += sol.iterations;
    if (sol.status == lp::LpStatus::IterationLimit && node->basis) {
      sol = lp::solve_lp(work, opts.lp);
      out.lp_iterations += sol.iterations;
    }
    if (!root_done) {
      root_done = true;
      out.root_basis = sol.basis;
    }
    if (sol.status == lp::LpStatus::Infeasible) continue;
    if (sol.status == lp::LpStatus::Unbounded) throw std::runtime_error("solve_milp: relaxation unbounded");
    if (sol.status != lp::LpStatus::Optimal) throw std::runtime_error("solve_milp: relaxation hit the pivot limit");
    const double bound = std::max(node->bound, sol.objective);
    if (cutoff(bound)) continue;
    const int k = fractional(sol.x);
    if (k < 0) {
      accept(sol);
      continue;
    }
    if (out.nodes <= 20 || out.nodes % opts.heuristic_every == 0) try_rounding(sol, node->lo, node->up);
    const double v = sol.x[ints[k]];
    // Reduced-cost tightening: a nonbasic integer column cannot move further
    // than the incumbent slack allows.
    std::vector<double> lo = node->lo, up = node->up;
    if (out.has_incumbent()) {
      const double slack = out.objective - sol.objective;
      for (std::size_t q = 0; q < K; ++q) {
        const int j = ints[q];
        const double d = sol.reduced_costs[j];
        if (sol.basis.status[j] == lp::VarStatus::AtLower && d > opts.lp.dual_tol) {
          up[q] = std::min(up[q], lo[q] + std::floor(slack / d + opts.int_tol));
        } else if (sol.basis.status[j] == lp::VarStatus::AtUpper && d < -opts.lp.dual_tol) {
          lo[q] = std::max(lo[q], up[q] - std::floor(slack / -d + opts.int_tol));
        }
      }
    }
    auto basis = std::make_shared<const lp::Basis>(sol.basis);
    auto down = std::make_shared<detail::Node>();
    down->bound = bound;
    down->id = next_id++;
    down->lo = lo;
    down->up = up;
    down->up[k] = std::floor(v);
    down->basis = basis;
    auto upn = std::make_shared<detail::Node>();
    upn->bound = bound;
    upn->id = next_id++;
    upn->lo = lo;
    upn->up = up;
    upn->lo[k] = std::ceil(v);
    upn->basis = basis;
    open.push(down);
    open.push(upn);
  }

  if (open.empty()) {
    out.best_bound = out.has_incumbent() ? out.objective : lp::kInf;
  } else {
    out.best_bound = std::max(out.best_bound, std::min(open.top()->bound, out.objective));
  }
  if (!out.has_incumbent()) {
    out.status = limit ? MilpStatus::NodeLimit : MilpStatus::Infeasible;
    return out;
  }
  if (limit) {
    out.status = MilpStatus::NodeLimit;
  } else {
    out.status = relative_gap(out.objective, out.best_bound) <= opts.rel_gap + 1e-15 ? MilpStatus::Optimal
                                                                                   : MilpStatus::GapLimit;
  }
  return out;
}

}  // namespace wsn::milp
