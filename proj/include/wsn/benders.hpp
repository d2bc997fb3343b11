#pragma once

// L-shaped loop: integer master, one recourse LP per scenario, optimality
// cuts, and the knapsack / Pareto accelerations.

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsn/builders.hpp"

namespace wsn {

enum class Acceleration { None, Knapsack, KnapsackPareto };

inline const char* acceleration_name(Acceleration a) {
  switch (a) {
    case Acceleration::None: return "none";
    case Acceleration::Knapsack: return "knapsack";
    case Acceleration::KnapsackPareto: return "pareto";
  }
  return "?";
}

struct BendersOptions {
  double epsilon = 0.01;
  int max_iterations = 500;
  double time_limit_seconds = 12600.0;
  Acceleration acceleration = Acceleration::None;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  std::optional<InvestmentPlan> initial_plan;  // evaluated before the first master solve
  std::ostream* log = nullptr;                 // per-iteration lines when set
  std::vector<Cut>* cut_sink = nullptr;        // receives a copy of every optimality cut
  lp::LpOptions lp;
};

inline void validate_options(const BendersOptions& o) {
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  if (!(o.lambda > 0.0 && o.lambda < 1.0)) throw std::invalid_argument("lambda must be in (0,1)");
  if (o.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(o.time_limit_seconds > 0.0)) throw std::invalid_argument("time limit must be positive");
}

enum class Termination { GapReached, IterationLimit, TimeLimit };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::GapReached: return "gap";
    case Termination::IterationLimit: return "iterations";
    case Termination::TimeLimit: return "time";
  }
  return "?";
}

struct IterationRecord {
  int n = 0;
  double lb = -lp::kInf;
  double ub = lp::kInf;
  double gap = lp::kInf;
  double master_seconds = 0.0;
  double subproblem_seconds = 0.0;
  double elapsed_seconds = 0.0;
  int cuts_added = 0;
  long master_nodes = 0;
};

struct BendersTrace {
  std::vector<IterationRecord> iterations;
  InvestmentPlan plan;
  double investment = 0.0;
  std::vector<double> recourse;  // Theta(s) at `plan`, re-solved at the end
  double expected_recourse = 0.0;
  double objective = lp::kInf;   // investment + expected recourse
  double lower_bound = -lp::kInf;
  double gap = lp::kInf;
  Termination termination = Termination::IterationLimit;
  Acceleration acceleration = Acceleration::None;
  std::vector<RecourseSolution> flows;  // per scenario, at `plan`
  double seconds = 0.0;

  bool converged() const { return termination == Termination::GapReached; }
  int num_iterations() const { return static_cast<int>(iterations.size()); }

  /// Everything but wall-clock fields, at full precision.
  std::string canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "accel," << acceleration_name(acceleration) << "\n";
    for (const auto& r : iterations) {
      os << r.n << "," << r.lb << "," << r.ub << "," << r.gap << "," << r.cuts_added << "," << r.master_nodes << "\n";
    }
    os << "termination," << termination_name(termination) << "\nobjective," << objective << "\nlower_bound," << lower_bound
       << "\nplan";
    for (long z : plan.new_equipment) os << "," << z;
    os << ";";
    for (long y : plan.new_storage) os << "," << y;
    os << "\nrecourse";
    for (double t : recourse) os << "," << t;
    os << "\n";
    return os.str();
  }
};

using CorePoint = FractionalPlan;

inline CorePoint update_core_point(const CorePoint& core, const InvestmentPlan& plan, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must be in (0,1)");
  if (core.new_equipment.size() != plan.new_equipment.size() || core.new_storage.size() != plan.new_storage.size()) {
    throw std::invalid_argument("core point and plan sizes differ");
  }
  CorePoint next = core;
  for (std::size_t k = 0; k < next.new_equipment.size(); ++k) {
    next.new_equipment[k] = (1.0 - lambda) * core.new_equipment[k] + lambda * static_cast<double>(plan.new_equipment[k]);
  }
  for (std::size_t k = 0; k < next.new_storage.size(); ++k) {
    next.new_storage[k] = (1.0 - lambda) * core.new_storage[k] + lambda * static_cast<double>(plan.new_storage[k]);
  }
  return next;
}

struct BoundCandidates {
  double lb = -lp::kInf;
  double ub = lp::kInf;
};

inline BoundCandidates compute_bounds(double master_objective, double investment, const std::vector<double>& theta,
                                      const std::vector<double>& omega) {
  if (theta.size() != omega.size()) throw std::invalid_argument("compute_bounds: theta and omega sizes differ");
  double expected = 0.0;
  for (std::size_t s = 0; s < theta.size(); ++s) {
    if (!std::isfinite(theta[s])) throw std::invalid_argument("compute_bounds: scenario " + std::to_string(s) + " not solved");
    expected += omega[s] * theta[s];
  }
  return {master_objective, investment + expected};
}

inline BoundCandidates compute_bounds(double master_objective, double investment, const std::vector<lp::LpSolution>& subs,
                                      const std::vector<double>& omega) {
  std::vector<double> theta;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    if (subs[s].status != lp::LpStatus::Optimal) {
      throw std::runtime_error("scenario " + std::to_string(s) + " subproblem is " + lp::status_name(subs[s].status));
    }
    theta.push_back(subs[s].objective);
  }
  return compute_bounds(master_objective, investment, theta, omega);
}

inline double relative_gap(double lb, double ub) {
  if (!std::isfinite(lb) || !std::isfinite(ub)) return lp::kInf;
  if (ub == 0.0) return ub - lb;
  return (ub - lb) / std::abs(ub);
}

/// Recourse solves for one scenario family, warm-started from the last basis.
class ScenarioSolver {
 public:
  ScenarioSolver(const Instance& inst, const SubproblemShape& shape, lp::LpOptions opts = {})
      : inst_(inst), shape_(shape), opts_(opts), lp_(shape.lp), cache_(inst.sets.num_scenarios()) {}

  lp::LpSolution solve(int s, const CapacityRhs& cap) {
    set_subproblem_rhs(lp_, inst_, shape_, s, cap);
    auto& warm = cache_[s];
    auto sol = lp::solve_lp(lp_, opts_, warm ? &*warm : nullptr);
    if (sol.status != lp::LpStatus::Optimal && warm) sol = lp::solve_lp(lp_, opts_);
    if (sol.status != lp::LpStatus::Optimal) {
      throw std::runtime_error("recourse LP for scenario " + inst_.sets.scenarios[s] + " is " + lp::status_name(sol.status));
    }
    warm = sol.basis;
    return sol;
  }

 private:
  const Instance& inst_;
  const SubproblemShape& shape_;
  lp::LpOptions opts_;
  lp::LinearProgram lp_;
  std::vector<std::optional<lp::Basis>> cache_;
};

struct PlanEvaluation {
  double investment = 0.0;
  std::vector<double> recourse;
  double expected_recourse = 0.0;
  double total = 0.0;
  std::vector<RecourseSolution> flows;
};

/// phi(plan) + sum_s omega_s H(plan, s), every scenario solved from scratch.
inline PlanEvaluation evaluate_plan(const Instance& inst, const SubproblemShape& shape, const InvestmentPlan& plan,
                                    const lp::LpOptions& opts = {}) {
  PlanEvaluation ev;
  ev.investment = investment_cost(plan, inst);
  const auto cap = capacity_rhs(inst, plan);
  for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
    const auto sol = lp::solve_lp(build_subproblem(inst, shape, s, cap), opts);
    if (sol.status != lp::LpStatus::Optimal) {
      throw std::runtime_error("recourse LP for scenario " + inst.sets.scenarios[s] + " is " + lp::status_name(sol.status));
    }
    ev.recourse.push_back(sol.objective);
    ev.expected_recourse += inst.scenarios[s].probability * sol.objective;
    ev.flows.push_back(extract_recourse(shape, s, sol.x));
  }
  ev.total = ev.investment + ev.expected_recourse;
  return ev;
}

inline PlanEvaluation evaluate_plan(const Instance& inst, const InvestmentPlan& plan, const lp::LpOptions& opts = {}) {
  return evaluate_plan(inst, build_shape(inst), plan, opts);
}

namespace detail {

inline bool capacity_duals_zero(const SubproblemShape& sh, const lp::LpSolution& sol) {
  for (int r = 0; r < sh.num_rows(); ++r) {
    const RowFamily f = sh.rows[r].family;
    if ((f == RowFamily::Processing || f == RowFamily::Storage) && sol.duals[r] != 0.0) return false;
  }
  return true;
}

inline CorePoint half_upper_bounds(const MasterProblem& m) {
  CorePoint c;
  for (int j : m.z_col) c.new_equipment.push_back(0.5 * m.mip.lp.upper[j]);
  for (int j : m.y_col) c.new_storage.push_back(0.5 * m.mip.lp.upper[j]);
  return c;
}

}  // namespace detail

inline BendersTrace run_benders(const Instance& inst, const BendersOptions& opts) {
  validate_options(opts);
  require_valid(inst);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto since = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };

  const int NS = inst.sets.num_scenarios();
  std::vector<double> omega;
  for (const auto& sc : inst.scenarios) omega.push_back(sc.probability);
  const SubproblemShape shape = build_shape(inst);
  MasterProblem master = build_master(inst);
  ScenarioSolver sub(inst, shape, opts.lp);
  ScenarioSolver mw(inst, shape, opts.lp);
  const bool knapsack = opts.acceleration != Acceleration::None;
  const bool pareto = opts.acceleration == Acceleration::KnapsackPareto;

  milp::MilpOptions mopts;
  mopts.rel_gap = 0.1 * opts.epsilon;
  mopts.lp = opts.lp;

  BendersTrace trace;
  trace.acceleration = opts.acceleration;
  double lb = -lp::kInf, ub = lp::kInf;
  std::optional<InvestmentPlan> best;
  std::optional<lp::Basis> master_basis;
  std::vector<double> master_start;
  CorePoint core = FractionalPlan::zero(inst);
  bool first_mw = true;

  auto add_cuts = [&](const std::vector<lp::LpSolution>& sols, int n, bool from_core) {
    for (int s = 0; s < NS; ++s) {
      Cut cut = make_optimality_cut(inst, shape, s, sols[s], n);
      cut.pareto = from_core;
      if (opts.cut_sink != nullptr) opts.cut_sink->push_back(cut);
      master.add_cut(inst, cut);
    }
    return NS;
  };
  auto solve_all = [&](ScenarioSolver& solver, const CapacityRhs& cap) {
    std::vector<lp::LpSolution> sols;
    sols.reserve(NS);
    for (int s = 0; s < NS; ++s) sols.push_back(solver.solve(s, cap));
    return sols;
  };

  if (opts.initial_plan) {
    const auto sols = solve_all(sub, capacity_rhs(inst, *opts.initial_plan));
    const auto b = compute_bounds(-lp::kInf, investment_cost(*opts.initial_plan, inst), sols, omega);
    ub = b.ub;
    best = *opts.initial_plan;
    add_cuts(sols, 0, false);
    master_start = master.point_for(*opts.initial_plan);
  }

  for (int n = 1;; ++n) {
    IterationRecord rec;
    rec.n = n;
    const auto ts = clock::now();
    if (pareto) {
      auto sols = solve_all(mw, capacity_rhs(inst, core));
      if (first_mw) {
        first_mw = false;
        bool degenerate = true;
        for (const auto& s : sols) degenerate = degenerate && detail::capacity_duals_zero(shape, s);
        if (degenerate) {
          core = detail::half_upper_bounds(master);
          sols = solve_all(mw, capacity_rhs(inst, core));
        }
      }
      rec.cuts_added += add_cuts(sols, n, true);
    }
    rec.subproblem_seconds += since(ts);

    const auto tm = clock::now();
    const auto ms = milp::solve_milp(master.mip, mopts, master_basis ? &*master_basis : nullptr,
                                     master_start.empty() ? nullptr : &master_start);
    rec.master_seconds = since(tm);
    rec.master_nodes = ms.nodes;
    if (!ms.has_incumbent()) throw InstanceError(std::string("master problem is ") + milp::status_name(ms.status));
    master_basis = ms.root_basis;
    const InvestmentPlan plan = master.plan_from(inst, ms.x);
    master_start = ms.x;
    lb = std::max(lb, std::min(ms.best_bound, ms.objective));

    const auto ts2 = clock::now();
    const auto sols = solve_all(sub, capacity_rhs(inst, plan));
    rec.subproblem_seconds += since(ts2);
    const auto b = compute_bounds(lb, investment_cost(plan, inst), sols, omega);
    if (b.ub < ub) {
      ub = b.ub;
      best = plan;
    }
    // Rounding in the master can leave LB a hair above UB at convergence.
    lb = std::min(lb, ub);
    rec.lb = lb;
    rec.ub = ub;
    rec.gap = relative_gap(lb, ub);
    rec.elapsed_seconds = since(t0);

    bool stop = false;
    if (rec.gap <= opts.epsilon) {
      trace.termination = Termination::GapReached;
      stop = true;
    } else {
      rec.cuts_added += add_cuts(sols, n, false);
      if (knapsack) {
        if (auto k = make_knapsack_cut(inst, lb, n)) master.add_cut(inst, *k);
      }
      if (pareto) core = update_core_point(core, plan, opts.lambda);
      if (n >= opts.max_iterations) {
        trace.termination = Termination::IterationLimit;
        stop = true;
      } else if (since(t0) >= opts.time_limit_seconds) {
        trace.termination = Termination::TimeLimit;
        stop = true;
      }
    }
    trace.iterations.push_back(rec);
    if (opts.log != nullptr) {
      *opts.log << rec.n << "," << detail::fmt_num(rec.lb) << "," << detail::fmt_num(rec.ub) << ","
                << detail::fmt_num(rec.gap) << "," << detail::fmt_num(rec.elapsed_seconds) << "\n";
      opts.log->flush();
    }
    if (stop) break;
  }

  const auto ev = evaluate_plan(inst, shape, *best, opts.lp);
  trace.plan = *best;
  trace.investment = ev.investment;
  trace.recourse = ev.recourse;
  trace.expected_recourse = ev.expected_recourse;
  trace.objective = ev.total;
  trace.flows = ev.flows;
  trace.lower_bound = lb;
  trace.gap = relative_gap(lb, ev.total);
  trace.seconds = since(t0);
  return trace;
}

/// Knapsack inequalities with Pareto cuts, unless `opts.acceleration` says otherwise.
inline BendersTrace run_accelerated(const Instance& inst, BendersOptions opts) {
  if (opts.acceleration == Acceleration::None) opts.acceleration = Acceleration::KnapsackPareto;
  return run_benders(inst, opts);
}

}  // namespace wsn
