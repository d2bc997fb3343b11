#pragma once

// Value of the stochastic solution, expected value of perfect information,
// budget sweeps and flow / investment summaries.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsn/benders.hpp"

namespace wsn {

// ----- flow reports -----

struct ModeTotals {
  double tons = 0.0;
  double ton_miles = 0.0;
};

/// One scenario, or the probability-weighted mean of several.
/// Per-commodity vectors; `legs` is [mode * C + c] with Mode order truck, rail, barge.
struct FlowSummary {
  std::vector<ModeTotals> legs;
  std::vector<double> demand;
  std::vector<double> delivered_by_waterway;  // R legs out of destination ports
  std::vector<double> delivered_direct;       // O legs county to county
  std::vector<double> shortage;

  ModeTotals mode(Mode m) const {
    ModeTotals t;
    const std::size_t C = demand.size();
    for (std::size_t c = 0; c < C; ++c) {
      t.tons += legs[static_cast<std::size_t>(m) * C + c].tons;
      t.ton_miles += legs[static_cast<std::size_t>(m) * C + c].ton_miles;
    }
    return t;
  }
  double total(const std::vector<double>& v) const {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
};

struct InvestmentLine {
  int port = 0;
  bool storage = false;
  int kind = 0;
  long units = 0;
  double cost = 0.0;
};

struct FlowReport {
  std::vector<FlowSummary> per_scenario;
  FlowSummary expected;
  std::vector<InvestmentLine> investments;
};

namespace detail {

inline FlowSummary empty_summary(int C) {
  FlowSummary s;
  s.legs.assign(static_cast<std::size_t>(3) * C, {});
  s.demand.assign(C, 0.0);
  s.delivered_by_waterway.assign(C, 0.0);
  s.delivered_direct.assign(C, 0.0);
  s.shortage.assign(C, 0.0);
  return s;
}

inline Mode flow_mode(FlowKind k) {
  switch (k) {
    case FlowKind::Xr:
    case FlowKind::Rr:
    case FlowKind::Or: return Mode::Rail;
    case FlowKind::W: return Mode::Barge;
    default: return Mode::Truck;
  }
}

inline bool is_movement(FlowKind k) { return k != FlowKind::U && k != FlowKind::V && k != FlowKind::Q; }

}  // namespace detail

inline FlowSummary summarize_flows(const RecourseSolution& sol, const Instance& inst) {
  const int C = inst.C();
  auto out = detail::empty_summary(C);
  for (const auto& f : sol.flows) {
    if (detail::is_movement(f.kind)) {
      auto& leg = out.legs[static_cast<std::size_t>(detail::flow_mode(f.kind)) * C + f.commodity];
      leg.tons += f.tons;
      leg.ton_miles += f.tons * f.miles;
    }
    switch (f.kind) {
      case FlowKind::Rt:
      case FlowKind::Rr: out.delivered_by_waterway[f.commodity] += f.tons; break;
      case FlowKind::Ot:
      case FlowKind::Or: out.delivered_direct[f.commodity] += f.tons; break;
      case FlowKind::Q: out.shortage[f.commodity] += f.tons; break;
      default: break;
    }
  }
  for (int j : inst.sets.destination_counties)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= inst.P(); ++p) out.demand[c] += inst.demand(sol.scenario, j, c, p);
  return out;
}

inline std::vector<InvestmentLine> investment_lines(const InvestmentPlan& plan, const Instance& inst) {
  std::vector<InvestmentLine> out;
  const int E = inst.E(), F = inst.F();
  for (int i = 0; i < inst.sets.num_ports(); ++i) {
    for (int e = 0; e < E; ++e) {
      const long z = plan.new_equipment.at(static_cast<std::size_t>(i) * E + e);
      if (z != 0) out.push_back({i, false, e, z, inst.costs.equipment_cost[e] * static_cast<double>(z)});
    }
    for (int f = 0; f < F; ++f) {
      const long y = plan.new_storage.at(static_cast<std::size_t>(i) * F + f);
      if (y != 0) out.push_back({i, true, f, y, inst.costs.storage_cost[f] * static_cast<double>(y)});
    }
  }
  return out;
}

inline FlowReport flow_report(const std::vector<RecourseSolution>& sols, const Instance& inst,
                              const InvestmentPlan& plan) {
  FlowReport r;
  r.expected = detail::empty_summary(inst.C());
  for (const auto& sol : sols) {
    r.per_scenario.push_back(summarize_flows(sol, inst));
    const double w = inst.scenarios.at(sol.scenario).probability;
    const auto& s = r.per_scenario.back();
    auto acc = [w](std::vector<double>& into, const std::vector<double>& v) {
      for (std::size_t k = 0; k < v.size(); ++k) into[k] += w * v[k];
    };
    for (std::size_t k = 0; k < s.legs.size(); ++k) {
      r.expected.legs[k].tons += w * s.legs[k].tons;
      r.expected.legs[k].ton_miles += w * s.legs[k].ton_miles;
    }
    acc(r.expected.demand, s.demand);
    acc(r.expected.delivered_by_waterway, s.delivered_by_waterway);
    acc(r.expected.delivered_direct, s.delivered_direct);
    acc(r.expected.shortage, s.shortage);
  }
  r.investments = investment_lines(plan, inst);
  return r;
}

// ----- solving one instance to a reported plan -----

struct AnalysisOptions {
  BendersOptions benders;
  // Extensive-form MILP is used when its column count stays below this; Benders otherwise.
  std::size_t exact_column_limit = 4000;
};

struct SolvedPlan {
  InvestmentPlan plan;
  PlanEvaluation value;
  bool exact = false;
  bool converged = true;
  int iterations = 0;
  double gap = 0.0;
};

inline std::size_t extensive_columns(const Instance& inst) {
  const auto sh = build_shape(inst);
  return static_cast<std::size_t>(inst.sets.num_ports()) * (inst.E() + inst.F()) +
         static_cast<std::size_t>(inst.sets.num_scenarios()) * sh.num_cols();
}

/// Optimal plan of `inst`, always valued by `evaluate_plan` so every caller
/// compares numbers produced the same way.
inline SolvedPlan solve_plan(const Instance& inst, const AnalysisOptions& opts) {
  require_valid(inst);
  SolvedPlan out;
  if (extensive_columns(inst) <= opts.exact_column_limit) {
    const auto ef = build_extensive_form(inst);
    milp::MilpOptions mo;
    mo.rel_gap = 1e-9;
    mo.lp = opts.benders.lp;
    const auto sol = milp::solve_milp(ef.mip, mo);
    if (sol.status != milp::MilpStatus::Optimal) {
      throw std::runtime_error(std::string("extensive form is ") + milp::status_name(sol.status));
    }
    out.plan = ef.plan_from(inst, sol.x);
    out.exact = true;
  } else {
    const auto t = run_benders(inst, opts.benders);
    out.plan = t.plan;
    out.converged = t.converged();
    out.iterations = t.num_iterations();
    out.gap = t.gap;
  }
  out.value = evaluate_plan(inst, out.plan, opts.benders.lp);
  return out;
}

/// The instance restricted to scenario `s`, with probability one.
inline Instance scenario_instance(const Instance& inst, int s) {
  Instance one = inst;
  one.sets.scenarios = {inst.sets.scenarios.at(s)};
  one.scenarios = {inst.scenarios.at(s)};
  one.scenarios[0].probability = 1.0;
  return one;
}

/// One scenario holding the probability-weighted mean supply and demand.
inline Instance mean_value_instance(const Instance& inst) {
  if (inst.sets.num_scenarios() == 1) return scenario_instance(inst, 0);
  Instance mean = inst;
  ScenarioData avg;
  avg.probability = 1.0;
  avg.supply.assign(inst.scenarios.at(0).supply.size(), 0.0);
  avg.demand.assign(inst.scenarios.at(0).demand.size(), 0.0);
  for (const auto& sc : inst.scenarios) {
    for (std::size_t k = 0; k < avg.supply.size(); ++k) avg.supply[k] += sc.probability * sc.supply[k];
    for (std::size_t k = 0; k < avg.demand.size(); ++k) avg.demand[k] += sc.probability * sc.demand[k];
  }
  mean.sets.scenarios = {"mean"};
  mean.scenarios = {avg};
  return mean;
}

// ----- VSS and EVPI -----

inline double vss_from(double sp, double eev) { return eev - sp; }

struct WaitAndSee {
  double expected = 0.0;
  double evpi = 0.0;
};

inline WaitAndSee evpi_from(double sp, const std::vector<double>& ws, const std::vector<double>& weights) {
  if (ws.size() != weights.size()) throw std::invalid_argument("one weight per wait-and-see value");
  WaitAndSee r;
  for (std::size_t s = 0; s < ws.size(); ++s) r.expected += weights[s] * ws[s];
  r.evpi = sp - r.expected;
  return r;
}

struct StochasticValueReport {
  double sp_objective = 0.0;
  InvestmentPlan sp_plan;
  double ev_objective = 0.0;   // optimum of the mean-value problem
  InvestmentPlan ev_plan;
  double eev = 0.0;            // mean-value plan under the real scenarios
  std::vector<double> ws_per_scenario;
  double ws_expected = 0.0;
  double vss = 0.0;
  double evpi = 0.0;
  bool exact = true;
};

inline StochasticValueReport compute_vss(const Instance& inst, const AnalysisOptions& opts,
                                         const SolvedPlan* sp_known = nullptr) {
  StochasticValueReport r;
  const SolvedPlan sp = sp_known ? *sp_known : solve_plan(inst, opts);
  r.sp_objective = sp.value.total;
  r.sp_plan = sp.plan;
  const auto ev = solve_plan(mean_value_instance(inst), opts);
  r.ev_objective = ev.value.total;
  r.ev_plan = ev.plan;
  r.eev = ev.plan == sp.plan ? sp.value.total : evaluate_plan(inst, ev.plan, opts.benders.lp).total;
  r.vss = vss_from(r.sp_objective, r.eev);
  r.exact = sp.exact && ev.exact;
  return r;
}

inline StochasticValueReport compute_evpi(const Instance& inst, const AnalysisOptions& opts,
                                          const SolvedPlan* sp_known = nullptr) {
  StochasticValueReport r;
  const SolvedPlan sp = sp_known ? *sp_known : solve_plan(inst, opts);
  r.sp_objective = sp.value.total;
  r.sp_plan = sp.plan;
  r.exact = sp.exact;
  std::vector<double> weights;
  for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
    const auto ws = inst.sets.num_scenarios() == 1 ? sp : solve_plan(scenario_instance(inst, s), opts);
    r.ws_per_scenario.push_back(ws.value.total);
    weights.push_back(inst.scenarios[s].probability);
    r.exact = r.exact && ws.exact;
  }
  const auto w = evpi_from(r.sp_objective, r.ws_per_scenario, weights);
  r.ws_expected = w.expected;
  r.evpi = w.evpi;
  return r;
}

/// Both metrics from one stochastic solve.
inline StochasticValueReport stochastic_values(const Instance& inst, const AnalysisOptions& opts) {
  const auto sp = solve_plan(inst, opts);
  auto r = compute_vss(inst, opts, &sp);
  const auto e = compute_evpi(inst, opts, &sp);
  r.ws_per_scenario = e.ws_per_scenario;
  r.ws_expected = e.ws_expected;
  r.evpi = e.evpi;
  r.exact = r.exact && e.exact;
  return r;
}

// ----- budget sweep -----

struct SweepRow {
  double budget = 0.0;
  double total_cost = 0.0;
  double investment = 0.0;
  double expected_recourse = 0.0;
  double unit_cost = 0.0;  // total cost per expected demand ton
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  InvestmentPlan plan;
  FlowReport flows;
};

/// Budgets must be ascending. Each point starts from the previous point's plan,
/// which stays feasible as the budget grows.
inline std::vector<SweepRow> budget_sweep(const Instance& inst, const std::vector<double>& budgets,
                                          const BendersOptions& opts) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) throw std::invalid_argument("budgets must be sorted ascending");
  std::vector<SweepRow> rows;
  double demand_tons = 0.0;
  for (int s = 0; s < inst.sets.num_scenarios(); ++s)
    for (double d : inst.scenarios[s].demand) demand_tons += inst.scenarios[s].probability * d;
  std::optional<InvestmentPlan> previous;
  for (double b : budgets) {
    if (!rows.empty() && rows.back().budget == b) {
      rows.push_back(rows.back());
      continue;
    }
    Instance at = inst;
    at.costs.budget = b;
    BendersOptions o = opts;
    if (previous) o.initial_plan = previous;
    const auto t = run_benders(at, o);
    SweepRow row;
    row.budget = b;
    row.total_cost = t.objective;
    row.investment = t.investment;
    row.expected_recourse = t.expected_recourse;
    row.unit_cost = demand_tons > 0.0 ? t.objective / demand_tons : 0.0;
    row.gap = t.gap;
    row.iterations = t.num_iterations();
    row.converged = t.converged();
    row.seconds = t.seconds;
    row.plan = t.plan;
    row.flows = flow_report(t.flows, at, t.plan);
    previous = t.plan;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace wsn
