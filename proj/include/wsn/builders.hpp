#pragma once

// Turns an Instance into the optimization problems of the decomposition:
// the integer master, the per-scenario recourse LP and its dual, and the
// monolithic extensive form used as an oracle.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsn/lp.hpp"
#include "wsn/milp.hpp"
#include "wsn/model.hpp"

namespace wsn {

/// Right-hand sides of the processing and storage rows, in tons:
/// m_e (n_ie + Z_ie) at [i * E + e] and l_f (k_if + Y_if) at [i * F + f].
struct CapacityRhs {
  std::vector<double> equipment;
  std::vector<double> storage;
};

inline CapacityRhs capacity_rhs(const Instance& inst, const FractionalPlan& plan) {
  const int I = inst.sets.num_ports(), E = inst.E(), F = inst.F();
  if (plan.new_equipment.size() != static_cast<std::size_t>(I) * E ||
      plan.new_storage.size() != static_cast<std::size_t>(I) * F) {
    throw InstanceError("plan size does not match ports x kinds");
  }
  CapacityRhs r;
  r.equipment.resize(static_cast<std::size_t>(I) * E);
  r.storage.resize(static_cast<std::size_t>(I) * F);
  for (int i = 0; i < I; ++i) {
    for (int e = 0; e < E; ++e) {
      r.equipment[i * E + e] = inst.existing_equipment_capacity(i, e) + inst.caps.equip_capacity[e] * plan.new_equipment[i * E + e];
    }
    for (int f = 0; f < F; ++f) {
      r.storage[i * F + f] = inst.existing_storage_capacity(i, f) + inst.caps.storage_capacity[f] * plan.new_storage[i * F + f];
    }
  }
  return r;
}

inline CapacityRhs capacity_rhs(const Instance& inst, const InvestmentPlan& plan) {
  return capacity_rhs(inst, FractionalPlan::from(plan));
}

enum class RowFamily { Supply, Demand, OriginBalance, DestinationBalance, Processing, Storage };

struct RowInfo {
  RowFamily family = RowFamily::Supply;
  int node = 0;       // county (supply/demand) or port
  int commodity = -1;
  int period = 1;
  int kind = -1;      // equipment (processing) or storage (storage) kind
};

/// Scenario-independent structure of the recourse LP. Only the supply/demand
/// and capacity right-hand sides change between scenarios and plans.
struct SubproblemShape {
  lp::LinearProgram lp;            // rhs filled with zeros
  std::vector<FlowRecord> columns; // column descriptors (tons = 0)
  std::vector<RowInfo> rows;
  std::vector<int> supply_row;     // [cp_index(j, c, p)] or -1
  std::vector<int> demand_row;
  std::vector<int> origin_row;     // [(i * C + c) * P + p - 1]
  std::vector<int> dest_row;
  std::vector<int> processing_row; // [(i * P + p - 1) * E + e]
  std::vector<int> storage_row;    // [(i * P + p - 1) * F + f]

  int num_rows() const { return lp.num_rows(); }
  int num_cols() const { return lp.num_cols(); }
};

/// Largest count of a unit of price `unit_cost` that fits in `budget`.
inline double budget_units(double budget, double unit_cost) {
  return std::floor(budget / unit_cost * (1.0 + 1e-12));
}

namespace detail {

inline std::string tag_cp(const Instance& inst, const char* node_key, const std::string& node, int c, int p) {
  return std::string(node_key) + "=" + node + ",c=" + inst.sets.commodities[c] + ",p=" + std::to_string(p);
}

}  // namespace detail

inline SubproblemShape build_shape(const Instance& inst) {
  const auto& S = inst.sets;
  const int I = S.num_ports(), J = S.num_counties(), C = inst.C(), P = inst.P(), E = inst.E(), F = inst.F();
  SubproblemShape sh;
  std::vector<char> orig_county(J, 0), dest_county(J, 0), orig_port(I, 0), dest_port(I, 0);
  for (int j : S.origin_counties) orig_county[j] = 1;
  for (int j : S.destination_counties) dest_county[j] = 1;
  for (int i : S.origin_ports) orig_port[i] = 1;
  for (int i : S.destination_ports) dest_port[i] = 1;

  // Coefficients per row key, filled while columns are created.
  const std::size_t ncp = static_cast<std::size_t>(J) * C * P;
  const std::size_t npc = static_cast<std::size_t>(I) * C * P;
  std::vector<std::vector<std::pair<int, double>>> sup(ncp), dem(ncp), ob(npc), db(npc);
  std::vector<std::vector<std::pair<int, double>>> proc(static_cast<std::size_t>(I) * P * E), stor(static_cast<std::size_t>(I) * P * F);
  auto pc = [&](int i, int c, int p) { return (static_cast<std::size_t>(i) * C + c) * P + (p - 1); };
  auto pe = [&](int i, int p, int e) { return (static_cast<std::size_t>(i) * P + (p - 1)) * E + e; };
  auto pf = [&](int i, int p, int f) { return (static_cast<std::size_t>(i) * P + (p - 1)) * F + f; };

  auto add_col = [&](FlowRecord rec, double cost, std::string name) {
    const int col = sh.lp.add_column(cost, 0.0, lp::kInf, std::move(name));
    sh.columns.push_back(rec);
    return col;
  };
  const auto& K = inst.costs;
  for (int c = 0; c < C; ++c) {
    for (int p = 1; p <= P; ++p) {
      const std::string cp = ",c=" + S.commodities[c] + ",p=" + std::to_string(p);
      // County -> origin port, by equipment.
      for (const auto& l : K.county_port) {
        if (!orig_county[l.a] || !orig_port[l.b] || l.mode == Mode::Barge) continue;
        const FlowKind k = l.mode == Mode::Truck ? FlowKind::Xt : FlowKind::Xr;
        for (int e = 0; e < E; ++e) {
          if (!inst.equip_ok(e, c)) continue;
          const int col = add_col({k, l.a, l.b, c, p, e, l.miles, 0.0}, l.cost_per_ton,
                                  std::string(flow_kind_name(k)) + "/j=" + S.counties[l.a] + ",i=" + S.ports[l.b] + cp + ",e=" + S.equipment_kinds[e]);
          sup[inst.cp_index(l.a, c, p)].emplace_back(col, 1.0);
          ob[pc(l.b, c, p)].emplace_back(col, 1.0);
          proc[pe(l.b, p, e)].emplace_back(col, inst.lambda(e, c));
        }
      }
      // Origin port -> destination port by barge.
      for (const auto& l : K.port_port) {
        for (int dir = 0; dir < 2; ++dir) {
          const int i = dir == 0 ? l.a : l.b;
          const int k2 = dir == 0 ? l.b : l.a;
          if (i == k2 || !orig_port[i] || !dest_port[k2]) continue;
          if (dir == 1 && l.a == l.b) continue;
          for (int e = 0; e < E; ++e) {
            if (!inst.equip_ok(e, c)) continue;
            const int col = add_col({FlowKind::W, i, k2, c, p, e, l.miles, 0.0}, l.cost_per_ton,
                                    "W/i=" + S.ports[i] + ",k=" + S.ports[k2] + cp + ",e=" + S.equipment_kinds[e]);
            ob[pc(i, c, p)].emplace_back(col, -1.0);
            db[pc(k2, c, p)].emplace_back(col, 1.0);
            proc[pe(i, p, e)].emplace_back(col, inst.lambda(e, c));
            proc[pe(k2, p, e)].emplace_back(col, inst.lambda(e, c));
          }
        }
      }
      // Destination port -> county, by equipment.
      for (const auto& l : K.county_port) {
        if (!dest_county[l.a] || !dest_port[l.b] || l.mode == Mode::Barge) continue;
        const FlowKind k = l.mode == Mode::Truck ? FlowKind::Rt : FlowKind::Rr;
        for (int e = 0; e < E; ++e) {
          if (!inst.equip_ok(e, c)) continue;
          const int col = add_col({k, l.b, l.a, c, p, e, l.miles, 0.0}, l.cost_per_ton,
                                  std::string(flow_kind_name(k)) + "/i=" + S.ports[l.b] + ",j=" + S.counties[l.a] + cp + ",e=" + S.equipment_kinds[e]);
          dem[inst.cp_index(l.a, c, p)].emplace_back(col, 1.0);
          db[pc(l.b, c, p)].emplace_back(col, -1.0);
          proc[pe(l.b, p, e)].emplace_back(col, inst.lambda(e, c));
        }
      }
      // County -> county, either orientation of an undirected link.
      for (const auto& l : K.county_county) {
        if (l.mode == Mode::Barge) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const int j = dir == 0 ? l.a : l.b;
          const int m = dir == 0 ? l.b : l.a;
          if (j == m || !orig_county[j] || !dest_county[m]) continue;
          const FlowKind k = l.mode == Mode::Truck ? FlowKind::Ot : FlowKind::Or;
          const int col = add_col({k, j, m, c, p, -1, l.miles, 0.0}, l.cost_per_ton,
                                  std::string(flow_kind_name(k)) + "/j=" + S.counties[j] + ",m=" + S.counties[m] + cp);
          sup[inst.cp_index(j, c, p)].emplace_back(col, 1.0);
          dem[inst.cp_index(m, c, p)].emplace_back(col, 1.0);
        }
      }
      // Inventories carried from p to p + 1 (none enter period 1).
      for (int i : S.origin_ports) {
        for (int f = 0; f < F; ++f) {
          if (!inst.storage_ok(f, c)) continue;
          const int col = add_col({FlowKind::U, i, i, c, p, f, 0.0, 0.0}, K.holding_cost[c],
                                  "U/i=" + S.ports[i] + cp + ",f=" + S.storage_kinds[f]);
          ob[pc(i, c, p)].emplace_back(col, -1.0);
          if (p < P) ob[pc(i, c, p + 1)].emplace_back(col, 1.0);
          stor[pf(i, p, f)].emplace_back(col, inst.zeta(f, c));
        }
      }
      for (int i : S.destination_ports) {
        for (int f = 0; f < F; ++f) {
          if (!inst.storage_ok(f, c)) continue;
          const int col = add_col({FlowKind::V, i, i, c, p, f, 0.0, 0.0}, K.holding_cost[c],
                                  "V/i=" + S.ports[i] + cp + ",f=" + S.storage_kinds[f]);
          db[pc(i, c, p)].emplace_back(col, -1.0);
          if (p < P) db[pc(i, c, p + 1)].emplace_back(col, 1.0);
          stor[pf(i, p, f)].emplace_back(col, inst.zeta(f, c));
        }
      }
      for (int m : S.destination_counties) {
        const int col = add_col({FlowKind::Q, m, m, c, p, -1, 0.0, 0.0}, K.shortage_penalty, "Q/j=" + S.counties[m] + cp);
        dem[inst.cp_index(m, c, p)].emplace_back(col, 1.0);
      }
    }
  }
  auto emit = [&](std::vector<std::pair<int, double>>& coefs, lp::RowSense sense, RowInfo info, std::string name) {
    if (coefs.empty()) return -1;
    std::sort(coefs.begin(), coefs.end());
    sh.rows.push_back(info);
    return sh.lp.add_row(sense, 0.0, coefs, std::move(name));
  };
  sh.supply_row.assign(ncp, -1);
  sh.demand_row.assign(ncp, -1);
  sh.origin_row.assign(npc, -1);
  sh.dest_row.assign(npc, -1);
  sh.processing_row.assign(static_cast<std::size_t>(I) * P * E, -1);
  sh.storage_row.assign(static_cast<std::size_t>(I) * P * F, -1);
  for (int j : S.origin_counties)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= P; ++p) {
        const auto k = inst.cp_index(j, c, p);
        sh.supply_row[k] = emit(sup[k], lp::RowSense::LessEqual, {RowFamily::Supply, j, c, p, -1},
                                "eq6/" + detail::tag_cp(inst, "j", S.counties[j], c, p));
      }
  for (int m : S.destination_counties)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= P; ++p) {
        const auto k = inst.cp_index(m, c, p);
        sh.demand_row[k] = emit(dem[k], lp::RowSense::Equal, {RowFamily::Demand, m, c, p, -1},
                                "eq7/" + detail::tag_cp(inst, "j", S.counties[m], c, p));
      }
  for (int i : S.origin_ports)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= P; ++p) {
        sh.origin_row[pc(i, c, p)] = emit(ob[pc(i, c, p)], lp::RowSense::Equal, {RowFamily::OriginBalance, i, c, p, -1},
                                          "eq8/" + detail::tag_cp(inst, "i", S.ports[i], c, p));
      }
  for (int i : S.destination_ports)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= P; ++p) {
        sh.dest_row[pc(i, c, p)] = emit(db[pc(i, c, p)], lp::RowSense::Equal, {RowFamily::DestinationBalance, i, c, p, -1},
                                        "eq9/" + detail::tag_cp(inst, "i", S.ports[i], c, p));
      }
  for (int i = 0; i < I; ++i)
    for (int p = 1; p <= P; ++p)
      for (int e = 0; e < E; ++e) {
        sh.processing_row[pe(i, p, e)] =
            emit(proc[pe(i, p, e)], lp::RowSense::LessEqual, {RowFamily::Processing, i, -1, p, e},
                 "eq10/i=" + S.ports[i] + ",p=" + std::to_string(p) + ",e=" + S.equipment_kinds[e]);
      }
  for (int i = 0; i < I; ++i)
    for (int p = 1; p <= P; ++p)
      for (int f = 0; f < F; ++f) {
        sh.storage_row[pf(i, p, f)] =
            emit(stor[pf(i, p, f)], lp::RowSense::LessEqual, {RowFamily::Storage, i, -1, p, f},
                 "eq11/i=" + S.ports[i] + ",p=" + std::to_string(p) + ",f=" + S.storage_kinds[f]);
      }
  return sh;
}

/// Right-hand side of shape row `r` for scenario `s` and capacities `cap`.
inline double row_rhs(const Instance& inst, const SubproblemShape& sh, int r, int s, const CapacityRhs& cap) {
  const RowInfo& ri = sh.rows[r];
  switch (ri.family) {
    case RowFamily::Supply: return inst.supply(s, ri.node, ri.commodity, ri.period);
    case RowFamily::Demand: return inst.demand(s, ri.node, ri.commodity, ri.period);
    case RowFamily::OriginBalance:
    case RowFamily::DestinationBalance: return 0.0;
    case RowFamily::Processing: return cap.equipment[ri.node * inst.E() + ri.kind];
    case RowFamily::Storage: return cap.storage[ri.node * inst.F() + ri.kind];
  }
  return 0.0;
}

/// Refreshes every right-hand side of an LP created from `sh`.
inline void set_subproblem_rhs(lp::LinearProgram& lp, const Instance& inst, const SubproblemShape& sh, int s,
                               const CapacityRhs& cap) {
  for (int r = 0; r < sh.num_rows(); ++r) lp.rhs[r] = row_rhs(inst, sh, r, s, cap);
}

inline lp::LinearProgram build_subproblem(const Instance& inst, const SubproblemShape& sh, int s, const CapacityRhs& cap) {
  lp::LinearProgram lp = sh.lp;
  set_subproblem_rhs(lp, inst, sh, s, cap);
  return lp;
}

inline lp::LinearProgram build_subproblem(const Instance& inst, int s, const InvestmentPlan& plan) {
  const auto sh = build_shape(inst);
  return build_subproblem(inst, sh, s, capacity_rhs(inst, plan));
}

inline const char* dual_row_family(const FlowRecord& col, int periods) {
  switch (col.kind) {
    case FlowKind::Xt: return "DS_xt";
    case FlowKind::Xr: return "DS_xr";
    case FlowKind::U: return col.period < periods ? "DS_u1" : "DS_u2";
    case FlowKind::W: return "DS_w";
    case FlowKind::V: return col.period < periods ? "DS_v1" : "DS_v2";
    case FlowKind::Rt: return "DS_rt";
    case FlowKind::Rr: return "DS_rr";
    case FlowKind::Ot: return "DS_ot";
    case FlowKind::Or: return "DS_or";
    case FlowKind::Q: return "DS_e";
  }
  return "DS";
}

/// Dual of the recourse LP: one free or sign-restricted variable per primal
/// row (same order and tags), one <= row per primal column.
inline lp::LinearProgram build_dual_subproblem(const Instance& inst, const SubproblemShape& sh, int s, const CapacityRhs& cap) {
  lp::LinearProgram d;
  d.sense = lp::Sense::Maximize;
  for (int r = 0; r < sh.num_rows(); ++r) {
    const RowFamily fam = sh.rows[r].family;
    const bool nonpositive = fam == RowFamily::Supply || fam == RowFamily::Processing || fam == RowFamily::Storage;
    d.add_column(row_rhs(inst, sh, r, s, cap), -lp::kInf, nonpositive ? 0.0 : lp::kInf, sh.lp.row_names[r]);
  }
  std::vector<std::vector<std::pair<int, double>>> bycol(sh.num_cols());
  for (const auto& t : sh.lp.entries) bycol[t.col].emplace_back(t.row, t.value);
  for (int j = 0; j < sh.num_cols(); ++j) {
    const auto& name = sh.lp.col_names[j];
    const auto slash = name.find('/');
    d.add_row(lp::RowSense::LessEqual, sh.lp.cost[j], bycol[j],
              std::string(dual_row_family(sh.columns[j], inst.P())) + name.substr(slash));
  }
  return d;
}

inline lp::LinearProgram build_dual_subproblem(const Instance& inst, int s, const InvestmentPlan& plan) {
  const auto sh = build_shape(inst);
  return build_dual_subproblem(inst, sh, s, capacity_rhs(inst, plan));
}

/// Pareto subproblem: the dual feasible region with the objective evaluated
/// at the core point's capacities.
inline lp::LinearProgram build_mw_subproblem(const Instance& inst, const SubproblemShape& sh, int s, const FractionalPlan& core) {
  for (double v : core.new_equipment) {
    if (!(v >= 0.0)) throw InstanceError("core point must be nonnegative");
  }
  for (double v : core.new_storage) {
    if (!(v >= 0.0)) throw InstanceError("core point must be nonnegative");
  }
  return build_dual_subproblem(inst, sh, s, capacity_rhs(inst, core));
}

inline RecourseSolution extract_recourse(const SubproblemShape& sh, int s, const std::vector<double>& x,
                                         std::size_t offset = 0) {
  RecourseSolution rs;
  rs.scenario = s;
  rs.flows = sh.columns;
  double obj = 0.0;
  for (int j = 0; j < sh.num_cols(); ++j) {
    const double v = std::max(0.0, x[offset + j]);
    rs.flows[j].tons = v;
    obj += sh.lp.cost[j] * v;
  }
  rs.objective = obj;
  return rs;
}

// ----- cuts -----

enum class CutKind { Optimality, Knapsack };

/// Row form: sum theta_coef * theta + sum z_coef * Z + sum y_coef * Y >= constant.
struct Cut {
  CutKind kind = CutKind::Optimality;
  int scenario = -1;
  std::vector<double> theta_coef;
  std::vector<double> z_coef;  // [i * E + e]
  std::vector<double> y_coef;  // [i * F + f]
  double constant = 0.0;
  int iteration = 0;
  bool pareto = false;

  /// Lower bound implied on theta_s at `plan` (optimality cuts).
  double theta_bound(const FractionalPlan& plan) const {
    double v = constant;
    for (std::size_t k = 0; k < z_coef.size(); ++k) v -= z_coef[k] * plan.new_equipment[k];
    for (std::size_t k = 0; k < y_coef.size(); ++k) v -= y_coef[k] * plan.new_storage[k];
    return v;
  }
};

/// Optimality cut from row duals of scenario `s` (in shape row order).
inline Cut make_optimality_cut(const Instance& inst, const SubproblemShape& sh, int s, std::span<const double> duals,
                               int iteration = 0) {
  if (static_cast<int>(duals.size()) != sh.num_rows()) throw std::invalid_argument("make_optimality_cut: dual count does not match rows");
  const int I = inst.sets.num_ports(), E = inst.E(), F = inst.F();
  Cut cut;
  cut.kind = CutKind::Optimality;
  cut.scenario = s;
  cut.iteration = iteration;
  cut.theta_coef.assign(inst.sets.num_scenarios(), 0.0);
  cut.theta_coef[s] = 1.0;
  cut.z_coef.assign(static_cast<std::size_t>(I) * E, 0.0);
  cut.y_coef.assign(static_cast<std::size_t>(I) * F, 0.0);
  double constant = 0.0;
  for (int r = 0; r < sh.num_rows(); ++r) {
    const double y = duals[r];
    if (y == 0.0) continue;
    const RowInfo& ri = sh.rows[r];
    switch (ri.family) {
      case RowFamily::Supply: constant += y * inst.supply(s, ri.node, ri.commodity, ri.period); break;
      case RowFamily::Demand: constant += y * inst.demand(s, ri.node, ri.commodity, ri.period); break;
      case RowFamily::OriginBalance:
      case RowFamily::DestinationBalance: break;
      case RowFamily::Processing:
        constant += y * inst.existing_equipment_capacity(ri.node, ri.kind);
        cut.z_coef[ri.node * E + ri.kind] -= y * inst.caps.equip_capacity[ri.kind];
        break;
      case RowFamily::Storage:
        constant += y * inst.existing_storage_capacity(ri.node, ri.kind);
        cut.y_coef[ri.node * F + ri.kind] -= y * inst.caps.storage_capacity[ri.kind];
        break;
    }
  }
  // Dual noise on capacity rows: drop tiny terms, relaxing the constant by the worst case over the box.
  double big = 0.0;
  for (double c : cut.z_coef) big = std::max(big, std::abs(c));
  for (double c : cut.y_coef) big = std::max(big, std::abs(c));
  const double tiny = 1e-9 * std::max(big, std::abs(constant) * 1e-6);
  auto clean = [&](std::vector<double>& coef, const std::vector<double>& cost, int n) {
    for (std::size_t k = 0; k < coef.size(); ++k) {
      const double c = coef[k];
      if (c == 0.0 || std::abs(c) > tiny) continue;
      if (c > 0.0) constant -= c * budget_units(inst.costs.budget, cost[k % n]);
      coef[k] = 0.0;
    }
  };
  clean(cut.z_coef, inst.costs.equipment_cost, E);
  clean(cut.y_coef, inst.costs.storage_cost, F);
  cut.constant = constant;
  return cut;
}

inline Cut make_optimality_cut(const Instance& inst, const SubproblemShape& sh, int s, const lp::LpSolution& sol,
                               int iteration = 0) {
  if (sol.status != lp::LpStatus::Optimal) throw std::invalid_argument("make_optimality_cut: subproblem solution is not optimal");
  return make_optimality_cut(inst, sh, s, std::span<const double>(sol.duals), iteration);
}

/// Bounds the master objective expression below by `lb`; none for lb = -inf.
inline std::optional<Cut> make_knapsack_cut(const Instance& inst, double lb, int iteration = 0) {
  if (!std::isfinite(lb)) return std::nullopt;
  const int I = inst.sets.num_ports(), E = inst.E(), F = inst.F();
  Cut cut;
  cut.kind = CutKind::Knapsack;
  cut.iteration = iteration;
  cut.constant = lb;
  cut.theta_coef.resize(inst.sets.num_scenarios());
  for (int s = 0; s < inst.sets.num_scenarios(); ++s) cut.theta_coef[s] = inst.scenarios[s].probability;
  cut.z_coef.resize(static_cast<std::size_t>(I) * E);
  cut.y_coef.resize(static_cast<std::size_t>(I) * F);
  for (int i = 0; i < I; ++i) {
    for (int e = 0; e < E; ++e) cut.z_coef[i * E + e] = inst.costs.equipment_cost[e];
    for (int f = 0; f < F; ++f) cut.y_coef[i * F + f] = inst.costs.storage_cost[f];
  }
  return cut;
}

// ----- master -----

struct MasterProblem {
  milp::MixedIntegerProgram mip;
  std::vector<int> z_col;      // [i * E + e]
  std::vector<int> y_col;      // [i * F + f]
  std::vector<int> theta_col;  // [s]
  int budget_row = -1;
  int knapsack_row = -1;
  std::vector<Cut> cuts;       // optimality cuts in insertion order

  void add_cut(const Instance& inst, const Cut& cut) {
    if (cut.kind == CutKind::Knapsack) {
      set_knapsack(inst, cut);
      return;
    }
    std::vector<std::pair<int, double>> row;
    append_terms(cut, row);
    mip.lp.add_row(lp::RowSense::GreaterEqual, cut.constant, row,
                   "eq17/s=" + inst.sets.scenarios[cut.scenario] + ",n=" + std::to_string(cut.iteration) + (cut.pareto ? ",mw" : ""));
    cuts.push_back(cut);
  }

  /// The knapsack row is kept once and its bound replaced.
  void set_knapsack(const Instance& inst, const Cut& cut) {
    (void)inst;
    if (knapsack_row >= 0) {
      mip.lp.rhs[knapsack_row] = cut.constant;
      return;
    }
    std::vector<std::pair<int, double>> row;
    append_terms(cut, row);
    knapsack_row = mip.lp.add_row(lp::RowSense::GreaterEqual, cut.constant, row, "knapsack/lb");
  }

  InvestmentPlan plan_from(const Instance& inst, const std::vector<double>& x) const {
    InvestmentPlan plan = InvestmentPlan::zero(inst);
    for (std::size_t k = 0; k < z_col.size(); ++k) plan.new_equipment[k] = std::lround(x[z_col[k]]);
    for (std::size_t k = 0; k < y_col.size(); ++k) plan.new_storage[k] = std::lround(x[y_col[k]]);
    return plan;
  }

  std::vector<double> point_for(const InvestmentPlan& plan) const {
    std::vector<double> x(mip.lp.num_cols(), 0.0);
    for (std::size_t k = 0; k < z_col.size(); ++k) x[z_col[k]] = static_cast<double>(plan.new_equipment[k]);
    for (std::size_t k = 0; k < y_col.size(); ++k) x[y_col[k]] = static_cast<double>(plan.new_storage[k]);
    return x;
  }

 private:
  void append_terms(const Cut& cut, std::vector<std::pair<int, double>>& row) const {
    for (std::size_t k = 0; k < z_col.size(); ++k) {
      if (cut.z_coef[k] != 0.0) row.emplace_back(z_col[k], cut.z_coef[k]);
    }
    for (std::size_t k = 0; k < y_col.size(); ++k) {
      if (cut.y_coef[k] != 0.0) row.emplace_back(y_col[k], cut.y_coef[k]);
    }
    for (std::size_t s = 0; s < theta_col.size(); ++s) {
      if (cut.theta_coef[s] != 0.0) row.emplace_back(theta_col[s], cut.theta_coef[s]);
    }
    std::sort(row.begin(), row.end());
  }
};

namespace detail {

// Rows k_if + Y_if >= B_fe (n_ie + Z_ie), only where B_fe > 0.
inline void add_storage_ratio_rows(const Instance& inst, lp::LinearProgram& lp, const std::vector<int>& z_col,
                                   const std::vector<int>& y_col) {
  const int I = inst.sets.num_ports(), E = inst.E(), F = inst.F();
  for (int i = 0; i < I; ++i) {
    for (int f = 0; f < F; ++f) {
      for (int e = 0; e < E; ++e) {
        const double B = inst.caps.storage_ratio[f * E + e];
        if (B <= 0.0) continue;
        std::vector<std::pair<int, double>> row{{z_col[i * E + e], -B}, {y_col[i * F + f], 1.0}};
        std::sort(row.begin(), row.end());
        lp.add_row(lp::RowSense::GreaterEqual, B * inst.existing_equipment_units(i, e) - inst.existing_storage_units(i, f), row,
                   "ratio/i=" + inst.sets.ports[i] + ",f=" + inst.sets.storage_kinds[f] + ",e=" + inst.sets.equipment_kinds[e]);
      }
    }
  }
}

// A unit at a port whose recourse never touches that kind only adds cost, so
// its column is fixed at zero (unless storage-ratio rows may force storage).
inline void add_first_stage(const Instance& inst, const SubproblemShape& sh, lp::LinearProgram& lp,
                            std::vector<int>& integer_cols, std::vector<int>& z_col, std::vector<int>& y_col) {
  const auto& S = inst.sets;
  const int I = S.num_ports(), E = inst.E(), F = inst.F(), P = inst.P();
  const double b = inst.costs.budget;
  auto used = [&](const std::vector<int>& rows, int i, int k, int n) {
    for (int p = 0; p < P; ++p) {
      if (rows[(static_cast<std::size_t>(i) * P + p) * n + k] >= 0) return true;
    }
    return false;
  };
  for (int i = 0; i < I; ++i) {
    for (int e = 0; e < E; ++e) {
      const double kappa = inst.costs.equipment_cost[e];
      const double ub = used(sh.processing_row, i, e, E) ? budget_units(b, kappa) : 0.0;
      z_col.push_back(lp.add_column(kappa, 0.0, ub, "Z/i=" + S.ports[i] + ",e=" + S.equipment_kinds[e]));
      integer_cols.push_back(z_col.back());
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int f = 0; f < F; ++f) {
      const double iota = inst.costs.storage_cost[f];
      const bool keep = inst.enforce_storage_ratio || used(sh.storage_row, i, f, F);
      y_col.push_back(lp.add_column(iota, 0.0, keep ? budget_units(b, iota) : 0.0, "Y/i=" + S.ports[i] + ",f=" + S.storage_kinds[f]));
      integer_cols.push_back(y_col.back());
    }
  }
}

inline void add_budget_row(const Instance& inst, lp::LinearProgram& lp, const std::vector<int>& z_col,
                           const std::vector<int>& y_col, int& budget_row) {
  std::vector<std::pair<int, double>> row;
  for (int j : z_col) row.emplace_back(j, lp.cost[j]);
  for (int j : y_col) row.emplace_back(j, lp.cost[j]);
  budget_row = lp.add_row(lp::RowSense::LessEqual, inst.costs.budget, row, "eq2/budget");
}

}  // namespace detail

inline MasterProblem build_master(const Instance& inst, double theta_min = 0.0) {
  if (inst.costs.budget < 0.0) throw InstanceError("budget must be >= 0");
  MasterProblem m;
  auto& lp = m.mip.lp;
  detail::add_first_stage(inst, build_shape(inst), lp, m.mip.integer_cols, m.z_col, m.y_col);
  for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
    m.theta_col.push_back(lp.add_column(inst.scenarios[s].probability, theta_min, lp::kInf, "theta/s=" + inst.sets.scenarios[s]));
  }
  detail::add_budget_row(inst, lp, m.z_col, m.y_col, m.budget_row);
  if (inst.enforce_storage_ratio) detail::add_storage_ratio_rows(inst, lp, m.z_col, m.y_col);
  return m;
}

// ----- extensive form -----

struct ExtensiveForm {
  milp::MixedIntegerProgram mip;
  std::vector<int> z_col, y_col;
  std::vector<std::size_t> scenario_offset;  // first recourse column of each scenario
  std::shared_ptr<const SubproblemShape> shape;

  InvestmentPlan plan_from(const Instance& inst, const std::vector<double>& x) const {
    InvestmentPlan plan = InvestmentPlan::zero(inst);
    for (std::size_t k = 0; k < z_col.size(); ++k) plan.new_equipment[k] = std::lround(x[z_col[k]]);
    for (std::size_t k = 0; k < y_col.size(); ++k) plan.new_storage[k] = std::lround(x[y_col[k]]);
    return plan;
  }
  RecourseSolution recourse(int s, const std::vector<double>& x) const {
    return extract_recourse(*shape, s, x, scenario_offset[s]);
  }
};

inline constexpr std::size_t kDefaultExtensiveColumnLimit = 200000;

inline ExtensiveForm build_extensive_form(const Instance& inst, std::size_t max_columns = kDefaultExtensiveColumnLimit) {
  if (inst.costs.budget < 0.0) throw InstanceError("budget must be >= 0");
  ExtensiveForm ef;
  auto shape = std::make_shared<SubproblemShape>(build_shape(inst));
  const int I = inst.sets.num_ports(), E = inst.E(), F = inst.F(), NS = inst.sets.num_scenarios();
  const std::size_t total = static_cast<std::size_t>(I) * (E + F) + static_cast<std::size_t>(NS) * shape->num_cols();
  if (total > max_columns) {
    throw InstanceError("extensive form would have " + std::to_string(total) + " columns, above the limit of " +
                        std::to_string(max_columns));
  }
  auto& lp = ef.mip.lp;
  detail::add_first_stage(inst, *shape, lp, ef.mip.integer_cols, ef.z_col, ef.y_col);
  for (int s = 0; s < NS; ++s) {
    ef.scenario_offset.push_back(static_cast<std::size_t>(lp.num_cols()));
    const double w = inst.scenarios[s].probability;
    for (int j = 0; j < shape->num_cols(); ++j) {
      lp.add_column(w * shape->lp.cost[j], 0.0, lp::kInf, "s=" + inst.sets.scenarios[s] + "|" + shape->lp.col_names[j]);
    }
  }
  int budget_row = -1;
  detail::add_budget_row(inst, lp, ef.z_col, ef.y_col, budget_row);
  if (inst.enforce_storage_ratio) detail::add_storage_ratio_rows(inst, lp, ef.z_col, ef.y_col);

  // Scenario rows; capacity rows move m_e Z and l_f Y to the left side.
  std::vector<std::vector<std::pair<int, double>>> rows(shape->num_rows());
  for (const auto& t : shape->lp.entries) rows[t.row].emplace_back(t.col, t.value);
  const CapacityRhs existing = capacity_rhs(inst, InvestmentPlan::zero(inst));
  for (int s = 0; s < NS; ++s) {
    const int off = static_cast<int>(ef.scenario_offset[s]);
    for (int r = 0; r < shape->num_rows(); ++r) {
      std::vector<std::pair<int, double>> row;
      const RowInfo& ri = shape->rows[r];
      if (ri.family == RowFamily::Processing) row.emplace_back(ef.z_col[ri.node * E + ri.kind], -inst.caps.equip_capacity[ri.kind]);
      if (ri.family == RowFamily::Storage) row.emplace_back(ef.y_col[ri.node * F + ri.kind], -inst.caps.storage_capacity[ri.kind]);
      for (const auto& [c, v] : rows[r]) row.emplace_back(off + c, v);
      lp.add_row(shape->lp.row_sense[r], row_rhs(inst, *shape, r, s, existing), row,
                 "s=" + inst.sets.scenarios[s] + "|" + shape->lp.row_names[r]);
    }
  }
  ef.shape = std::move(shape);
  return ef;
}

}  // namespace wsn
