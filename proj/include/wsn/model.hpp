#pragma once

// Domain types for the inland-port investment problem: index sets, cost and
// capacity parameters, demand scenarios, and first-stage investment plans.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Truck, Rail, Barge };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Truck: return "truck";
    case Mode::Rail: return "rail";
    case Mode::Barge: return "barge";
  }
  return "?";
}

/// Node ids are unique across counties and ports (N = J ∪ I, J ∩ I = ∅).
/// Membership lists hold indices into `ports` / `counties`.
struct IndexSets {
  std::vector<std::string> ports;
  std::vector<std::string> counties;
  std::vector<int> origin_ports;
  std::vector<int> destination_ports;
  std::vector<int> origin_counties;
  std::vector<int> destination_counties;
  std::vector<std::string> commodities;
  std::vector<std::string> equipment_kinds;
  std::vector<std::string> storage_kinds;
  int periods = 1;  // periods are 1..periods
  std::vector<std::string> scenarios;

  int num_ports() const { return static_cast<int>(ports.size()); }
  int num_counties() const { return static_cast<int>(counties.size()); }
  int num_commodities() const { return static_cast<int>(commodities.size()); }
  int num_equipment() const { return static_cast<int>(equipment_kinds.size()); }
  int num_storage() const { return static_cast<int>(storage_kinds.size()); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }

  bool operator==(const IndexSets&) const = default;
};

/// Per-ton cost of one undirected link. County-port links serve both the
/// inbound (county -> origin port) and outbound (destination port -> county)
/// legs; county-county links serve either direction; port-port links are barge.
struct Link {
  int a = 0;
  int b = 0;
  Mode mode = Mode::Truck;
  double miles = 0.0;
  double cost_per_ton = 0.0;

  bool operator==(const Link&) const = default;
};

/// Table-style rate: cost per ton = fixed_per_ton + per_ton_mile * miles.
struct RateSchedule {
  double fixed_per_ton = 0.0;
  double per_ton_mile = 0.0;

  double cost(double miles) const { return fixed_per_ton + per_ton_mile * miles; }
  bool operator==(const RateSchedule&) const = default;
};

struct CostParameters {
  std::vector<double> equipment_cost;  // kappa_e
  std::vector<double> storage_cost;    // iota_f
  std::vector<Link> county_port;       // alpha^t_ij, alpha^r_ij
  std::vector<Link> port_port;         // a_ik
  std::vector<Link> county_county;     // l^t_jm, l^r_jm
  std::vector<double> holding_cost;    // h_c
  double shortage_penalty = 0.0;       // mu
  double budget = 0.0;                 // b
  RateSchedule truck_rate;
  RateSchedule rail_rate;
  RateSchedule barge_rate;

  bool operator==(const CostParameters&) const = default;
};

/// Existing processing capacity published per port for a set of equipment
/// kinds that share it; the tonnage is split evenly across members.
struct HandlingGroup {
  std::string id;
  std::vector<int> members;        // equipment kind indices
  std::vector<double> port_tons;   // per port

  bool operator==(const HandlingGroup&) const = default;
};

/// Matrices are row-major: equip_* are [e * C + c], storage_* are [f * C + c],
/// per-port tables are [i * E + e] / [i * F + f], storage_ratio is [f * E + e].
struct CapacityParameters {
  std::vector<char> equip_compat;      // beta_ec
  std::vector<double> processing_norm; // Lambda_ec
  std::vector<char> storage_compat;    // Gamma_fc
  std::vector<double> storage_norm;    // zeta_fc
  std::vector<char> port_rail;         // delta_i
  std::vector<char> county_rail;       // gamma_j
  std::vector<double> storage_ratio;   // B_fe
  std::vector<double> equip_capacity;  // m_e, tons per period per unit
  std::vector<double> storage_capacity;// l_f, tons per unit
  std::vector<double> existing_equipment_tons;  // direct part of m_e * n_ie
  std::vector<double> existing_storage_tons;    // l_f * k_if
  std::vector<HandlingGroup> handling_groups;

  bool operator==(const CapacityParameters&) const = default;
};

/// supply/demand are dense [j * C * P + c * P + (p - 1)] over all counties;
/// entries outside J' (supply) and J'' (demand) are zero.
struct ScenarioData {
  double probability = 0.0;
  std::vector<double> supply;
  std::vector<double> demand;

  bool operator==(const ScenarioData&) const = default;
};

struct Instance {
  IndexSets sets;
  CostParameters costs;
  CapacityParameters caps;
  std::vector<ScenarioData> scenarios;
  // Optional master constraint k_if + Y_if >= B_fe (n_ie + Z_ie).
  bool enforce_storage_ratio = false;

  int P() const { return sets.periods; }
  int C() const { return sets.num_commodities(); }
  int E() const { return sets.num_equipment(); }
  int F() const { return sets.num_storage(); }

  std::size_t cp_index(int county, int c, int p) const {
    return (static_cast<std::size_t>(county) * C() + c) * P() + (p - 1);
  }
  double supply(int s, int county, int c, int p) const {
    return scenarios[s].supply[cp_index(county, c, p)];
  }
  double demand(int s, int county, int c, int p) const {
    return scenarios[s].demand[cp_index(county, c, p)];
  }
  bool equip_ok(int e, int c) const { return caps.equip_compat[e * C() + c] != 0; }
  bool storage_ok(int f, int c) const { return caps.storage_compat[f * C() + c] != 0; }
  double lambda(int e, int c) const { return caps.processing_norm[e * C() + c]; }
  double zeta(int f, int c) const { return caps.storage_norm[f * C() + c]; }

  /// m_e * n_ie: direct tonnage plus this kind's share of every handling group.
  double existing_equipment_capacity(int port, int e) const {
    double tons = caps.existing_equipment_tons[port * E() + e];
    for (const auto& g : caps.handling_groups) {
      if (std::find(g.members.begin(), g.members.end(), e) != g.members.end()) {
        tons += g.port_tons[port] / static_cast<double>(g.members.size());
      }
    }
    return tons;
  }
  double existing_storage_capacity(int port, int f) const {
    return caps.existing_storage_tons[port * F() + f];
  }
  /// n_ie in units of m_e; fractional when published capacity is not a multiple.
  double existing_equipment_units(int port, int e) const {
    return existing_equipment_capacity(port, e) / caps.equip_capacity[e];
  }
  double existing_storage_units(int port, int f) const {
    return existing_storage_capacity(port, f) / caps.storage_capacity[f];
  }

  bool operator==(const Instance&) const = default;
};

enum class FlowKind { Xt, Xr, U, W, V, Rt, Rr, Ot, Or, Q };

inline const char* flow_kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::Xt: return "Xt";
    case FlowKind::Xr: return "Xr";
    case FlowKind::U: return "U";
    case FlowKind::W: return "W";
    case FlowKind::V: return "V";
    case FlowKind::Rt: return "Rt";
    case FlowKind::Rr: return "Rr";
    case FlowKind::Ot: return "Ot";
    case FlowKind::Or: return "Or";
    case FlowKind::Q: return "Q";
  }
  return "?";
}

/// One second-stage variable. `from`/`to` index counties or ports by kind:
/// X county->port, W port->port, R port->county, O county->county, U/V/Q the
/// node itself in both. `kind_index` is the equipment (X, W, R) or storage
/// (U, V) kind, -1 otherwise. `miles` is zero for inventory and shortage.
struct FlowRecord {
  FlowKind kind = FlowKind::Q;
  int from = 0;
  int to = 0;
  int commodity = 0;
  int period = 1;
  int kind_index = -1;
  double miles = 0.0;
  double tons = 0.0;
};

struct RecourseSolution {
  int scenario = 0;
  double objective = 0.0;
  std::vector<FlowRecord> flows;  // every variable of the subproblem, in column order
};

struct InvestmentPlan {
  std::vector<long> new_equipment;  // Z_ie, [i * E + e]
  std::vector<long> new_storage;    // Y_if, [i * F + f]

  static InvestmentPlan zero(const Instance& inst) {
    InvestmentPlan plan;
    plan.new_equipment.assign(static_cast<std::size_t>(inst.sets.num_ports()) * inst.E(), 0);
    plan.new_storage.assign(static_cast<std::size_t>(inst.sets.num_ports()) * inst.F(), 0);
    return plan;
  }

  InvestmentPlan operator+(const InvestmentPlan& o) const {
    InvestmentPlan r = *this;
    for (std::size_t k = 0; k < r.new_equipment.size(); ++k) r.new_equipment[k] += o.new_equipment.at(k);
    for (std::size_t k = 0; k < r.new_storage.size(); ++k) r.new_storage[k] += o.new_storage.at(k);
    return r;
  }

  bool operator==(const InvestmentPlan&) const = default;
};

/// Fractional first-stage point (core points, LP relaxations).
struct FractionalPlan {
  std::vector<double> new_equipment;
  std::vector<double> new_storage;

  static FractionalPlan from(const InvestmentPlan& p) {
    return {std::vector<double>(p.new_equipment.begin(), p.new_equipment.end()),
            std::vector<double>(p.new_storage.begin(), p.new_storage.end())};
  }
  static FractionalPlan zero(const Instance& inst) { return from(InvestmentPlan::zero(inst)); }

  bool operator==(const FractionalPlan&) const = default;
};

inline double investment_cost(const InvestmentPlan& plan, const CostParameters& costs) {
  const std::size_t E = costs.equipment_cost.size();
  const std::size_t F = costs.storage_cost.size();
  if (E == 0 || F == 0 || plan.new_equipment.size() % E != 0 || plan.new_storage.size() % F != 0 ||
      plan.new_equipment.size() / E != plan.new_storage.size() / F) {
    throw InstanceError("investment plan does not match the equipment/storage kinds");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < plan.new_equipment.size(); ++k) {
    if (plan.new_equipment[k] != 0) total += costs.equipment_cost[k % E] * static_cast<double>(plan.new_equipment[k]);
  }
  for (std::size_t k = 0; k < plan.new_storage.size(); ++k) {
    if (plan.new_storage[k] != 0) total += costs.storage_cost[k % F] * static_cast<double>(plan.new_storage[k]);
  }
  return total;
}

inline double investment_cost(const InvestmentPlan& plan, const Instance& inst) {
  return investment_cost(plan, inst.costs);
}

/// Rail needs rail access at both endpoints; truck and barge links always exist.
inline bool allowed_rail_arc(bool from_rail, bool to_rail) { return from_rail && to_rail; }

inline bool allowed_arc(Mode mode, bool from_rail, bool to_rail) {
  return mode != Mode::Rail || allowed_rail_arc(from_rail, to_rail);
}

inline bool allowed_county_port_arc(const Instance& inst, const Link& l) {
  return allowed_arc(l.mode, inst.caps.county_rail.at(l.a) != 0, inst.caps.port_rail.at(l.b) != 0);
}
inline bool allowed_county_county_arc(const Instance& inst, const Link& l) {
  return allowed_arc(l.mode, inst.caps.county_rail.at(l.a) != 0, inst.caps.county_rail.at(l.b) != 0);
}

/// Default shortage penalty: ten times the costliest county-to-county rate.
inline double default_shortage_penalty(const std::vector<Link>& county_county,
                                       const std::vector<Link>& county_port) {
  double worst = 0.0;
  for (const auto& l : county_county) worst = std::max(worst, l.cost_per_ton);
  if (worst == 0.0) {
    for (const auto& l : county_port) worst = std::max(worst, 2.0 * l.cost_per_ton);
  }
  return worst > 0.0 ? 10.0 * worst : 1.0;
}

struct Violation {
  std::string field;
  std::string index;
  std::string rule;

  std::string to_string() const { return field + "[" + index + "]: " + rule; }
};

namespace detail {

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

inline bool is_integral(double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

}  // namespace detail

/// Checks every invariant of the instance. Returns violations instead of throwing.
inline std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::string index, std::string rule) {
    out.push_back({std::move(field), std::move(index), std::move(rule)});
  };
  const auto& S = inst.sets;
  const int I = S.num_ports(), J = S.num_counties(), C = S.num_commodities();
  const int E = S.num_equipment(), F = S.num_storage(), P = S.periods;

  auto nonempty = [&](const char* name, std::size_t n) {
    if (n == 0) add(name, "", "must be non-empty");
  };
  nonempty("ports", S.ports.size());
  nonempty("counties", S.counties.size());
  nonempty("origin_ports", S.origin_ports.size());
  nonempty("destination_ports", S.destination_ports.size());
  nonempty("origin_counties", S.origin_counties.size());
  nonempty("destination_counties", S.destination_counties.size());
  nonempty("commodities", S.commodities.size());
  nonempty("equipment_kinds", S.equipment_kinds.size());
  nonempty("storage_kinds", S.storage_kinds.size());
  nonempty("scenarios", S.scenarios.size());
  if (P < 1) add("periods", "", "must be at least 1");

  {
    std::vector<std::string> ids = S.ports;
    ids.insert(ids.end(), S.counties.begin(), S.counties.end());
    std::sort(ids.begin(), ids.end());
    for (std::size_t k = 1; k < ids.size(); ++k) {
      if (ids[k] == ids[k - 1]) add("nodes", ids[k], "node id declared more than once (counties and ports are disjoint)");
    }
  }
  auto check_members = [&](const char* name, const std::vector<int>& v, int n) {
    for (int x : v) {
      if (x < 0 || x >= n) add(name, std::to_string(x), "index outside declared nodes");
    }
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) add(name, "", "duplicate member");
  };
  check_members("origin_ports", S.origin_ports, I);
  check_members("destination_ports", S.destination_ports, I);
  check_members("origin_counties", S.origin_counties, J);
  check_members("destination_counties", S.destination_counties, J);
  if (!out.empty()) return out;  // indices below assume well-formed sets

  const auto& K = inst.costs;
  const auto& A = inst.caps;
  auto sized = [&](const char* name, std::size_t got, std::size_t want) {
    if (got != want) {
      add(name, "", "has " + std::to_string(got) + " entries, expected " + std::to_string(want));
      return false;
    }
    return true;
  };
  bool ok = true;
  ok &= sized("equipment_cost", K.equipment_cost.size(), E);
  ok &= sized("storage_cost", K.storage_cost.size(), F);
  ok &= sized("holding_cost", K.holding_cost.size(), C);
  ok &= sized("equip_compat", A.equip_compat.size(), static_cast<std::size_t>(E) * C);
  ok &= sized("processing_norm", A.processing_norm.size(), static_cast<std::size_t>(E) * C);
  ok &= sized("storage_compat", A.storage_compat.size(), static_cast<std::size_t>(F) * C);
  ok &= sized("storage_norm", A.storage_norm.size(), static_cast<std::size_t>(F) * C);
  ok &= sized("port_rail", A.port_rail.size(), I);
  ok &= sized("county_rail", A.county_rail.size(), J);
  ok &= sized("storage_ratio", A.storage_ratio.size(), static_cast<std::size_t>(F) * E);
  ok &= sized("equip_capacity", A.equip_capacity.size(), E);
  ok &= sized("storage_capacity", A.storage_capacity.size(), F);
  ok &= sized("existing_equipment_tons", A.existing_equipment_tons.size(), static_cast<std::size_t>(I) * E);
  ok &= sized("existing_storage_tons", A.existing_storage_tons.size(), static_cast<std::size_t>(I) * F);
  ok &= sized("scenario_data", inst.scenarios.size(), S.scenarios.size());
  for (const auto& g : A.handling_groups) {
    ok &= sized(("handling_group " + g.id).c_str(), g.port_tons.size(), I);
    for (int m : g.members) {
      if (m < 0 || m >= E) {
        add("handling_group", g.id, "member outside declared equipment kinds");
        ok = false;
      }
    }
    if (g.members.empty()) {
      add("handling_group", g.id, "has no members");
      ok = false;
    }
  }
  const std::size_t cp = static_cast<std::size_t>(J) * C * P;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    ok &= sized(("supply of scenario " + std::to_string(s)).c_str(), inst.scenarios[s].supply.size(), cp);
    ok &= sized(("demand of scenario " + std::to_string(s)).c_str(), inst.scenarios[s].demand.size(), cp);
  }
  if (!ok) return out;

  auto nonneg = [&](const char* name, const std::vector<double>& v, auto index_name) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!(v[k] >= 0.0) || !std::isfinite(v[k])) add(name, index_name(k), "must be finite and >= 0");
    }
  };
  auto by = [](const std::vector<std::string>& ids) {
    return [&ids](std::size_t k) { return ids[k]; };
  };
  nonneg("equipment_cost", K.equipment_cost, by(S.equipment_kinds));
  nonneg("storage_cost", K.storage_cost, by(S.storage_kinds));
  nonneg("holding_cost", K.holding_cost, by(S.commodities));
  for (int e = 0; e < E; ++e) {
    if (!(K.equipment_cost[e] > 0.0)) add("equipment_cost", S.equipment_kinds[e], "must be > 0");
    if (!(A.equip_capacity[e] > 0.0)) add("equip_capacity", S.equipment_kinds[e], "must be > 0");
  }
  for (int f = 0; f < F; ++f) {
    if (!(K.storage_cost[f] > 0.0)) add("storage_cost", S.storage_kinds[f], "must be > 0");
    if (!(A.storage_capacity[f] > 0.0)) add("storage_capacity", S.storage_kinds[f], "must be > 0");
  }
  if (!(K.budget >= 0.0) || !std::isfinite(K.budget)) add("budget", "", "must be finite and >= 0");

  for (int e = 0; e < E; ++e) {
    for (int c = 0; c < C; ++c) {
      const double norm = A.processing_norm[e * C + c];
      const bool compat = A.equip_compat[e * C + c] != 0;
      if (compat != (norm > 0.0)) {
        add("processing_norm", S.equipment_kinds[e] + "," + S.commodities[c], "must be > 0 exactly when equipment is compatible");
      }
    }
  }
  for (int f = 0; f < F; ++f) {
    for (int c = 0; c < C; ++c) {
      const double norm = A.storage_norm[f * C + c];
      const bool compat = A.storage_compat[f * C + c] != 0;
      if (compat != (norm > 0.0)) {
        add("storage_norm", S.storage_kinds[f] + "," + S.commodities[c], "must be > 0 exactly when storage is compatible");
      }
    }
  }
  for (std::size_t k = 0; k < A.storage_ratio.size(); ++k) {
    if (!(A.storage_ratio[k] >= 0.0)) add("storage_ratio", std::to_string(k), "must be >= 0");
  }
  auto port_kind = [&](const std::vector<std::string>& kinds) {
    return [&, n = kinds.size()](std::size_t k) { return S.ports[k / n] + "," + kinds[k % n]; };
  };
  nonneg("existing_equipment_tons", A.existing_equipment_tons, port_kind(S.equipment_kinds));
  nonneg("existing_storage_tons", A.existing_storage_tons, port_kind(S.storage_kinds));
  for (const auto& g : A.handling_groups) nonneg(("handling_group " + g.id).c_str(), g.port_tons, by(S.ports));

  // Links.
  double worst_landside = 0.0;
  auto check_link = [&](const char* fam, const Link& l, int na, int nb, const std::vector<std::string>& ida,
                        const std::vector<std::string>& idb) {
    if (l.a < 0 || l.a >= na || l.b < 0 || l.b >= nb) {
      add(fam, std::to_string(l.a) + "," + std::to_string(l.b), "link endpoint is not a declared node");
      return false;
    }
    const std::string name = ida[l.a] + "-" + idb[l.b] + "/" + mode_name(l.mode);
    if (!(l.cost_per_ton >= 0.0) || !std::isfinite(l.cost_per_ton)) add(fam, name, "cost must be finite and >= 0");
    if (!(l.miles >= 0.0)) add(fam, name, "distance must be >= 0");
    return true;
  };
  for (const auto& l : K.county_port) {
    if (!check_link("county_port", l, J, I, S.counties, S.ports)) continue;
    if (l.mode == Mode::Barge) add("county_port", S.counties[l.a] + "-" + S.ports[l.b], "barge mode is only valid between ports");
    if (!allowed_county_port_arc(inst, l)) add("county_port", S.counties[l.a] + "-" + S.ports[l.b], "rail link needs rail access at both endpoints");
    worst_landside = std::max(worst_landside, l.cost_per_ton);
  }
  for (const auto& l : K.county_county) {
    if (!check_link("county_county", l, J, J, S.counties, S.counties)) continue;
    if (l.mode == Mode::Barge) add("county_county", S.counties[l.a] + "-" + S.counties[l.b], "barge mode is only valid between ports");
    if (!allowed_county_county_arc(inst, l)) add("county_county", S.counties[l.a] + "-" + S.counties[l.b], "rail link needs rail access at both endpoints");
    worst_landside = std::max(worst_landside, l.cost_per_ton);
  }
  std::vector<char> barge(static_cast<std::size_t>(I) * I, 0);
  for (const auto& l : K.port_port) {
    if (!check_link("port_port", l, I, I, S.ports, S.ports)) continue;
    if (l.mode != Mode::Barge) add("port_port", S.ports[l.a] + "-" + S.ports[l.b], "port-to-port links must be barge");
    barge[l.a * I + l.b] = barge[l.b * I + l.a] = 1;
  }
  for (int i : S.origin_ports) {
    for (int k : S.destination_ports) {
      if (i != k && !barge[i * I + k]) add("port_port", S.ports[i] + "-" + S.ports[k], "missing barge distance between origin and destination port");
    }
  }
  if (!(K.shortage_penalty > worst_landside)) {
    add("shortage_penalty", "", "must exceed every landside per-ton cost (" + detail::fmt_num(worst_landside) + ")");
  }

  // Scenarios.
  double total = 0.0;
  for (int s = 0; s < static_cast<int>(inst.scenarios.size()); ++s) {
    const auto& sc = inst.scenarios[s];
    const double w = sc.probability;
    if (!(w >= 0.0 && w <= 1.0)) add("probability", S.scenarios[s], "must lie in [0,1]");
    total += w;
    std::vector<char> is_origin(J, 0), is_dest(J, 0);
    for (int j : S.origin_counties) is_origin[j] = 1;
    for (int j : S.destination_counties) is_dest[j] = 1;
    for (int j = 0; j < J; ++j) {
      for (int c = 0; c < C; ++c) {
        for (int p = 1; p <= P; ++p) {
          const std::size_t k = inst.cp_index(j, c, p);
          const std::string idx = S.scenarios[s] + "," + S.counties[j] + "," + S.commodities[c] + "," + std::to_string(p);
          if (!(sc.supply[k] >= 0.0) || !std::isfinite(sc.supply[k])) add("supply", idx, "must be finite and >= 0");
          if (!(sc.demand[k] >= 0.0) || !std::isfinite(sc.demand[k])) add("demand", idx, "must be finite and >= 0");
          if (sc.supply[k] > 0.0 && !is_origin[j]) add("supply", idx, "supply at a county that is not an origin");
          if (sc.demand[k] > 0.0 && !is_dest[j]) add("demand", idx, "demand at a county that is not a destination");
        }
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    add("probability", "", "scenario probabilities sum " + detail::fmt_num(total) + " ≠ 1");
  }
  return out;
}

/// Throws InstanceError listing every violation.
inline void require_valid(const Instance& inst) {
  const auto violations = validate_instance(inst);
  if (violations.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : violations) msg += "\n  " + v.to_string();
  throw InstanceError(msg);
}

inline int find_id(const std::vector<std::string>& ids, const std::string& id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

}  // namespace wsn
