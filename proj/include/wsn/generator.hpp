#pragma once

// Seeded random instances. Rates follow the truck/rail/barge structure of the
// bundled data; sizes, distances, capacities and demand are synthetic.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "wsn/model.hpp"

namespace wsn {

struct GeneratorOptions {
  int ports = 3;
  int counties = 4;
  int commodities = 2;
  int periods = 2;
  int scenarios = 2;
  int equipment_kinds = 2;
  int storage_kinds = 1;
  double budget = -1.0;  // negative: a few units of the dearest equipment
  std::uint64_t seed = 1;
};

namespace detail {

// Splits n items into two non-empty, possibly overlapping, membership lists.
inline void split_roles(std::mt19937_64& rng, int n, std::vector<int>& first, std::vector<int>& second) {
  std::uniform_int_distribution<int> role(0, 5);
  for (int k = 0; k < n; ++k) {
    const int r = role(rng);
    if (r <= 2 || r == 5) first.push_back(k);
    if (r >= 3) second.push_back(k);
  }
  if (first.empty()) first.push_back(0);
  if (second.empty() || (second.size() == 1 && first.size() == 1 && second[0] == first[0])) {
    const int other = n > 1 ? (first[0] + 1) % n : 0;
    if (std::find(second.begin(), second.end(), other) == second.end()) second.push_back(other);
  }
  std::sort(second.begin(), second.end());
}

}  // namespace detail

inline Instance generate_instance(const GeneratorOptions& o) {
  if (o.ports < 1) throw InstanceError("generator: ports must be >= 1");
  if (o.counties < 2 || o.commodities < 1 || o.periods < 1 || o.scenarios < 1 || o.equipment_kinds < 1 ||
      o.storage_kinds < 1) {
    throw InstanceError("generator: sizes must be positive (at least 2 counties)");
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance inst;
  auto& S = inst.sets;
  for (int i = 0; i < o.ports; ++i) S.ports.push_back("port" + std::to_string(i + 1));
  for (int j = 0; j < o.counties; ++j) S.counties.push_back("county" + std::to_string(j + 1));
  for (int c = 0; c < o.commodities; ++c) S.commodities.push_back("com" + std::to_string(c + 1));
  for (int e = 0; e < o.equipment_kinds; ++e) S.equipment_kinds.push_back("equip" + std::to_string(e + 1));
  for (int f = 0; f < o.storage_kinds; ++f) S.storage_kinds.push_back("store" + std::to_string(f + 1));
  for (int s = 0; s < o.scenarios; ++s) S.scenarios.push_back("s" + std::to_string(s + 1));
  S.periods = o.periods;
  detail::split_roles(rng, o.ports, S.origin_ports, S.destination_ports);
  detail::split_roles(rng, o.counties, S.origin_counties, S.destination_counties);
  if (o.ports == 1) {
    S.origin_ports = {0};
    S.destination_ports = {0};
  }

  const int I = o.ports, J = o.counties, C = o.commodities, E = o.equipment_kinds, F = o.storage_kinds, P = o.periods;
  auto& K = inst.costs;
  auto& A = inst.caps;
  K.truck_rate = {0.0, 0.185};
  K.rail_rate = {22.65, 0.033};
  K.barge_rate = {0.0, 0.0089};
  for (int e = 0; e < E; ++e) K.equipment_cost.push_back(std::round(5000.0 + 45000.0 * u(rng)));
  for (int f = 0; f < F; ++f) K.storage_cost.push_back(std::round(20000.0 + 80000.0 * u(rng)));
  for (int c = 0; c < C; ++c) K.holding_cost.push_back(std::round(100.0 * (0.2 + 2.0 * u(rng))) / 100.0);

  A.equip_compat.assign(static_cast<std::size_t>(E) * C, 0);
  A.processing_norm.assign(static_cast<std::size_t>(E) * C, 0.0);
  for (int c = 0; c < C; ++c) {
    bool any = false;
    for (int e = 0; e < E; ++e) {
      if (u(rng) < 0.6) {
        A.equip_compat[e * C + c] = 1;
        any = true;
      }
    }
    if (!any) A.equip_compat[(c % E) * C + c] = 1;
    for (int e = 0; e < E; ++e) {
      if (A.equip_compat[e * C + c]) A.processing_norm[e * C + c] = u(rng) < 0.5 ? 1.0 : std::round(100.0 * (0.5 + u(rng))) / 100.0;
    }
  }
  A.storage_compat.assign(static_cast<std::size_t>(F) * C, 0);
  A.storage_norm.assign(static_cast<std::size_t>(F) * C, 0.0);
  for (int c = 0; c < C; ++c) {
    for (int f = 0; f < F; ++f) {
      if (u(rng) < 0.7 || f == c % F) {
        A.storage_compat[f * C + c] = 1;
        A.storage_norm[f * C + c] = 1.0;
      }
    }
  }
  A.port_rail.resize(I);
  for (auto& r : A.port_rail) r = u(rng) < 0.5;
  A.county_rail.resize(J);
  for (auto& r : A.county_rail) r = u(rng) < 0.5;
  A.storage_ratio.assign(static_cast<std::size_t>(F) * E, 0.0);

  // Demand scale drives capacities so that ports bind.
  const double mean_tons = 400.0;
  for (int e = 0; e < E; ++e) A.equip_capacity.push_back(std::round(mean_tons * (1.0 + 3.0 * u(rng))));
  for (int f = 0; f < F; ++f) A.storage_capacity.push_back(std::round(mean_tons * (0.5 + u(rng))));
  A.existing_equipment_tons.assign(static_cast<std::size_t>(I) * E, 0.0);
  A.existing_storage_tons.assign(static_cast<std::size_t>(I) * F, 0.0);
  for (auto& v : A.existing_equipment_tons) v = u(rng) < 0.5 ? std::round(mean_tons * u(rng)) : 0.0;
  for (auto& v : A.existing_storage_tons) v = u(rng) < 0.3 ? std::round(mean_tons * u(rng)) : 0.0;

  // Ports sit near the river, counties spread out; distances are synthetic.
  // Each county clusters around a home port.
  std::vector<double> port_mile(I), county_x(J), county_y(J);
  std::vector<int> home(J);
  for (int i = 0; i < I; ++i) port_mile[i] = 40.0 + 400.0 * u(rng);
  for (int j = 0; j < J; ++j) {
    home[j] = static_cast<int>(u(rng) * I) % I;
    county_x[j] = port_mile[home[j]] + 60.0 * (u(rng) - 0.5);
    county_y[j] = 10.0 + 40.0 * u(rng);
  }
  auto round1 = [](double v) { return std::round(v * 10.0) / 10.0; };
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < I; ++i) {
      const double miles = round1(std::hypot(county_x[j] - port_mile[i], county_y[j]));
      if (i == home[j] || u(rng) < 0.5) K.county_port.push_back({j, i, Mode::Truck, miles, K.truck_rate.cost(miles)});
      if (A.county_rail[j] && A.port_rail[i] && u(rng) < 0.6) {
        K.county_port.push_back({j, i, Mode::Rail, miles, K.rail_rate.cost(miles)});
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int k = i + 1; k < I; ++k) {
      const double miles = std::max(5.0, round1(std::abs(port_mile[i] - port_mile[k])));
      K.port_port.push_back({i, k, Mode::Barge, miles, K.barge_rate.cost(miles)});
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int m = j + 1; m < J; ++m) {
      const double miles = round1(std::hypot(county_x[j] - county_x[m], county_y[j] - county_y[m]) + 20.0);
      if (u(rng) < 0.6) K.county_county.push_back({j, m, Mode::Truck, miles, K.truck_rate.cost(miles)});
      if (A.county_rail[j] && A.county_rail[m] && u(rng) < 0.5) {
        K.county_county.push_back({j, m, Mode::Rail, miles, K.rail_rate.cost(miles)});
      }
    }
  }
  K.shortage_penalty = std::max(100.0, std::ceil(default_shortage_penalty(K.county_county, K.county_port)));
  K.budget = o.budget >= 0.0 ? o.budget
                             : std::round(3.0 * *std::max_element(K.equipment_cost.begin(), K.equipment_cost.end()));

  // Scenarios: a base demand pattern scaled per scenario.
  std::vector<double> raw(o.scenarios);
  for (auto& w : raw) w = 0.5 + u(rng);
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  std::vector<double> base_sup(static_cast<std::size_t>(J) * C * P, 0.0), base_dem(base_sup.size(), 0.0);
  for (int j : S.origin_counties)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= P; ++p) base_sup[inst.cp_index(j, c, p)] = std::round(mean_tons * (0.5 + 1.5 * u(rng)));
  for (int j : S.destination_counties)
    for (int c = 0; c < C; ++c)
      for (int p = 1; p <= P; ++p) base_dem[inst.cp_index(j, c, p)] = std::round(mean_tons * (0.2 + u(rng)));
  double assigned = 0.0;
  for (int s = 0; s < o.scenarios; ++s) {
    ScenarioData sc;
    if (s + 1 < o.scenarios) {
      sc.probability = std::round(raw[s] / total * 1000.0) / 1000.0;
      assigned += sc.probability;
    } else {
      sc.probability = std::round((1.0 - assigned) * 1000.0) / 1000.0;
    }
    const double scale = 0.6 + 0.8 * u(rng);
    sc.supply = base_sup;
    sc.demand = base_dem;
    for (auto& v : sc.demand) v = std::round(v * scale * (0.8 + 0.4 * u(rng)));
    inst.scenarios.push_back(std::move(sc));
  }
  return inst;
}

}  // namespace wsn
