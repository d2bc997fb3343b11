#pragma once

// Seeded instance families shared by the unit tests and the acceptance run.

#include <algorithm>
#include <vector>

#include "wsn/generator.hpp"

namespace suites {

// |I| <= 4, |J| <= 6, |C| <= 2, |P| <= 3, |S| <= 3.
inline wsn::GeneratorOptions small_options(int k) {
  wsn::GeneratorOptions g;
  g.seed = 1000 + static_cast<std::uint64_t>(k);
  g.ports = 2 + k % 3;
  g.counties = 3 + (k / 3) % 4;
  g.commodities = 1 + k % 2;
  g.periods = 1 + (k / 2) % 3;
  g.scenarios = 1 + (k / 5) % 3;
  g.equipment_kinds = 1 + (k / 7) % 2;
  g.storage_kinds = 1;
  return g;
}

inline wsn::Instance small(int k) { return wsn::generate_instance(small_options(k)); }

inline wsn::GeneratorOptions medium_options(int k) {
  wsn::GeneratorOptions g;
  g.seed = 5000 + static_cast<std::uint64_t>(k);
  g.ports = 5 + k % 2;
  g.counties = 8 + k % 3;
  g.commodities = 2;
  g.periods = 2 + k % 2;
  g.scenarios = 3 + k % 2;
  g.equipment_kinds = 2;
  g.storage_kinds = 2;
  return g;
}

inline wsn::Instance medium(int k) {
  auto inst = wsn::generate_instance(medium_options(k));
  // Heavier flows and a wider budget so that port capacity binds.
  for (auto& sc : inst.scenarios) {
    for (auto& v : sc.supply) v *= 3.0;
    for (auto& v : sc.demand) v *= 3.0;
  }
  double top = 0.0;
  for (double c : inst.costs.equipment_cost) top = std::max(top, c);
  inst.costs.budget = 8.0 * top;
  return inst;
}

}  // namespace suites
