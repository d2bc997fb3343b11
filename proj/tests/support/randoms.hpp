#pragma once

// Random problem pieces shared by the unit tests and the acceptance run.

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wsn/lp.hpp"
#include "wsn/model.hpp"

namespace randoms {

inline wsn::lp::LinearProgram random_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> ub(1.0, 8.0);
  std::uniform_int_distribution<int> sense(0, 5);
  wsn::lp::LinearProgram lp;
  lp.sense = rng() % 4 == 0 ? wsn::lp::Sense::Maximize : wsn::lp::Sense::Minimize;
  for (int j = 0; j < n; ++j) {
    const double lo = rng() % 5 == 0 ? -ub(rng) : 0.0;
    lp.add_column(coef(rng), lo, ub(rng));
  }
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) {
      const double v = std::round(coef(rng) * 4) / 4;
      if (rng() % 5 != 0 && v != 0.0) row.emplace_back(j, v);
    }
    if (row.empty()) row.emplace_back(static_cast<int>(rng() % n), 1.0);
    const int sv = sense(rng);
    using wsn::lp::RowSense;
    const RowSense rs = sv < 3 ? RowSense::LessEqual : (sv < 5 ? RowSense::GreaterEqual : RowSense::Equal);
    lp.add_row(rs, coef(rng) * 2, row);
  }
  return lp;
}

inline std::map<std::string, double> tagged(const wsn::lp::LpSolution& sol, const std::vector<std::string>& tags) {
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < tags.size(); ++r) out[tags[r]] = sol.duals[r];
  return out;
}

inline wsn::InvestmentPlan random_plan(const wsn::Instance& inst, std::mt19937_64& rng) {
  wsn::InvestmentPlan plan = wsn::InvestmentPlan::zero(inst);
  double left = inst.costs.budget;
  const int E = inst.E(), F = inst.F();
  for (int tries = 0; tries < 20; ++tries) {
    const bool equip = rng() % 3 != 0;
    if (equip) {
      const std::size_t k = rng() % plan.new_equipment.size();
      const double c = inst.costs.equipment_cost[k % E];
      if (c <= left) {
        ++plan.new_equipment[k];
        left -= c;
      }
    } else {
      const std::size_t k = rng() % plan.new_storage.size();
      const double c = inst.costs.storage_cost[k % F];
      if (c <= left) {
        ++plan.new_storage[k];
        left -= c;
      }
    }
  }
  return plan;
}

}  // namespace randoms
