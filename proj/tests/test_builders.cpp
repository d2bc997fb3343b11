#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support/dual_residuals.hpp"
#include "support/lp_checks.hpp"
#include "support/randoms.hpp"
#include "support/tiny.hpp"
#include "support/vertex_oracle.hpp"
#include "wsn/builders.hpp"
#include "wsn/generator.hpp"

using namespace wsn;
using randoms::random_plan;
using randoms::tagged;

namespace {

double recourse_value(const Instance& inst, const SubproblemShape& sh, int s, const InvestmentPlan& plan) {
  const auto sol = lp::solve_lp(build_subproblem(inst, sh, s, capacity_rhs(inst, plan)));
  EXPECT_EQ(sol.status, lp::LpStatus::Optimal);
  return sol.objective;
}

Instance small_random(std::uint64_t seed) {
  GeneratorOptions g;
  g.seed = seed;
  g.ports = 2 + static_cast<int>(seed % 3);
  g.counties = 3 + static_cast<int>(seed % 4);
  g.commodities = 1 + static_cast<int>(seed % 2);
  g.periods = 1 + static_cast<int>(seed % 3);
  g.scenarios = 1 + static_cast<int>(seed % 3);
  return generate_instance(g);
}

}  // namespace

TEST(Builders, GeneratedInstancesValidate) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto v = validate_instance(small_random(seed));
    EXPECT_TRUE(v.empty()) << "seed " << seed << ": " << (v.empty() ? "" : v.front().to_string());
  }
}

TEST(Builders, MasterColumnCounts) {
  GeneratorOptions g;
  g.ports = 2;
  g.equipment_kinds = 2;
  g.storage_kinds = 1;
  g.scenarios = 2;
  const auto inst = generate_instance(g);
  const auto m = build_master(inst);
  EXPECT_EQ(m.z_col.size(), 4u);
  EXPECT_EQ(m.y_col.size(), 2u);
  EXPECT_EQ(m.theta_col.size(), 2u);
  EXPECT_EQ(m.mip.integer_cols.size(), 6u);
  EXPECT_EQ(m.mip.lp.row_names[m.budget_row], "eq2/budget");
  for (int j : m.theta_col) EXPECT_EQ(m.mip.lp.lower[j], 0.0);
}

TEST(Builders, ZeroBudgetFixesFirstStage) {
  auto inst = tiny::path_instance();
  inst.costs.budget = 0.0;
  const auto m = build_master(inst);
  for (int j : m.mip.integer_cols) EXPECT_EQ(m.mip.lp.upper[j], 0.0);
  const auto sol = milp::solve_milp(m.mip);
  ASSERT_EQ(sol.status, milp::MilpStatus::Optimal);
  EXPECT_EQ(sol.objective, 0.0);
}

TEST(Builders, NegativeBudgetRejected) {
  auto inst = tiny::path_instance();
  inst.costs.budget = -1.0;
  EXPECT_THROW(build_master(inst), InstanceError);
}

TEST(Builders, ZeroDemandGivesZeroRecourse) {
  auto inst = tiny::path_instance();
  inst.scenarios[0].demand = {0.0, 0.0};
  const auto sol = lp::solve_lp(build_subproblem(inst, 0, InvestmentPlan::zero(inst)));
  ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
  EXPECT_EQ(sol.objective, 0.0);
  for (double x : sol.x) EXPECT_EQ(x, 0.0);
}

TEST(Builders, DirectRouteOrShortage) {
  // No usable port capacity: each ton goes direct at r per ton or falls short at mu.
  tiny::PathParams pp;
  pp.origin_port_tons = 0.0;
  pp.dest_port_tons = 0.0;
  auto inst = tiny::path_instance(pp);
  const double r = 0.185 * pp.direct_miles;
  for (double mu : {0.5 * r, 1e6}) {
    inst.costs.shortage_penalty = mu;
    const auto sol = lp::solve_lp(build_subproblem(inst, 0, InvestmentPlan::zero(inst)));
    ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, std::min(r, mu) * pp.demand, 1e-9);
  }
  // Supply short of demand: the remainder is shortage.
  inst.scenarios[0].supply = {20.0, 0.0};
  inst.costs.shortage_penalty = 1000.0;
  const auto sol = lp::solve_lp(build_subproblem(inst, 0, InvestmentPlan::zero(inst)));
  EXPECT_NEAR(sol.objective, 20.0 * r + 30.0 * 1000.0, 1e-9);
}

TEST(Builders, TinyPathMatchesEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 25; ++k) {
    tiny::PathParams pp;
    pp.supply = std::round(100 * u(rng));
    pp.demand = std::round(100 * u(rng));
    pp.origin_port_tons = std::round(120 * u(rng));
    pp.dest_port_tons = std::round(120 * u(rng));
    pp.feeder_miles = 5 + std::round(100 * u(rng));
    pp.last_miles = 5 + std::round(100 * u(rng));
    pp.barge_miles = 50 + std::round(500 * u(rng));
    pp.direct_miles = 50 + std::round(400 * u(rng));
    pp.lambda = 0.5 + u(rng);
    const auto inst = tiny::path_instance(pp);
    // Path formulation: f1 through both ports, f2 direct, shortage d - f1 - f2.
    // A ton through a port is handled twice there (arrival and departure).
    const double c1 = 0.185 * pp.feeder_miles + 0.0089 * pp.barge_miles + 0.185 * pp.last_miles;
    const double c2 = 0.185 * pp.direct_miles;
    const double mu = inst.costs.shortage_penalty;
    lp::LinearProgram path;
    path.add_column(c1 - mu, 0.0, 1e9);
    path.add_column(c2 - mu, 0.0, 1e9);
    path.add_row(lp::RowSense::LessEqual, pp.origin_port_tons / (2 * pp.lambda), {{0, 1.0}});
    path.add_row(lp::RowSense::LessEqual, pp.dest_port_tons / (2 * pp.lambda), {{0, 1.0}});
    path.add_row(lp::RowSense::LessEqual, pp.supply, {{0, 1.0}, {1, 1.0}});
    path.add_row(lp::RowSense::LessEqual, pp.demand, {{0, 1.0}, {1, 1.0}});
    const auto best = oracle::enumerate_vertices(path);
    ASSERT_TRUE(best.has_value());
    const double expect = *best + mu * pp.demand;
    const auto sol = lp::solve_lp(build_subproblem(inst, 0, InvestmentPlan::zero(inst)));
    ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, expect, 1e-7 * (1 + expect)) << "case " << k;
  }
}

TEST(Builders, TagsFollowEquationScheme) {
  const auto inst = tiny::path_instance();
  const auto sh = build_shape(inst);
  std::set<std::string> prefixes;
  for (const auto& n : sh.lp.row_names) prefixes.insert(n.substr(0, n.find('/')));
  EXPECT_EQ(prefixes, (std::set<std::string>{"eq6", "eq7", "eq8", "eq9", "eq10", "eq11"}));
  EXPECT_NE(std::find(sh.lp.row_names.begin(), sh.lp.row_names.end(), "eq10/i=A,p=1,e=crane"), sh.lp.row_names.end());
  // No initial-inventory columns and only compatible columns.
  for (const auto& c : sh.columns) EXPECT_GE(c.period, 1);
}

TEST(Builders, IncompatibleEquipmentHasNoColumns) {
  GeneratorOptions g;
  g.seed = 4;
  g.commodities = 2;
  g.equipment_kinds = 3;
  auto inst = generate_instance(g);
  const auto sh = build_shape(inst);
  for (const auto& c : sh.columns) {
    if (c.kind == FlowKind::Xt || c.kind == FlowKind::Xr || c.kind == FlowKind::W || c.kind == FlowKind::Rt ||
        c.kind == FlowKind::Rr) {
      EXPECT_TRUE(inst.equip_ok(c.kind_index, c.commodity));
    }
    if (c.kind == FlowKind::U || c.kind == FlowKind::V) EXPECT_TRUE(inst.storage_ok(c.kind_index, c.commodity));
    if (c.kind == FlowKind::Xr || c.kind == FlowKind::Rr) {
      const int county = c.kind == FlowKind::Xr ? c.from : c.to;
      const int port = c.kind == FlowKind::Xr ? c.to : c.from;
      EXPECT_TRUE(inst.caps.county_rail[county] && inst.caps.port_rail[port]);
    }
  }
}

TEST(Builders, StrongDualityAndDualFeasibility) {
  std::mt19937_64 rng(123);
  int triples = 0;
  for (std::uint64_t seed = 1; triples < 100; ++seed) {
    const auto inst = small_random(seed);
    const auto sh = build_shape(inst);
    for (int rep = 0; rep < 3 && triples < 100; ++rep, ++triples) {
      const int s = static_cast<int>(rng() % inst.sets.num_scenarios());
      const auto plan = random_plan(inst, rng);
      const auto cap = capacity_rhs(inst, plan);
      const auto primal_lp = build_subproblem(inst, sh, s, cap);
      const auto primal = lp::solve_lp(primal_lp);
      ASSERT_EQ(primal.status, lp::LpStatus::Optimal);
      const auto dual_lp = build_dual_subproblem(inst, sh, s, cap);
      const auto dual = lp::solve_lp(dual_lp);
      ASSERT_EQ(dual.status, lp::LpStatus::Optimal);
      const double scale = std::max(1.0, std::abs(primal.objective));
      EXPECT_LE(std::abs(primal.objective - dual.objective) / scale, 1e-6) << "seed " << seed;
      // Primal-solve duals satisfy every dual row written from the instance.
      const auto res = checks::dual_residuals(inst, tagged(primal, primal_lp.row_names));
      EXPECT_LE(res.worst, 1e-6) << res.where << " seed " << seed;
      // And so does the dual LP's own optimum.
      std::map<std::string, double> y;
      for (int r = 0; r < dual_lp.num_cols(); ++r) y[dual_lp.col_names[r]] = dual.x[r];
      const auto res2 = checks::dual_residuals(inst, y);
      EXPECT_LE(res2.worst, 1e-6) << res2.where << " seed " << seed;
    }
  }
}

TEST(Builders, DualRowsMatchPrimalColumns) {
  const auto inst = small_random(5);
  const auto sh = build_shape(inst);
  const auto d = build_dual_subproblem(inst, sh, 0, capacity_rhs(inst, InvestmentPlan::zero(inst)));
  ASSERT_EQ(d.num_cols(), sh.num_rows());
  ASSERT_EQ(d.num_rows(), sh.num_cols());
  for (int r = 0; r < sh.num_rows(); ++r) EXPECT_EQ(d.col_names[r], sh.lp.row_names[r]);
  std::set<std::string> fams;
  for (const auto& n : d.row_names) fams.insert(n.substr(0, n.find('/')));
  for (const auto& f : fams) EXPECT_EQ(f.rfind("DS_", 0), 0u) << f;
  EXPECT_TRUE(fams.count("DS_e"));
}

TEST(Builders, CutTightAtGeneratorAndGlobalUnderestimator) {
  std::mt19937_64 rng(321);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto inst = small_random(seed);
    const auto sh = build_shape(inst);
    for (int rep = 0; rep < 3; ++rep) {
      const int s = static_cast<int>(rng() % inst.sets.num_scenarios());
      const auto gen = random_plan(inst, rng);
      const auto sol = lp::solve_lp(build_subproblem(inst, sh, s, capacity_rhs(inst, gen)));
      const auto cut = make_optimality_cut(inst, sh, s, sol);
      EXPECT_EQ(cut.theta_coef[s], 1.0);
      EXPECT_NEAR(cut.theta_bound(FractionalPlan::from(gen)), sol.objective, 1e-6 * std::max(1.0, sol.objective));
      for (int k = 0; k < 15; ++k) {
        const auto other = random_plan(inst, rng);
        const double h = recourse_value(inst, sh, s, other);
        EXPECT_LE(cut.theta_bound(FractionalPlan::from(other)), h + 1e-6 * std::max(1.0, h));
      }
    }
  }
}

TEST(Builders, ZeroDualsGiveTrivialCut) {
  const auto inst = tiny::path_instance();
  const auto sh = build_shape(inst);
  const std::vector<double> zeros(sh.num_rows(), 0.0);
  const auto cut = make_optimality_cut(inst, sh, 0, std::span<const double>(zeros));
  EXPECT_EQ(cut.constant, 0.0);
  for (double v : cut.z_coef) EXPECT_EQ(v, 0.0);
  lp::LpSolution bad;
  bad.status = lp::LpStatus::Infeasible;
  EXPECT_THROW(make_optimality_cut(inst, sh, 0, bad), std::invalid_argument);
}

TEST(Builders, MwObjectiveAtCorePoint) {
  const auto inst = small_random(3);
  const auto sh = build_shape(inst);
  std::mt19937_64 rng(8);
  const auto plan = random_plan(inst, rng);
  const auto mw = build_mw_subproblem(inst, sh, 0, FractionalPlan::from(plan));
  const auto ds = build_dual_subproblem(inst, sh, 0, capacity_rhs(inst, plan));
  EXPECT_EQ(mw.cost, ds.cost);
  const auto zero = build_mw_subproblem(inst, sh, 0, FractionalPlan::zero(inst));
  const auto ds0 = build_dual_subproblem(inst, sh, 0, capacity_rhs(inst, InvestmentPlan::zero(inst)));
  EXPECT_EQ(zero.cost, ds0.cost);
  auto neg = FractionalPlan::zero(inst);
  neg.new_equipment[0] = -1.0;
  EXPECT_THROW(build_mw_subproblem(inst, sh, 0, neg), InstanceError);
}

TEST(Builders, KnapsackCut) {
  const auto inst = small_random(2);
  EXPECT_FALSE(make_knapsack_cut(inst, -lp::kInf).has_value());
  const auto cut = make_knapsack_cut(inst, 100.0);
  ASSERT_TRUE(cut.has_value());
  EXPECT_EQ(cut->constant, 100.0);
  auto m = build_master(inst);
  m.add_cut(inst, *cut);
  const int row = m.knapsack_row;
  ASSERT_GE(row, 0);
  EXPECT_EQ(m.mip.lp.rhs[row], 100.0);
  m.add_cut(inst, *make_knapsack_cut(inst, 250.0));
  EXPECT_EQ(m.knapsack_row, row);
  EXPECT_EQ(m.mip.lp.rhs[row], 250.0);
  EXPECT_EQ(m.mip.lp.num_rows(), row + 1);
}

TEST(Builders, CompleteRecourseAtRandomPlans) {
  std::mt19937_64 rng(77);
  const auto inst = small_random(9);
  const auto sh = build_shape(inst);
  for (int k = 0; k < 20; ++k) {
    const auto plan = random_plan(inst, rng);
    for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
      const auto sol = lp::solve_lp(build_subproblem(inst, sh, s, capacity_rhs(inst, plan)));
      EXPECT_EQ(sol.status, lp::LpStatus::Optimal);
    }
  }
}

TEST(Builders, FlowBalanceConservation) {
  const auto inst = small_random(11);
  const auto sh = build_shape(inst);
  for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
    const auto sol = lp::solve_lp(build_subproblem(inst, sh, s, capacity_rhs(inst, InvestmentPlan::zero(inst))));
    const auto rec = extract_recourse(sh, s, sol.x);
    EXPECT_NEAR(rec.objective, sol.objective, 1e-9 * std::max(1.0, sol.objective));
    const int I = inst.sets.num_ports(), C = inst.C(), P = inst.P();
    std::vector<double> origin(I * C * (P + 1), 0.0), dest(I * C * (P + 1), 0.0);
    auto at = [&](int i, int c, int p) { return (i * C + c) * (P + 1) + p; };
    for (const auto& f : rec.flows) {
      switch (f.kind) {
        case FlowKind::Xt:
        case FlowKind::Xr: origin[at(f.to, f.commodity, f.period)] += f.tons; break;
        case FlowKind::W:
          origin[at(f.from, f.commodity, f.period)] -= f.tons;
          dest[at(f.to, f.commodity, f.period)] += f.tons;
          break;
        case FlowKind::Rt:
        case FlowKind::Rr: dest[at(f.from, f.commodity, f.period)] -= f.tons; break;
        case FlowKind::U:
          origin[at(f.from, f.commodity, f.period)] -= f.tons;
          if (f.period < P) origin[at(f.from, f.commodity, f.period + 1)] += f.tons;
          break;
        case FlowKind::V:
          dest[at(f.from, f.commodity, f.period)] -= f.tons;
          if (f.period < P) dest[at(f.from, f.commodity, f.period + 1)] += f.tons;
          break;
        default: break;
      }
    }
    for (double v : origin) EXPECT_NEAR(v, 0.0, 1e-6);
    for (double v : dest) EXPECT_NEAR(v, 0.0, 1e-6);
  }
}

TEST(Builders, ExtensiveFormZeroBudgetAndSingleScenario) {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = small_random(seed);
    inst.costs.budget = 0.0;
    const auto sh = build_shape(inst);
    double expect = 0.0;
    for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
      expect += inst.scenarios[s].probability * recourse_value(inst, sh, s, InvestmentPlan::zero(inst));
    }
    const auto ef = build_extensive_form(inst);
    const auto sol = milp::solve_milp(ef.mip);
    ASSERT_EQ(sol.status, milp::MilpStatus::Optimal);
    EXPECT_NEAR(sol.objective, expect, 1e-6 * std::max(1.0, expect));
  }
}

TEST(Builders, ExtensiveFormColumnGuard) {
  const auto inst = small_random(1);
  EXPECT_THROW(build_extensive_form(inst, 10), InstanceError);
}
