#include <gtest/gtest.h>

#include "support/suites.hpp"
#include "support/tiny.hpp"
#include "wsn/analysis.hpp"

using namespace wsn;

namespace {

AnalysisOptions exact_options() {
  AnalysisOptions o;
  o.benders.epsilon = 1e-6;
  o.exact_column_limit = 1u << 30;
  return o;
}

// Extensive form with the first stage pinned to `plan`.
double pinned_extensive_value(const Instance& inst, const InvestmentPlan& plan) {
  auto ef = build_extensive_form(inst);
  for (std::size_t k = 0; k < ef.z_col.size(); ++k) {
    ef.mip.lp.lower[ef.z_col[k]] = ef.mip.lp.upper[ef.z_col[k]] = static_cast<double>(plan.new_equipment[k]);
  }
  for (std::size_t k = 0; k < ef.y_col.size(); ++k) {
    ef.mip.lp.lower[ef.y_col[k]] = ef.mip.lp.upper[ef.y_col[k]] = static_cast<double>(plan.new_storage[k]);
  }
  const auto sol = lp::solve_lp(ef.mip.lp);
  EXPECT_EQ(sol.status, lp::LpStatus::Optimal);
  return sol.objective;
}

std::pair<double, InvestmentPlan> extensive_optimum(const Instance& inst) {
  const auto ef = build_extensive_form(inst);
  milp::MilpOptions o;
  o.rel_gap = 1e-9;
  const auto sol = milp::solve_milp(ef.mip, o);
  EXPECT_EQ(sol.status, milp::MilpStatus::Optimal);
  return {sol.objective, ef.plan_from(inst, sol.x)};
}

}  // namespace

TEST(Formulas, ValueOfStochasticSolution) { EXPECT_EQ(vss_from(1225.0, 1246.0), 21.0); }

TEST(Formulas, ExpectedWaitAndSeeFromTableThree) {
  const std::vector<double> ws{1433, 626, 680, 538, 1367, 2336, 976, 286, 1455, 1798};
  const std::vector<double> w{.065, .07, .075, .08, .085, .09, .095, .1, .2, .14};
  const auto r = evpi_from(1225.0, ws, w);
  EXPECT_NEAR(r.expected, 1221.48, 1e-9);
  EXPECT_EQ(std::round(r.expected), 1221.0);
  EXPECT_EQ(1225.0 - std::round(r.expected), 4.0);
  EXPECT_EQ(std::round(r.evpi), 4.0);
  EXPECT_THROW(evpi_from(0.0, ws, {1.0}), std::invalid_argument);
}

TEST(StochasticValues, SingleScenarioGivesExactZeros) {
  for (int k = 0; k < 5; ++k) {
    const auto inst = suites::small(k);
    ASSERT_EQ(inst.sets.num_scenarios(), 1);
    const auto r = stochastic_values(inst, exact_options());
    EXPECT_EQ(r.vss, 0.0) << k;
    EXPECT_EQ(r.evpi, 0.0) << k;
  }
  auto inst = suites::small(0);
  AnalysisOptions bo;
  bo.exact_column_limit = 0;
  const auto r = stochastic_values(inst, bo);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.vss, 0.0);
  EXPECT_EQ(r.evpi, 0.0);
}

TEST(StochasticValues, MeanInstanceAveragesSupplyAndDemand) {
  const auto inst = suites::small(12);
  ASSERT_GT(inst.sets.num_scenarios(), 1);
  const auto mean = mean_value_instance(inst);
  EXPECT_TRUE(validate_instance(mean).empty());
  for (std::size_t k = 0; k < mean.scenarios[0].demand.size(); ++k) {
    double d = 0.0, q = 0.0;
    for (const auto& sc : inst.scenarios) {
      d += sc.probability * sc.demand[k];
      q += sc.probability * sc.supply[k];
    }
    EXPECT_NEAR(mean.scenarios[0].demand[k], d, 1e-12 * std::max(1.0, d));
    EXPECT_NEAR(mean.scenarios[0].supply[k], q, 1e-12 * std::max(1.0, q));
  }
}

TEST(StochasticValues, InequalitiesAndRecomputationOnSuite) {
  for (int k = 5; k < 50; ++k) {
    const auto inst = suites::small(k);
    const auto r = stochastic_values(inst, exact_options());
    const double scale = std::max(1.0, std::abs(r.sp_objective));
    EXPECT_GE(r.vss, -1e-6 * scale) << k;
    EXPECT_GE(r.evpi, -1e-6 * scale) << k;
    EXPECT_LE(r.ws_expected, r.sp_objective + 1e-6 * scale) << k;
    EXPECT_LE(r.sp_objective, r.eev + 1e-6 * scale) << k;

    // Independent recomputation through extensive-form solves.
    const auto sp = extensive_optimum(inst);
    EXPECT_NEAR(r.sp_objective, sp.first, 1e-6 * scale) << k;
    const auto ev = extensive_optimum(mean_value_instance(inst));
    EXPECT_NEAR(r.ev_objective, ev.first, 1e-6 * scale) << k;
    const double eev = pinned_extensive_value(inst, ev.second);
    EXPECT_NEAR(r.vss, eev - sp.first, 1e-6 * scale) << k;
    double ws = 0.0;
    for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
      ws += inst.scenarios[s].probability * extensive_optimum(scenario_instance(inst, s)).first;
    }
    EXPECT_NEAR(r.evpi, sp.first - ws, 1e-6 * scale) << k;
  }
}

TEST(FlowReport, ZeroFlowsGiveZeroReport) {
  const auto inst = tiny::path_instance();
  RecourseSolution sol;
  sol.flows = {{FlowKind::Xt, 0, 0, 0, 1, 0, 10.0, 0.0}, {FlowKind::W, 0, 1, 0, 1, 0, 300.0, 0.0}};
  const auto s = summarize_flows(sol, inst);
  for (Mode m : {Mode::Truck, Mode::Rail, Mode::Barge}) {
    EXPECT_EQ(s.mode(m).tons, 0.0);
    EXPECT_EQ(s.mode(m).ton_miles, 0.0);
  }
  EXPECT_EQ(s.total(s.shortage), 0.0);
}

TEST(FlowReport, SingleBargeArc) {
  const auto inst = tiny::path_instance();
  RecourseSolution sol;
  sol.flows = {{FlowKind::W, 0, 1, 0, 1, 0, 50.0, 100.0}};
  const auto s = summarize_flows(sol, inst);
  EXPECT_EQ(s.mode(Mode::Barge).ton_miles, 5000.0);
  EXPECT_EQ(s.mode(Mode::Barge).tons, 100.0);
  EXPECT_EQ(s.mode(Mode::Truck).tons, 0.0);
}

TEST(FlowReport, ConservationAndTonMilesOnSmallSuite) {
  for (int k = 0; k < 20; ++k) {
    const auto inst = suites::small(k);
    const auto sh = build_shape(inst);
    const auto plan = InvestmentPlan::zero(inst);
    std::vector<RecourseSolution> sols;
    std::vector<std::vector<double>> xs;
    for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
      const auto sol = lp::solve_lp(build_subproblem(inst, sh, s, capacity_rhs(inst, plan)));
      sols.push_back(extract_recourse(sh, s, sol.x));
      xs.push_back(sol.x);
    }
    const auto rep = flow_report(sols, inst, plan);
    EXPECT_TRUE(rep.investments.empty());
    double expected_barge = 0.0;
    for (int s = 0; s < inst.sets.num_scenarios(); ++s) {
      const auto& r = rep.per_scenario[s];
      for (int c = 0; c < inst.C(); ++c) {
        const double lhs = r.delivered_by_waterway[c] + r.delivered_direct[c] + r.shortage[c];
        EXPECT_NEAR(lhs, r.demand[c], 1e-6 * std::max(1.0, r.demand[c])) << k;
      }
      double barge = 0.0, truck = 0.0;
      for (int j = 0; j < sh.num_cols(); ++j) {
        const auto& col = sh.columns[j];
        if (col.kind == FlowKind::W) barge += xs[s][j] * col.miles;
        if (col.kind == FlowKind::Xt || col.kind == FlowKind::Rt || col.kind == FlowKind::Ot) truck += xs[s][j] * col.miles;
      }
      EXPECT_NEAR(r.mode(Mode::Barge).ton_miles, barge, 1e-9 * std::max(1.0, barge));
      EXPECT_NEAR(r.mode(Mode::Truck).ton_miles, truck, 1e-9 * std::max(1.0, truck));
      expected_barge += inst.scenarios[s].probability * barge;
    }
    EXPECT_NEAR(rep.expected.mode(Mode::Barge).ton_miles, expected_barge, 1e-9 * std::max(1.0, expected_barge));
  }
}

TEST(FlowReport, InvestmentListing) {
  const auto inst = suites::small(2);
  auto plan = InvestmentPlan::zero(inst);
  plan.new_equipment.back() = 2;
  plan.new_storage.front() = 1;
  const auto lines = investment_lines(plan, inst);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_TRUE(lines[0].storage);
  EXPECT_EQ(lines[0].port, 0);
  EXPECT_EQ(lines[0].cost, inst.costs.storage_cost[0]);
  EXPECT_FALSE(lines[1].storage);
  EXPECT_EQ(lines[1].units, 2);
  EXPECT_EQ(lines[1].cost, 2 * inst.costs.equipment_cost.back());
}

TEST(BudgetSweep, ZeroBudgetIsNoInvestmentRecourse) {
  const auto inst = suites::medium(1);
  BendersOptions o;
  o.epsilon = 1e-6;
  const auto rows = budget_sweep(inst, {0.0}, o);
  ASSERT_EQ(rows.size(), 1u);
  const auto ev = evaluate_plan(inst, InvestmentPlan::zero(inst));
  EXPECT_EQ(rows[0].plan, InvestmentPlan::zero(inst));
  EXPECT_NEAR(rows[0].total_cost, ev.expected_recourse, 1e-9 * ev.expected_recourse);
  EXPECT_EQ(rows[0].investment, 0.0);
}

TEST(BudgetSweep, MonotoneAndDuplicatesIdentical) {
  const auto inst = suites::medium(1);
  double kappa = 0.0;
  for (double c : inst.costs.equipment_cost) kappa = std::max(kappa, c);
  const std::vector<double> budgets{0.0, 2 * kappa, 2 * kappa, 4 * kappa, 8 * kappa};
  BendersOptions o;
  o.epsilon = 1e-4;
  const auto rows = budget_sweep(inst, budgets, o);
  ASSERT_EQ(rows.size(), budgets.size());
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_LE(rows[k].total_cost, rows[k - 1].total_cost + 1e-6 * rows[k - 1].total_cost) << k;
    EXPECT_LE(rows[k].investment, rows[k].budget + 1e-6);
  }
  EXPECT_EQ(rows[1].total_cost, rows[2].total_cost);
  EXPECT_EQ(rows[1].plan, rows[2].plan);
  EXPECT_LT(rows.back().total_cost, rows.front().total_cost);
  EXPECT_THROW(budget_sweep(inst, {2.0, 1.0}, o), std::invalid_argument);
}
