#include <gtest/gtest.h>

#include "support/suites.hpp"
#include "support/tiny.hpp"
#include "wsn/model.hpp"

using namespace wsn;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& field, const std::string& needle) {
  for (const auto& x : v) {
    if (x.field == field && x.rule.find(needle) != std::string::npos) return true;
  }
  return false;
}

Instance two_scenarios(double w0, double w1) {
  auto inst = tiny::path_instance();
  inst.sets.scenarios = {"lo", "hi"};
  inst.scenarios.push_back(inst.scenarios[0]);
  inst.scenarios[0].probability = w0;
  inst.scenarios[1].probability = w1;
  return inst;
}

CostParameters table5_costs() {
  CostParameters k;
  k.equipment_cost = {18723.0, 300000.0, 18723.0, 96738.0};  // conveyor, crane, hopper, forklift
  k.storage_cost = {227866.0};
  return k;
}

}  // namespace

TEST(Validate, ProbabilitiesSumToOne) {
  EXPECT_TRUE(validate_instance(two_scenarios(0.5, 0.5)).empty());
  const auto v = validate_instance(two_scenarios(0.5, 0.4));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "scenario probabilities sum 0.9 ≠ 1");
}

TEST(Validate, GeneratedAndTinyInstancesAreClean) {
  EXPECT_TRUE(validate_instance(tiny::path_instance()).empty());
  for (int k = 0; k < 10; ++k) EXPECT_TRUE(validate_instance(suites::small(k)).empty()) << k;
}

TEST(Validate, IdempotentAndPure) {
  auto inst = two_scenarios(0.5, 0.4);
  inst.costs.truck_rate.per_ton_mile = -1.0;
  const Instance copy = inst;
  const auto a = validate_instance(inst);
  const auto b = validate_instance(inst);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].to_string(), b[k].to_string());
  EXPECT_EQ(inst, copy);
}

TEST(Validate, ReportsEachBrokenInvariant) {
  auto inst = tiny::path_instance();
  inst.caps.processing_norm = {0.0};
  inst.costs.shortage_penalty = 1.0;
  inst.scenarios[0].demand[0] = 5.0;  // county j is an origin only
  inst.scenarios[0].supply[0] = -1.0;
  inst.caps.port_rail = {1, 0};
  inst.costs.county_port.push_back({0, 1, Mode::Rail, 5.0, 1.0});
  inst.costs.port_port[0].mode = Mode::Truck;
  const auto v = validate_instance(inst);
  EXPECT_TRUE(has_rule(v, "processing_norm", "compatible"));
  EXPECT_TRUE(has_rule(v, "shortage_penalty", "exceed"));
  EXPECT_TRUE(has_rule(v, "demand", "not a destination"));
  EXPECT_TRUE(has_rule(v, "supply", ">= 0"));
  EXPECT_TRUE(has_rule(v, "county_port", "rail access"));
  EXPECT_TRUE(has_rule(v, "port_port", "barge"));
  EXPECT_THROW(require_valid(inst), InstanceError);
}

TEST(Validate, StructuralErrorsStopEarly) {
  auto inst = tiny::path_instance();
  inst.sets.counties.push_back("A");  // clashes with a port id
  inst.sets.origin_counties.push_back(7);
  const auto v = validate_instance(inst);
  EXPECT_TRUE(has_rule(v, "nodes", "more than once"));
  EXPECT_TRUE(has_rule(v, "origin_counties", "outside"));
  auto sized = tiny::path_instance();
  sized.caps.equip_capacity.clear();
  EXPECT_TRUE(has_rule(validate_instance(sized), "equip_capacity", "expected 1"));
}

TEST(InvestmentCost, TableFivePrices) {
  const auto k = table5_costs();
  InvestmentPlan empty{{0, 0, 0, 0}, {0}};
  EXPECT_EQ(investment_cost(empty, k), 0.0);
  InvestmentPlan crane{{0, 1, 0, 0}, {0}};
  EXPECT_EQ(investment_cost(crane, k), 300000.0);
  InvestmentPlan mixed{{2, 0, 0, 1}, {0}};
  EXPECT_EQ(investment_cost(mixed, k), 134184.0);
}

TEST(InvestmentCost, LinearAcrossPorts) {
  const auto k = table5_costs();
  InvestmentPlan a{{1, 0, 3, 0, 0, 2, 0, 1}, {1, 0}};
  InvestmentPlan b{{0, 4, 1, 1, 2, 0, 0, 0}, {0, 3}};
  EXPECT_DOUBLE_EQ(investment_cost(a + b, k), investment_cost(a, k) + investment_cost(b, k));
  InvestmentPlan bad{{1, 2, 3}, {0}};
  EXPECT_THROW(investment_cost(bad, k), InstanceError);
}

TEST(RailArcs, BothEndpointsNeedAccess) {
  EXPECT_TRUE(allowed_rail_arc(true, true));
  EXPECT_FALSE(allowed_rail_arc(false, true));
  EXPECT_FALSE(allowed_rail_arc(true, false));
  EXPECT_TRUE(allowed_arc(Mode::Truck, false, false));
  EXPECT_TRUE(allowed_arc(Mode::Barge, false, false));

  auto inst = tiny::path_instance();
  inst.caps.county_rail = {1, 0};
  const Link cc{0, 1, Mode::Rail, 100.0, 25.95};
  EXPECT_FALSE(allowed_county_county_arc(inst, cc));
  inst.caps.county_rail = {1, 1};
  EXPECT_TRUE(allowed_county_county_arc(inst, cc));
}

TEST(Defaults, ShortagePenaltyDominatesLandside) {
  const std::vector<Link> cc{{0, 1, Mode::Truck, 100.0, 18.5}, {1, 0, Mode::Rail, 100.0, 25.95}};
  EXPECT_DOUBLE_EQ(default_shortage_penalty(cc, {}), 259.5);
  const std::vector<Link> cp{{0, 0, Mode::Truck, 10.0, 1.85}};
  EXPECT_DOUBLE_EQ(default_shortage_penalty({}, cp), 37.0);
}

TEST(Instance, HandlingGroupSplitsEvenly) {
  auto inst = tiny::path_instance();
  inst.sets.equipment_kinds = {"crane", "hopper"};
  inst.costs.equipment_cost = {300000.0, 18723.0};
  inst.caps.equip_compat = {1, 1};
  inst.caps.processing_norm = {1.0, 1.0};
  inst.caps.storage_ratio = {0.0, 0.0};
  inst.caps.equip_capacity = {40.0, 50.0};
  inst.caps.existing_equipment_tons = {10.0, 0.0, 0.0, 0.0};
  inst.caps.handling_groups = {{"crane/hopper", {0, 1}, {100.0, 30.0}}};
  EXPECT_TRUE(validate_instance(inst).empty());
  EXPECT_DOUBLE_EQ(inst.existing_equipment_capacity(0, 0), 60.0);
  EXPECT_DOUBLE_EQ(inst.existing_equipment_capacity(0, 1), 50.0);
  EXPECT_DOUBLE_EQ(inst.existing_equipment_capacity(1, 1), 15.0);
  EXPECT_DOUBLE_EQ(inst.existing_equipment_units(0, 1), 1.0);
}
