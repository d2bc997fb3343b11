#pragma once

// Command-line front end. run_cli returns the process exit status:
// 0 when every solve reached its gap, 2 when a limit stopped one, 1 on error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wsn/analysis.hpp"
#include "wsn/benders.hpp"
#include "wsn/generator.hpp"
#include "wsn/io.hpp"

namespace wsn {

struct RunConfig {
  std::string mode = "solve";
  std::string instance;
  std::optional<double> budget;
  std::vector<double> budgets;
  BendersOptions benders;
  std::string accel = "pareto";
  std::string out = "wsn_out";
  bool verbose = false;
  std::size_t exact_column_limit = AnalysisOptions{}.exact_column_limit;
  GeneratorOptions generator{15, 45, 5, 6, 4, 2, 1, -1.0, 1};
};

namespace cli_detail {

using nlohmann::json;

inline Acceleration parse_accel(const std::string& s) {
  if (s == "none") return Acceleration::None;
  if (s == "knapsack") return Acceleration::Knapsack;
  return Acceleration::KnapsackPareto;
}

inline json plan_json(const InvestmentPlan& plan, const Instance& inst) {
  json a = json::array();
  for (const auto& l : investment_lines(plan, inst)) {
    a.push_back({{"port", inst.sets.ports[l.port]},
                 {"type", l.storage ? "storage" : "equipment"},
                 {"kind", l.storage ? inst.sets.storage_kinds[l.kind] : inst.sets.equipment_kinds[l.kind]},
                 {"units", l.units},
                 {"cost", l.cost}});
  }
  return a;
}

inline json modes_json(const FlowSummary& s) {
  json m = json::object();
  for (Mode k : {Mode::Truck, Mode::Rail, Mode::Barge}) m[mode_name(k)] = {{"tons", s.mode(k).tons}, {"ton_miles", s.mode(k).ton_miles}};
  return m;
}

inline void write_json(const json& j, const fs::path& p) {
  std::ofstream out(p);
  out << j.dump(2) << "\n";
}

inline int run_solve(const RunConfig& cfg, const Instance& inst, const fs::path& out) {
  const auto trace = run_benders(inst, cfg.benders);
  write_trace_csv(trace, out / "trace.csv");
  std::ofstream(out / "trace_canonical.txt") << trace.canonical();
  write_investments_csv(investment_lines(trace.plan, inst), inst, out / "investments.csv");
  const auto rep = flow_report(trace.flows, inst, trace.plan);
  write_flow_report(rep, inst, out);
  json rec = json::array();
  for (int s = 0; s < inst.sets.num_scenarios(); ++s) rec.push_back({{"scenario", inst.sets.scenarios[s]}, {"value", trace.recourse[s]}});
  json j{{"mode", "solve"},
         {"budget", inst.costs.budget},
         {"acceleration", acceleration_name(trace.acceleration)},
         {"epsilon", cfg.benders.epsilon},
         {"termination", termination_name(trace.termination)},
         {"converged", trace.converged()},
         {"iterations", trace.num_iterations()},
         {"objective", trace.objective},
         {"lower_bound", trace.lower_bound},
         {"gap", trace.gap},
         {"investment", trace.investment},
         {"expected_recourse", trace.expected_recourse},
         {"recourse", rec},
         {"investments", plan_json(trace.plan, inst)},
         {"expected_flows", modes_json(rep.expected)},
         {"seconds", trace.seconds}};
  write_json(j, out / "summary.json");
  return trace.converged() ? 0 : 2;
}

inline int run_sweep(const RunConfig& cfg, const Instance& inst, const fs::path& out) {
  const auto rows = budget_sweep(inst, cfg.budgets, cfg.benders);
  write_sweep_csv(rows, out / "sweep.csv");
  json a = json::array();
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.converged;
    a.push_back({{"budget", r.budget},
                 {"total_cost", r.total_cost},
                 {"investment", r.investment},
                 {"expected_recourse", r.expected_recourse},
                 {"gap", r.gap},
                 {"iterations", r.iterations},
                 {"converged", r.converged},
                 {"investments", plan_json(r.plan, inst)},
                 {"expected_flows", modes_json(r.flows.expected)}});
  }
  write_json({{"mode", "sweep"}, {"acceleration", acceleration_name(cfg.benders.acceleration)}, {"epsilon", cfg.benders.epsilon}, {"points", a}},
             out / "summary.json");
  return all ? 0 : 2;
}

inline int run_stochastic(const RunConfig& cfg, const Instance& inst, const fs::path& out) {
  AnalysisOptions ao;
  ao.benders = cfg.benders;
  ao.exact_column_limit = cfg.exact_column_limit;
  const auto r = cfg.mode == "vss" ? compute_vss(inst, ao) : compute_evpi(inst, ao);
  json j{{"mode", cfg.mode},
         {"budget", inst.costs.budget},
         {"exact", r.exact},
         {"sp_objective", r.sp_objective},
         {"sp_investments", plan_json(r.sp_plan, inst)}};
  if (cfg.mode == "vss") {
    j["ev_objective"] = r.ev_objective;
    j["ev_investments"] = plan_json(r.ev_plan, inst);
    j["eev"] = r.eev;
    j["vss"] = r.vss;
  } else {
    json ws = json::array();
    for (int s = 0; s < inst.sets.num_scenarios(); ++s) ws.push_back({{"scenario", inst.sets.scenarios[s]}, {"value", r.ws_per_scenario[s]}});
    j["wait_and_see"] = ws;
    j["ws_expected"] = r.ws_expected;
    j["evpi"] = r.evpi;
    write_stochastic_csv(r, inst, out / "stochastic.csv");
  }
  write_json(j, out / "summary.json");
  return 0;
}

inline int run_oracle(const Instance& inst, const fs::path& out) {
  const auto ef = build_extensive_form(inst, std::numeric_limits<std::size_t>::max());
  milp::MilpOptions mo;
  mo.rel_gap = 1e-9;
  const auto sol = milp::solve_milp(ef.mip, mo);
  if (!sol.has_incumbent()) throw std::runtime_error(std::string("extensive form is ") + milp::status_name(sol.status));
  const auto plan = ef.plan_from(inst, sol.x);
  write_investments_csv(investment_lines(plan, inst), inst, out / "investments.csv");
  write_json({{"mode", "oracle"},
              {"status", milp::status_name(sol.status)},
              {"objective", sol.objective},
              {"best_bound", sol.best_bound},
              {"nodes", sol.nodes},
              {"investment", investment_cost(plan, inst)},
              {"investments", plan_json(plan, inst)}},
             out / "summary.json");
  return sol.status == milp::MilpStatus::Optimal ? 0 : 2;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Inland waterway port investment under demand uncertainty"};
  app.add_option("--mode", cfg.mode, "solve, sweep, vss, evpi, oracle or generate")
      ->check(CLI::IsMember({"solve", "sweep", "vss", "evpi", "oracle", "generate"}));
  app.add_option("--instance", cfg.instance, "instance directory");
  app.add_option("--budget", cfg.budget, "budget override, dollars");
  app.add_option("--budgets", cfg.budgets, "budgets for --mode sweep, comma separated")->delimiter(',');
  app.add_option("--epsilon", cfg.benders.epsilon, "relative optimality gap")->capture_default_str();
  app.add_option("--max-iters", cfg.benders.max_iterations, "iteration limit")->capture_default_str();
  app.add_option("--time-limit", cfg.benders.time_limit_seconds, "seconds")->capture_default_str();
  app.add_option("--accel", cfg.accel, "none, knapsack or pareto")
      ->check(CLI::IsMember({"none", "knapsack", "pareto"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.benders.seed, "seed (generator and solver)");
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_flag("--verbose", cfg.verbose, "print one line per iteration");
  app.add_option("--exact-columns", cfg.exact_column_limit, "largest extensive form solved directly in vss/evpi");
  app.add_option("--ports", cfg.generator.ports, "generate: ports")->capture_default_str();
  app.add_option("--counties", cfg.generator.counties, "generate: counties")->capture_default_str();
  app.add_option("--commodities", cfg.generator.commodities, "generate: commodities")->capture_default_str();
  app.add_option("--periods", cfg.generator.periods, "generate: periods")->capture_default_str();
  app.add_option("--scenarios", cfg.generator.scenarios, "generate: scenarios")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    cfg.benders.acceleration = cli_detail::parse_accel(cfg.accel);
    if (cfg.verbose) cfg.benders.log = &err;
    validate_options(cfg.benders);
    const fs::path outdir(cfg.out);
    if (cfg.mode == "generate") {
      cfg.generator.seed = cfg.benders.seed;
      if (cfg.budget) cfg.generator.budget = *cfg.budget;
      save_instance(generate_instance(cfg.generator), outdir);
      out << "wrote " << outdir.string() << "\n";
      return 0;
    }
    if (cfg.instance.empty()) throw std::invalid_argument("--instance is required for --mode " + cfg.mode);
    if (cfg.mode == "sweep" && cfg.budgets.empty()) throw std::invalid_argument("--mode sweep needs --budgets");
    if (cfg.mode != "sweep" && !cfg.budgets.empty()) throw std::invalid_argument("--budgets is only used by --mode sweep");
    if (cfg.mode == "sweep" && cfg.budget) throw std::invalid_argument("use --budgets, not --budget, with --mode sweep");
    Instance inst = load_instance(fs::path(cfg.instance));
    if (cfg.budget) {
      if (*cfg.budget < 0.0) throw std::invalid_argument("budget must be >= 0");
      inst.costs.budget = *cfg.budget;
    }
    fs::create_directories(outdir);
    int code = 0;
    if (cfg.mode == "solve") code = cli_detail::run_solve(cfg, inst, outdir);
    if (cfg.mode == "sweep") code = cli_detail::run_sweep(cfg, inst, outdir);
    if (cfg.mode == "vss" || cfg.mode == "evpi") code = cli_detail::run_stochastic(cfg, inst, outdir);
    if (cfg.mode == "oracle") code = cli_detail::run_oracle(inst, outdir);
    out << cfg.mode << ": " << (code == 0 ? "done" : "stopped at a limit") << ", results in " << outdir.string() << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wsn
