#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cplab/commands.hpp"

namespace {

std::vector<double> parse_densities(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw cplab::InvalidParameters("bad density '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_model_flags(CLI::App* cmd, cplab::ModelParams& p, std::string& model, std::string& protect) {
  cmd->add_option("--model", model, "Instance model")->check(CLI::IsMember({"fixed", "variable"}));
  cmd->add_option("--n", p.n, "Propositions");
  cmd->add_option("--r", p.r, "Preconditions per operator");
  cmd->add_option("--c", p.c, "Postconditions per operator");
  cmd->add_option("--m", p.m, "Unknown propositions (2^m initial states)");
  cmd->add_option("--g", p.g, "Goal literals for --raw instances");
  cmd->add_option("--protect-achieved", protect, "Require achieved goals to stay true")
      ->check(CLI::IsMember({"on", "off"}));
}

} // namespace

int main(int argc, char** argv) {
  using namespace cplab;
  CLI::App app{"Random conformant planning instances, solvability bounds and plan-repair sweeps"};
  app.require_subcommand(1);

  std::string model = "fixed";
  std::string protect = "on";

  cli::GenOptions gen;
  gen.params.o = 20;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance document");
  add_model_flags(gen_cmd, gen.params, model, protect);
  gen_cmd->add_option("--o", gen.params.o, "Operators");
  gen_cmd->add_option("--seed", gen.params.seed, "Seed");
  gen_cmd->add_flag("--raw", gen.raw, "Raw instance with g goal literals");
  gen_cmd->add_option("--output", gen.output, "Output path (default stdout)");

  cli::SolveOptions solve;
  std::string solve_mode = "one-step";
  auto* solve_cmd = app.add_subcommand("solve", "Decide an instance");
  solve_cmd->add_option("instance", solve.instance, "Instance document")->required();
  solve_cmd->add_option("--mode", solve_mode, "one-step or bfs")->check(CLI::IsMember({"one-step", "bfs"}));
  solve_cmd->add_option("--max-depth", solve.budget.max_depth, "BFS depth bound");
  solve_cmd->add_option("--max-beliefs", solve.budget.max_beliefs, "BFS visited-set bound");

  cli::BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print analytic thresholds and probabilities");
  bounds_cmd->add_option("--n", bounds.params.n, "Propositions");
  bounds_cmd->add_option("--r", bounds.params.r, "Preconditions per operator");
  bounds_cmd->add_option("--c", bounds.params.c, "Postconditions per operator");
  bounds_cmd->add_option("--k", bounds.params.k, "Initial states");
  bounds_cmd->add_option("--sigma", bounds.params.sigma, "Confidence parameter in (0, 1)");

  cli::SweepOptions sweep;
  std::string densities;
  std::string solver = "one-step";
  std::string format = "csv";
  std::size_t sweep_depth = 4;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo density sweep");
  add_model_flags(sweep_cmd, sweep.config.base, model, protect);
  sweep_cmd->add_option("--densities", densities, "Comma-separated increasing densities");
  sweep_cmd->add_flag("--adaptive", sweep.adaptive, "Bracket the transition automatically");
  sweep_cmd->add_option("--grid-points", sweep.grid.points, "Adaptive grid size");
  sweep_cmd->add_option("--trials", sweep.config.trials, "Trials per density");
  sweep_cmd->add_option("--confidence", sweep.config.confidence, "Wilson interval level");
  sweep_cmd->add_option("--solver", solver, "one-step or bfs")->check(CLI::IsMember({"one-step", "bfs"}));
  sweep_cmd->add_option("--max-depth", sweep_depth, "Depth bound for --solver bfs");
  sweep_cmd->add_option("--seed", sweep.config.seed, "Master seed");
  sweep_cmd->add_option("--workers", sweep.config.workers, "Worker threads");
  sweep_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV path (default stdout)");
  sweep_cmd->add_option("--columns", sweep.columns, "Also write a gnuplot column file");

  cli::ModifyOptions modify;
  auto* modify_cmd = app.add_subcommand("modify", "Repair a plan for a changed instance");
  modify_cmd->add_option("old", modify.old_instance, "Old instance document")->required();
  modify_cmd->add_option("plan", modify.old_plan, "Plan for the old instance")->required();
  modify_cmd->add_option("new", modify.new_instance, "New instance document")->required();
  modify_cmd->add_option("--max-depth", modify.budget.max_depth, "Replanning depth bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  try {
    const ModelKind kind = parse_model_kind(model);
    const bool protect_on = protect == "on";
    if (*gen_cmd) {
      gen.params.model = kind;
      gen.params.protect_achieved = protect_on;
      return cli::cmd_gen(gen, std::cout);
    }
    if (*solve_cmd) {
      solve.mode = solve_mode == "bfs" ? cli::SolveMode::Bfs : cli::SolveMode::OneStep;
      return cli::cmd_solve(solve, std::cout);
    }
    if (*bounds_cmd) return cli::cmd_bounds(bounds, std::cout);
    if (*sweep_cmd) {
      sweep.config.base.model = kind;
      sweep.config.base.protect_achieved = protect_on;
      if (solver == "bfs") sweep.config.solver = BfsSolver{sweep_depth};
      if (!sweep.adaptive) {
        if (densities.empty()) throw InvalidParameters("--densities or --adaptive is required");
        sweep.config.densities = parse_densities(densities);
      }
      return cli::cmd_sweep(sweep, std::cout);
    }
    if (*modify_cmd) return cli::cmd_modify(modify, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "cplab: " << e.what() << '\n';
    return cli::kExitError;
  }
  return cli::kExitError;
}
