#pragma once

// Subcommand implementations behind the cplab command-line tool. Each takes
// parsed options plus output streams and returns the process exit status.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include "cplab/bounds.hpp"
#include "cplab/error.hpp"
#include "cplab/experiment.hpp"
#include "cplab/generate.hpp"
#include "cplab/io.hpp"
#include "cplab/modify.hpp"
#include "cplab/oracle.hpp"

namespace cplab::cli {

// Exit statuses shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;   // unsolvable / Failed
inline constexpr int kExitBudget = 2;     // search budget exhausted
inline constexpr int kExitError = 3;      // bad flags, malformed input, I/O

inline std::string format_plan(const Plan& plan) {
  if (plan.steps.empty()) return "(empty)";
  std::string out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) out += (i ? " a" : "a") + std::to_string(plan.steps[i]);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << contents;
  if (!out) throw Error("failed writing " + path);
}

inline io::InstanceDocument load_instance(const std::string& path) { return io::parse_instance(read_file(path)); }

inline Plan load_plan(const std::string& path) {
  std::istringstream in(read_file(path));
  return io::parse_plan(in);
}

struct GenOptions {
  ModelParams params;
  bool raw = false;  // raw g-goal instance instead of a modification instance
  std::string output;
};

inline std::string generate_document(const GenOptions& opts) {
  Instance inst = opts.raw ? gen_raw_instance(opts.params) : gen_modification_instance(opts.params);
  return io::serialize({std::move(inst), io::Provenance{opts.raw ? "raw" : "modification", opts.params}});
}

inline int cmd_gen(const GenOptions& opts, std::ostream& out) {
  const std::string text = generate_document(opts);
  if (opts.output.empty() || opts.output == "-")
    out << text;
  else
    write_file(opts.output, text);
  return kExitOk;
}

enum class SolveMode { OneStep, Bfs };

struct SolveOptions {
  std::string instance;
  SolveMode mode = SolveMode::OneStep;
  oracle::SearchBudget budget;
};

inline int cmd_solve(const SolveOptions& opts, std::ostream& out) {
  const Instance inst = load_instance(opts.instance).instance;
  if (opts.mode == SolveMode::OneStep) {
    if (auto op = one_step_solvable(inst)) {
      out << 'a' << *op << '\n';
      return kExitOk;
    }
    out << "unsolvable\n";
    return kExitNegative;
  }
  const auto result = oracle::plan_bfs(inst, opts.budget);
  if (const auto* found = std::get_if<oracle::FoundPlan>(&result)) {
    out << "plan " << format_plan(found->plan) << '\n';
    return kExitOk;
  }
  if (const auto* none = std::get_if<oracle::NoPlanWithinDepth>(&result)) {
    out << "no plan of length <= " << none->depth << '\n';
    return kExitNegative;
  }
  out << "budget exhausted after " << std::get<oracle::BudgetExhausted>(result).visited << " belief states\n";
  return kExitBudget;
}

struct BoundsOptions {
  BoundParams params;
};

inline int cmd_bounds(const BoundsOptions& opts, std::ostream& out) {
  const BoundParams& p = opts.params;
  p.validate();
  const double ub = upper_bound_alpha(p.n, p.c, p.sigma);
  const auto o_ub = static_cast<std::size_t>(std::floor(ub));
  auto line = [&](const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << name << ' ' << buf << '\n';
  };
  line("alpha_ub", ub);
  line("alpha_lb", lower_bound_alpha(p.n, p.r, p.c, p.k, p.sigma));
  line("p_one_op_variable", one_op_success_prob_variable(p.n, p.r, p.c, p.k));
  line("p_one_op_fixed", one_op_success_prob_fixed(p.n, p.r, p.c, p.k));
  out << "o_at_alpha_ub " << o_ub << '\n';
  line("p_goal_in_some_post", goal_in_some_postcond_prob(p.n, p.c, o_ub));
  return kExitOk;
}

struct SweepOptions {
  SweepConfig config;
  bool adaptive = false;  // ignore config.densities and bracket the transition
  AdaptiveGrid grid;
  std::string output;     // CSV path, "-" or empty for stdout
  std::string columns;    // optional gnuplot column file
};

inline int cmd_sweep(const SweepOptions& opts, std::ostream& out) {
  const Curve curve = opts.adaptive ? run_adaptive_sweep(opts.config, opts.grid) : run_sweep(opts.config);
  std::ostringstream csv;
  io::write_curve_csv(csv, curve.points);
  const bool to_stdout = opts.output.empty() || opts.output == "-";
  if (to_stdout)
    out << csv.str();
  else
    write_file(opts.output, csv.str());
  if (!opts.columns.empty()) {
    std::ostringstream cols;
    io::write_curve_columns(cols, curve.points);
    write_file(opts.columns, cols.str());
  }
  if (!to_stdout) {
    if (curve.threshold_estimate)
      out << "alpha_c " << io::format_double(*curve.threshold_estimate) << '\n';
    else
      out << "alpha_c none (p_hat never reaches 0.5)\n";
  }
  return kExitOk;
}

struct ModifyOptions {
  std::string old_instance;
  std::string old_plan;
  std::string new_instance;
  oracle::SearchBudget budget;
};

inline int cmd_modify(const ModifyOptions& opts, std::ostream& out) {
  const Instance old_inst = load_instance(opts.old_instance).instance;
  const Instance new_inst = load_instance(opts.new_instance).instance;
  const Plan plan = load_plan(opts.old_plan);
  if (!validate_plan(old_inst, plan).valid) throw ContractViolation("the plan does not solve the old instance");

  auto report = [&](const ModificationOutcome& outcome) {
    out << to_string(outcome.kind);
    if (outcome.appended_op) out << " a" << *outcome.appended_op;
    out << '\n';
    if (outcome.plan) out << "plan " << format_plan(*outcome.plan) << '\n';
    return outcome.kind == OutcomeKind::Failed ? kExitNegative : kExitOk;
  };

  std::vector<Delta> chain;
  try {
    chain = decompose(old_inst, new_inst);
  } catch (const StructuralError&) {
    out << "delta chain: unavailable, repairing directly\n";
    return report(modify_plan({old_inst, plan, new_inst}, opts.budget));
  }
  if (chain.size() <= 1) {
    out << "delta " << (chain.empty() ? std::string("none") : to_string(chain.front())) << '\n';
    return report(modify_plan({old_inst, plan, new_inst}, opts.budget));
  }

  out << "delta chain of " << chain.size() << '\n';
  const auto steps = modify_along_chain(old_inst, plan, new_inst, opts.budget);
  for (const ChainStep& s : steps)
    out << "  " << to_string(s.delta) << " -> " << to_string(s.outcome.kind) << '\n';
  const ModificationOutcome overall = summarize_chain(plan, steps);
  if (overall.plan && !validate_plan(new_inst, *overall.plan).valid)
    throw Error("chained repair produced a plan that does not solve the new instance");
  return report(overall);
}

} // namespace cplab::cli
