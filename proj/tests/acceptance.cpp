// Acceptance suite: one pass/fail line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "cplab/cplab.hpp"
#include "cplab/commands.hpp"

using namespace cplab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAIL{" << what << "}";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<void(Verdict&)> body;
};

unsigned worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

bool in_wilson99(std::size_t hits, std::size_t trials, double p) {
  const Interval ci = wilson_ci(hits, trials, 0.99);
  return ci.low <= p && p <= ci.high;
}

std::string fmt(double v) { return io::format_double(v); }

// 1. Recurrence vs exhaustive enumeration.
void recurrence_oracle(Verdict& v) {
  double worst = 0.0;
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t w = 0; w <= n; ++w)
        worst = std::max(worst, std::abs(consistency_prob(j, n, w) - oracle::enumerate_consistency_prob(j, n, w)));
  v.require(worst <= 1e-12, "max |dp - enum| = " + fmt(worst));
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t j = 0; j <= n; ++j) {
      const double expect = std::ldexp(1.0, -static_cast<int>(j));
      v.require(consistency_prob(j, n, n) == expect, "f(j,n,n) exact");
      v.require(consistency_prob(n, n, j) == expect, "f(n,n,w) exact");
    }
  v.detail << " max_abs_diff=" << fmt(worst);
}

// 2. Closed-form spot values.
void closed_forms(Verdict& v) {
  const double ub5 = upper_bound_alpha(10, 2, 0.5);
  const double ub1 = upper_bound_alpha(10, 2, 0.1);
  const double lb = lower_bound_alpha(10, 3, 2, 2, 0.5);
  const double pv = one_op_success_prob_variable(10, 3, 2, 2);
  const double pf = one_op_success_prob_fixed(4, 1, 1, 1);
  v.require(std::abs(ub5 - 6.5788) <= 1e-4, "alpha_ub(10,2,0.5)=" + fmt(ub5));
  v.require(ub1 == 1.0, "alpha_ub(10,2,0.1)=" + fmt(ub1));
  v.require(std::abs(lb - 2.0662e4) <= 2.0662e4 * 1e-3, "alpha_lb=" + fmt(lb));
  v.require(std::abs(pv - 1.5016e-3) <= 1e-6, "p_variable=" + fmt(pv));
  v.require(pf == 0.0625, "p_fixed=" + fmt(pf));
  v.detail << " alpha_ub=" << fmt(ub5) << " alpha_lb=" << fmt(lb) << " p_var=" << fmt(pv);
}

// 3. Probability atoms by Monte Carlo.
void probability_atoms(Verdict& v) {
  const std::size_t samples = 100000;
  ModelParams base;
  base.n = 10;
  base.r = 3;
  base.c = 2;
  base.m = 1;

  for (ModelKind kind : {ModelKind::Fixed, ModelKind::Variable}) {
    ModelParams params = base;
    params.model = kind;
    std::size_t in_post = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      RngStream rng(0xA11, s);
      in_post += contains(gen_operator(params, rng).post(), Literal::pos(0)) ? 1 : 0;
    }
    v.require(in_wilson99(in_post, samples, 0.1), "(a) " + to_string(kind) + " literal-in-post");
    v.detail << " a_" << to_string(kind) << "=" << fmt(static_cast<double>(in_post) / samples);
  }

  auto random_state = [](RngStream& rng, std::size_t n) {
    std::vector<bool> bits(n);
    for (std::size_t p = 0; p < n; ++p) bits[p] = rng.coin();
    return State(bits);
  };
  std::size_t var_ok = 0, fix_ok = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    ModelParams params = base;
    params.model = ModelKind::Variable;
    RngStream rv(0xB22, s);
    const Operator ov = gen_operator(params, rv);
    var_ok += is_applicable(ov, random_state(rv, base.n)) ? 1 : 0;
    params.model = ModelKind::Fixed;
    RngStream rf(0xC33, s);
    const Operator of = gen_operator(params, rf);
    fix_ok += is_applicable(of, random_state(rf, base.n)) ? 1 : 0;
  }
  v.require(in_wilson99(var_ok, samples, std::pow(0.85, 10)), "(b) variable pre-consistency");
  v.require(in_wilson99(fix_ok, samples, 0.125), "(c) fixed pre-consistency");
  v.detail << " b=" << fmt(static_cast<double>(var_ok) / samples) << " c=" << fmt(static_cast<double>(fix_ok) / samples);

  const double expect_d = goal_in_some_postcond_prob(10, 2, 6);
  for (ModelKind kind : {ModelKind::Fixed, ModelKind::Variable}) {
    ModelParams params = base;
    params.model = kind;
    params.o = 6;
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      params.seed = derive_seed(0xD44, s);
      const Instance inst = gen_modification_instance(params);
      const Literal t = inst.target_goals().front();
      hits += std::any_of(inst.operators().begin(), inst.operators().end(),
                          [&](const Operator& op) { return contains(op.post(), t); })
                  ? 1
                  : 0;
    }
    v.require(in_wilson99(hits, samples, expect_d), "(d) " + to_string(kind) + " target in some post");
    v.detail << " d_" << to_string(kind) << "=" << fmt(static_cast<double>(hits) / samples);
  }
}

// 4. Below the upper-bound threshold almost nothing is one-step solvable.
void upper_bound_soundness(Verdict& v) {
  for (ModelKind kind : {ModelKind::Variable, ModelKind::Fixed}) {
    ModelParams base;
    base.model = kind;
    base.n = 10;
    base.r = 3;
    base.c = 2;
    base.m = 1;
    base.seed = 0x5EED;
    const auto rep = check_upper_bound(base, 0.25, 20000, worker_count());
    v.require(rep.pass, to_string(kind) + " fraction " + fmt(rep.fraction) + " > sigma + half-width");
    v.detail << " " << to_string(kind) << ":o=" << rep.operators << ",frac=" << fmt(rep.fraction)
             << ",hw=" << fmt(rep.half_width);
  }
}

// 5. Phase-transition curve properties.
void phase_transition(Verdict& v) {
  for (std::size_t n : {10, 20}) {
    SweepConfig cfg;
    cfg.base.model = ModelKind::Fixed;
    cfg.base.n = n;
    cfg.base.r = 3;
    cfg.base.c = 2;
    cfg.base.m = 1;
    cfg.base.protect_achieved = true;
    cfg.trials = 2000;
    cfg.confidence = 0.99;
    cfg.workers = worker_count();

    std::vector<double> thresholds;
    std::vector<double> steps;
    for (std::uint64_t seed : {0x1111ULL, 0x2222ULL}) {
      cfg.seed = seed;
      const Curve curve = run_adaptive_sweep(cfg);
      const auto& pts = curve.points;
      const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      for (const CurvePoint& pt : pts) {
        const double bound = goal_in_some_postcond_prob(n, cfg.base.c, pt.operators);
        v.require(pt.p_hat <= bound + (pt.ci_high - pt.p_hat), tag + " dominance at alpha=" + fmt(pt.alpha));
      }
      v.require(pts.front().p_hat < 0.05, tag + " start p_hat=" + fmt(pts.front().p_hat));
      v.require(pts.back().p_hat > 0.95, tag + " end p_hat=" + fmt(pts.back().p_hat));
      v.require(count_crossings(pts) == 1 && curve.threshold_estimate.has_value(), tag + " unique crossing");
      double step = 0.0;
      for (std::size_t i = 1; i < pts.size(); ++i) step = std::max(step, pts[i].alpha - pts[i - 1].alpha);
      steps.push_back(step);
      thresholds.push_back(curve.threshold_estimate.value_or(-1.0));
      v.detail << " [" << tag << " alpha_c=" << fmt(thresholds.back()) << " grid=" << fmt(pts.front().alpha) << ".."
               << fmt(pts.back().alpha) << " step=" << fmt(step) << "]";
    }
    const double gap = std::abs(thresholds[0] - thresholds[1]);
    v.require(gap <= std::max(steps[0], steps[1]), "n=" + std::to_string(n) + " alpha_c seeds differ by " + fmt(gap));
  }
}

ModelParams random_small_params(RngStream& pick, std::uint64_t seed) {
  ModelParams params;
  params.model = pick.coin() ? ModelKind::Fixed : ModelKind::Variable;
  params.n = 2 + pick.below(7);  // 2..8
  params.m = 1 + pick.below(std::min<std::size_t>(params.n - 1, 2));
  params.r = pick.below(std::min<std::size_t>(params.n, 3) + 1);
  params.c = 1 + pick.below(std::min<std::size_t>(params.n, 3));
  params.o = pick.below(13);  // 0..12
  params.g = 1 + pick.below(std::min<std::size_t>(params.n, 3));
  params.protect_achieved = pick.coin();
  params.seed = seed;
  return params;
}

// 6. Solver vs oracle agreement.
void oracle_agreement(Verdict& v) {
  std::size_t solvable = 0, bfs_found = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RngStream pick(0x6000, s);
    const ModelParams params = random_small_params(pick, s);
    const Instance inst = gen_modification_instance(params);
    const auto got = one_step_solvable(inst);
    const auto all = oracle::exhaustive_one_step(inst);
    v.require(got.has_value() == !all.empty(), "decision mismatch at seed " + std::to_string(s));
    if (got && !all.empty()) v.require(*got == all.front(), "minimal id mismatch at seed " + std::to_string(s));
    solvable += got ? 1 : 0;

    const Instance raw = gen_raw_instance(params);
    for (const Instance* target : {&inst, &raw}) {
      const auto res = oracle::plan_bfs(*target, {4, 200000});
      if (const auto* f = std::get_if<oracle::FoundPlan>(&res)) {
        ++bfs_found;
        v.require(validate_plan(*target, f->plan).valid, "bfs plan invalid at seed " + std::to_string(s));
        if (!f->plan.steps.empty()) {
          const auto shorter = oracle::plan_bfs(*target, {f->plan.steps.size() - 1, 200000});
          v.require(std::holds_alternative<oracle::NoPlanWithinDepth>(shorter),
                    "bfs plan not shortest at seed " + std::to_string(s));
        }
      }
    }
  }
  v.detail << " one_step_solvable=" << solvable << "/1000 bfs_found=" << bfs_found << "/2000";
}

// 7. Plan-modification pipeline on perturbed solvable instances.
void modification_pipeline(Verdict& v) {
  const oracle::SearchBudget budget{4, 200000};
  std::size_t triples = 0, removed = 0;
  std::size_t counts[4] = {0, 0, 0, 0};
  for (std::uint64_t s = 0; triples < 500 && s < 100000; ++s) {
    RngStream pick(0x7000, s);
    ModelParams params = random_small_params(pick, s);
    params.o = 2 + pick.below(11);
    const Instance old_inst = gen_raw_instance(params);
    const auto res = oracle::plan_bfs(old_inst, budget);
    const auto* found = std::get_if<oracle::FoundPlan>(&res);
    if (!found) continue;

    // Perturb the goal by one proposition.
    std::vector<Literal> goal = old_inst.goal();
    const std::size_t p = static_cast<std::size_t>(pick.below(old_inst.n()));
    auto it = std::find_if(goal.begin(), goal.end(), [&](const Literal& l) { return l.prop == p; });
    const bool is_removal = it != goal.end();
    if (is_removal)
      goal.erase(it);
    else
      goal.push_back({p, pick.coin()});
    const Instance new_inst(old_inst.n(), old_inst.operators(), old_inst.initial(), goal);
    const Delta delta = classify_delta(old_inst, new_inst);
    v.require((delta.kind == DeltaKind::GoalRemoved) == is_removal, "delta classification");

    ++triples;
    const Plan& cp = found->plan;
    const ModificationOutcome out = modify_plan({old_inst, cp, new_inst}, budget);
    ++counts[static_cast<int>(out.kind)];
    const std::string tag = " at seed " + std::to_string(s);

    if (out.kind != OutcomeKind::Failed)
      v.require(out.plan && validate_plan(new_inst, *out.plan).valid, "outcome plan invalid" + tag);
    if (is_removal) {
      ++removed;
      v.require(out.kind == OutcomeKind::Reused, "goal removal not Reused" + tag);
    }
    // Preference order: a more preferred strategy was available iff it was chosen.
    const bool reusable = validate_plan(new_inst, cp).valid;
    v.require(reusable == (out.kind == OutcomeKind::Reused), "Reused preference" + tag);
    if (!reusable) {
      const auto residual = residual_instance(new_inst, cp);
      const bool extendable = residual && !oracle::exhaustive_one_step(*residual).empty();
      v.require(extendable == (out.kind == OutcomeKind::ExtendedOneStep), "ExtendedOneStep preference" + tag);
      if (out.kind == OutcomeKind::ExtendedOneStep)
        v.require(out.plan->steps.size() == cp.steps.size() + 1 &&
                      std::equal(cp.steps.begin(), cp.steps.end(), out.plan->steps.begin()),
                  "extension is not CP + one step" + tag);
      if (out.kind == OutcomeKind::Failed)
        v.require(std::holds_alternative<oracle::NoPlanWithinDepth>(oracle::plan_bfs(new_inst, budget)),
                  "Failed although a plan exists" + tag);
    }
  }
  v.require(triples == 500, "only " + std::to_string(triples) + " triples built");
  v.detail << " triples=" << triples << " removals=" << removed << " reused=" << counts[0]
           << " extended=" << counts[1] << " replanned=" << counts[2] << " failed=" << counts[3];
}

int run_status(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 8. Byte-identical CLI outputs.
void determinism(Verdict& v) {
  const fs::path dir = fs::temp_directory_path() / "cplab_acceptance";
  fs::create_directories(dir);
  const std::string cli = CPLAB_CLI;
  auto file = [&](const std::string& name) { return (dir / name).string(); };

  const std::string gen = cli + " gen --model variable --n 12 --o 40 --r 3 --c 2 --m 2 --seed 77 --output ";
  v.require(run_status(gen + file("g1.json")) == 0, "gen run 1");
  v.require(run_status(gen + file("g2.json")) == 0, "gen run 2");
  v.require(cli::read_file(file("g1.json")) == cli::read_file(file("g2.json")), "gen outputs differ");

  const std::string sweep =
      cli + " sweep --model fixed --n 10 --r 3 --c 2 --m 1 --trials 300 --densities 0,5,10,20,40,80 --seed 31";
  v.require(run_status(sweep + " --workers 1 -o " + file("s1.csv") + " > /dev/null") == 0, "sweep run 1");
  v.require(run_status(sweep + " --workers 1 -o " + file("s2.csv") + " > /dev/null") == 0, "sweep run 2");
  v.require(run_status(sweep + " --workers 4 -o " + file("s4.csv") + " > /dev/null") == 0, "sweep 4 workers");
  const std::string s1 = cli::read_file(file("s1.csv"));
  v.require(s1 == cli::read_file(file("s2.csv")), "sweep outputs differ across runs");
  v.require(s1 == cli::read_file(file("s4.csv")), "sweep outputs differ across worker counts");
  v.detail << " gen_bytes=" << cli::read_file(file("g1.json")).size() << " csv_bytes=" << s1.size();
  fs::remove_all(dir);
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "recurrence matches exhaustive enumeration", 1.0, recurrence_oracle},
      {2, "closed-form spot values", 1.0, closed_forms},
      {3, "probability atoms by Monte Carlo", 30.0, probability_atoms},
      {4, "upper-bound soundness harness", 60.0, upper_bound_soundness},
      {5, "phase-transition curve", 300.0, phase_transition},
      {6, "one-step solver and BFS agree with oracles", 120.0, oracle_agreement},
      {7, "plan-modification pipeline", 120.0, modification_pipeline},
      {8, "CLI determinism", 120.0, determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= c.time_limit_s, "runtime " + fmt(secs) + "s over " + fmt(c.time_limit_s) + "s");
    failures += v.pass ? 0 : 1;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << timing << ")"
              << v.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
