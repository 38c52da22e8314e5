#pragma once

// Monte Carlo density sweeps: empirical probability that a random
// modification instance is solvable, as a function of the operator density
// alpha = o / n, with Wilson intervals and a 0.5-crossing threshold estimate.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "cplab/bounds.hpp"
#include "cplab/error.hpp"
#include "cplab/generate.hpp"
#include "cplab/model.hpp"
#include "cplab/modify.hpp"
#include "cplab/oracle.hpp"
#include "cplab/rng.hpp"

namespace cplab {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for `successes` out of `trials` at two-sided level `confidence`.
inline Interval wilson_ci(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw InvalidParameters("wilson_ci needs at least one trial");
  if (successes > trials) throw InvalidParameters("successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidParameters("confidence must lie in (0, 1)");

  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2.0);
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) ci.low = 0.0;
  if (successes == trials) ci.high = 1.0;
  ci.low = std::min(ci.low, p);
  ci.high = std::max(ci.high, p);
  return ci;
}

struct OneStepSolver {};
struct BfsSolver {
  std::size_t max_depth = 4;
  std::size_t max_beliefs = 100'000;
};
using SolverConfig = std::variant<OneStepSolver, BfsSolver>;

struct SweepConfig {
  ModelParams base;              // base.o and base.seed are ignored
  std::vector<double> densities;
  std::size_t trials = 2000;
  double confidence = 0.99;
  SolverConfig solver = OneStepSolver{};
  std::uint64_t seed = 0;
  unsigned workers = 1;          // does not affect results

  void validate() const {
    base.validate();
    if (base.m == 0) throw InvalidParameters("sweeps need m >= 1 so the target can be unachieved");
    if (trials < 1) throw InvalidParameters("trials must be at least 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidParameters("confidence must lie in (0, 1)");
    if (workers < 1) throw InvalidParameters("workers must be at least 1");
    for (std::size_t i = 0; i < densities.size(); ++i) {
      if (!(densities[i] >= 0.0) || !std::isfinite(densities[i]))
        throw InvalidParameters("densities must be finite and nonnegative");
      if (i > 0 && !(densities[i] > densities[i - 1]))
        throw InvalidParameters("densities must be strictly increasing");
    }
  }
};

struct CurvePoint {
  double alpha = 0.0;
  std::size_t operators = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  // Trials whose target literal is a postcondition of at least one operator.
  std::size_t postcondition_hits = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct Curve {
  SweepConfig config;
  std::vector<CurvePoint> points;
  std::optional<double> threshold_estimate;
};

// Operator count for density alpha: round half up.
inline std::size_t operators_for_density(double alpha, std::size_t n) {
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 0.5));
}

struct TrialOutcome {
  bool solvable = false;
  bool target_in_post = false;
};

// One modification instance decided for one-step solvability. Operators are
// generated lazily from their own streams and the scan stops at the first
// solver, so the answer equals one_step_solvable(gen_modification_instance(params))
// without materializing the instance.
inline TrialOutcome one_step_trial(const ModelParams& params) {
  params.validate();
  if (params.m == 0) throw InvalidParameters("m = 0 leaves no unachieved goal");
  RngStream init_rng(params.seed, stream::initial);
  InitialBelief init = gen_initial_belief(params, init_rng);
  const Literal target = gen_target(params, init);
  std::vector<Literal> goal;
  if (params.protect_achieved) goal = init.fixed;
  goal.push_back(target);
  goal = normalize_literals(std::move(goal), "goal");

  TrialOutcome out;
  for (std::size_t i = 0; i < params.o; ++i) {
    RngStream rng = operator_stream(params.seed, i);
    const Operator op = gen_operator(params, rng, static_cast<OperatorId>(i));
    if (!contains(op.post(), target)) continue;
    out.target_in_post = true;
    if (is_applicable(op, init.belief) && satisfies(apply_belief(op, init.belief), goal)) {
      out.solvable = true;
      break;
    }
  }
  return out;
}

inline TrialOutcome run_trial(const ModelParams& params, const SolverConfig& solver) {
  if (std::holds_alternative<OneStepSolver>(solver)) return one_step_trial(params);
  const auto& bfs = std::get<BfsSolver>(solver);
  const Instance inst = gen_modification_instance(params);
  TrialOutcome out;
  for (const Operator& op : inst.operators())
    if (contains(op.post(), inst.target_goals().front())) out.target_in_post = true;
  auto result = oracle::plan_bfs(inst, {bfs.max_depth, bfs.max_beliefs});
  out.solvable = std::holds_alternative<oracle::FoundPlan>(result);
  return out;
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t point, std::size_t trial) {
  return derive_seed(derive_seed(master, point), trial);
}

namespace detail {

// Runs body(t) for t in [0, count) on `workers` threads; body must only
// touch its own per-trial state. Exceptions propagate from the first failure.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (workers <= 1 || count < 2) {
    for (std::size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  auto work = [&] {
    constexpr std::size_t chunk = 16;
    while (!failed.load()) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      try {
        for (std::size_t t = begin; t < std::min(count, begin + chunk); ++t) body(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

} // namespace detail

inline CurvePoint run_point(const SweepConfig& config, std::size_t point_index, double alpha) {
  ModelParams params = config.base;
  params.o = operators_for_density(alpha, params.n);
  std::vector<TrialOutcome> outcomes(config.trials);
  detail::parallel_for(config.trials, config.workers, [&](std::size_t t) {
    ModelParams p = params;
    p.seed = trial_seed(config.seed, point_index, t);
    outcomes[t] = run_trial(p, config.solver);
  });

  CurvePoint pt;
  pt.alpha = alpha;
  pt.operators = params.o;
  pt.trials = config.trials;
  for (const TrialOutcome& o : outcomes) {
    pt.successes += o.solvable ? 1 : 0;
    pt.postcondition_hits += o.target_in_post ? 1 : 0;
  }
  pt.p_hat = static_cast<double>(pt.successes) / static_cast<double>(pt.trials);
  const Interval ci = wilson_ci(pt.successes, pt.trials, config.confidence);
  pt.ci_low = ci.low;
  pt.ci_high = ci.high;
  return pt;
}

// Smallest upward crossing of p_hat through 0.5, linearly interpolated
// between the last point below 0.5 and the first point at or above it.
inline std::optional<double> estimate_threshold(const std::vector<CurvePoint>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].p_hat < 0.5) continue;
    if (i == 0) return points[0].alpha;
    const CurvePoint& a = points[i - 1];
    const CurvePoint& b = points[i];
    return a.alpha + (0.5 - a.p_hat) / (b.p_hat - a.p_hat) * (b.alpha - a.alpha);
  }
  return std::nullopt;
}

inline std::optional<double> estimate_threshold(const Curve& curve) { return estimate_threshold(curve.points); }

// Number of times p_hat changes side of 0.5 along the curve.
inline std::size_t count_crossings(const std::vector<CurvePoint>& points) {
  std::size_t crossings = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if ((points[i - 1].p_hat >= 0.5) != (points[i].p_hat >= 0.5)) ++crossings;
  return crossings;
}

inline Curve run_sweep(const SweepConfig& config) {
  config.validate();
  Curve curve{config, {}, std::nullopt};
  curve.points.reserve(config.densities.size());
  for (std::size_t i = 0; i < config.densities.size(); ++i)
    curve.points.push_back(run_point(config, i, config.densities[i]));
  curve.threshold_estimate = estimate_threshold(curve.points);
  return curve;
}

struct AdaptiveGrid {
  double start = 0.5;       // first probe density
  double low = 0.05;        // grid must start below this p_hat
  double high = 0.95;       // and end above this one
  std::size_t points = 24;  // grid size between the probed brackets
  std::size_t max_probes = 24;
};

// Probes densities by halving from `start` until p_hat < low and then
// doubling until p_hat > high, lays a uniform grid of `points` densities
// between the two brackets, and runs the sweep on it. If the sweep's end
// points miss their targets the grid is extended by whole steps and rerun.
inline Curve run_adaptive_sweep(SweepConfig config, const AdaptiveGrid& grid = {}) {
  config.densities.clear();
  config.validate();
  if (!(grid.start > 0.0) || grid.points < 2 || !(grid.low < grid.high))
    throw InvalidParameters("adaptive grid needs start > 0, points >= 2, low < high");

  SweepConfig probe = config;
  probe.seed = derive_seed(config.seed, 0x50524f4245ULL);
  std::size_t probes = 0;
  auto probe_at = [&](double alpha) {
    if (probes++ >= grid.max_probes) throw InvalidParameters("adaptive grid did not bracket the transition");
    return run_point(probe, probes, alpha).p_hat;
  };

  double lo = grid.start;
  while (probe_at(lo) >= grid.low) lo /= 2.0;
  double hi = lo;
  while (probe_at(hi) <= grid.high) hi *= 2.0;

  const double step = (hi - lo) / static_cast<double>(grid.points - 1);
  std::vector<double> densities;
  for (std::size_t i = 0; i < grid.points; ++i) densities.push_back(lo + step * static_cast<double>(i));

  for (std::size_t attempt = 0;; ++attempt) {
    config.densities = densities;
    Curve curve = run_sweep(config);
    const bool starts_low = curve.points.front().p_hat < grid.low;
    const bool ends_high = curve.points.back().p_hat > grid.high;
    if ((starts_low && ends_high) || attempt >= 8) return curve;
    if (!ends_high) densities.push_back(densities.back() + step);
    if (!starts_low) densities.insert(densities.begin(), densities.front() / 2.0);
  }
}

struct UpperBoundReport {
  std::size_t operators = 0;
  double alpha_ub = 0.0;
  double sigma = 0.0;
  std::size_t trials = 0;
  std::size_t solvable = 0;
  std::size_t postcondition_hits = 0;
  double fraction = 0.0;
  double half_width = 0.0;  // upper Wilson half-width at 99%
  bool pass = false;
};

// Runs `trials` one-step experiments at o = floor(upper_bound_alpha(n, c, sigma))
// and checks that the solvable fraction stays within sigma plus the upper
// Wilson half-width.
inline UpperBoundReport check_upper_bound(const ModelParams& base, double sigma, std::size_t trials,
                                          unsigned workers = 1) {
  base.validate();
  if (trials < 1) throw InvalidParameters("trials must be at least 1");
  UpperBoundReport rep;
  rep.alpha_ub = upper_bound_alpha(base.n, base.c, sigma);
  rep.operators = static_cast<std::size_t>(std::floor(rep.alpha_ub));
  rep.sigma = sigma;
  rep.trials = trials;

  ModelParams params = base;
  params.o = rep.operators;
  std::vector<TrialOutcome> outcomes(trials);
  detail::parallel_for(trials, workers, [&](std::size_t t) {
    ModelParams p = params;
    p.seed = derive_seed(base.seed, t);
    outcomes[t] = one_step_trial(p);
  });
  for (const TrialOutcome& o : outcomes) {
    rep.solvable += o.solvable ? 1 : 0;
    rep.postcondition_hits += o.target_in_post ? 1 : 0;
  }
  rep.fraction = static_cast<double>(rep.solvable) / static_cast<double>(trials);
  rep.half_width = wilson_ci(rep.solvable, trials, 0.99).high - rep.fraction;
  rep.pass = rep.fraction <= sigma + rep.half_width;
  return rep;
}

} // namespace cplab
