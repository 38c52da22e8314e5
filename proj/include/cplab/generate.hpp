#pragma once

// Random instance models. Every operator, the initial belief and the goal are
// drawn from their own label-derived RngStream, so any single component of an
// instance can be regenerated without drawing the others.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cplab/error.hpp"
#include "cplab/model.hpp"
#include "cplab/rng.hpp"

namespace cplab {

enum class ModelKind { Variable, Fixed };

inline std::string to_string(ModelKind kind) { return kind == ModelKind::Fixed ? "fixed" : "variable"; }

inline ModelKind parse_model_kind(const std::string& text) {
  if (text == "fixed") return ModelKind::Fixed;
  if (text == "variable") return ModelKind::Variable;
  throw InvalidParameters("model must be 'fixed' or 'variable', got '" + text + "'");
}

// Largest supported m; the initial belief holds 2^m states.
inline constexpr std::size_t kMaxUnknowns = 20;

struct ModelParams {
  ModelKind model = ModelKind::Fixed;
  std::size_t n = 10;  // propositions
  std::size_t o = 0;   // operators
  std::size_t r = 3;   // preconditions per operator (exact or expected)
  std::size_t c = 2;   // postconditions per operator (exact or expected)
  std::size_t m = 1;   // unknown propositions, k = 2^m initial states
  std::size_t g = 1;   // goal literals for raw instances
  std::uint64_t seed = 0;
  bool protect_achieved = true;

  std::size_t initial_state_count() const { return std::size_t{1} << m; }

  void validate() const {
    auto fail = [](const std::string& what) { throw InvalidParameters(what); };
    if (n < 1) fail("n must be at least 1");
    if (r > n) fail("r = " + std::to_string(r) + " exceeds n = " + std::to_string(n));
    if (c < 1 || c > n) fail("c must lie in [1, n], got " + std::to_string(c));
    if (m + 1 > n) fail("m must lie in [0, n-1], got " + std::to_string(m));
    if (m > kMaxUnknowns) fail("m above " + std::to_string(kMaxUnknowns) + " is not supported");
    if (g < 1 || g > n) fail("g must lie in [1, n], got " + std::to_string(g));
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

namespace detail {

// First `count` entries of a uniformly random permutation of 0..n-1.
inline std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t count, RngStream& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

inline std::vector<Literal> variable_conditions(std::size_t n, std::size_t expected, RngStream& rng) {
  const double half = static_cast<double>(expected) / (2.0 * static_cast<double>(n));
  const double both = 2.0 * half;
  std::vector<Literal> out;
  for (std::size_t p = 0; p < n; ++p) {
    const double u = rng.uniform();
    if (u < half)
      out.push_back(Literal::pos(p));
    else if (u < both)
      out.push_back(Literal::neg(p));
  }
  return out;
}

inline std::vector<Literal> fixed_conditions(std::size_t n, std::size_t count, RngStream& rng) {
  std::vector<Literal> out;
  out.reserve(count);
  for (std::size_t p : sample_distinct(n, count, rng)) out.push_back({p, rng.coin()});
  return out;
}

inline void check_operator_params(const ModelParams& params) {
  if (params.n < 1) throw InvalidParameters("n must be at least 1");
  if (params.r > params.n) throw InvalidParameters("r exceeds n");
  if (params.c > params.n) throw InvalidParameters("c exceeds n");
}

} // namespace detail

// Each proposition independently becomes a positive precondition with
// probability r/2n, a negative one with probability r/2n, or neither; the
// postcondition set is drawn the same way from c, independently.
inline Operator gen_operator_variable(const ModelParams& params, RngStream& rng, OperatorId id = 0) {
  detail::check_operator_params(params);
  auto pre = detail::variable_conditions(params.n, params.r, rng);
  auto post = detail::variable_conditions(params.n, params.c, rng);
  return Operator(id, std::move(pre), std::move(post));
}

// Exactly r preconditions and c postconditions on distinct propositions, each
// with a uniform sign; pre and post are drawn independently of each other.
inline Operator gen_operator_fixed(const ModelParams& params, RngStream& rng, OperatorId id = 0) {
  detail::check_operator_params(params);
  auto pre = detail::fixed_conditions(params.n, params.r, rng);
  auto post = detail::fixed_conditions(params.n, params.c, rng);
  return Operator(id, std::move(pre), std::move(post));
}

inline Operator gen_operator(const ModelParams& params, RngStream& rng, OperatorId id = 0) {
  return params.model == ModelKind::Fixed ? gen_operator_fixed(params, rng, id)
                                          : gen_operator_variable(params, rng, id);
}

// Stream of the i-th operator of the instance seeded by `seed`.
inline RngStream operator_stream(std::uint64_t seed, std::size_t index) {
  return RngStream(derive_seed(seed, stream::operators), index);
}

inline std::vector<Operator> gen_operators(const ModelParams& params) {
  std::vector<Operator> ops;
  ops.reserve(params.o);
  for (std::size_t i = 0; i < params.o; ++i) {
    RngStream rng = operator_stream(params.seed, i);
    ops.push_back(gen_operator(params, rng, static_cast<OperatorId>(i)));
  }
  return ops;
}

struct InitialBelief {
  BeliefState belief;
  std::vector<Literal> fixed;         // true in every member state
  std::vector<std::size_t> unknown;   // propositions left open, in draw order
};

// m distinct unknown propositions; every other proposition gets a uniform
// value; the belief holds all 2^m completions.
inline InitialBelief gen_initial_belief(const ModelParams& params, RngStream& rng) {
  if (params.n < 1) throw InvalidParameters("n must be at least 1");
  if (params.m >= params.n) throw InvalidParameters("m must be below n");
  if (params.m > kMaxUnknowns) throw InvalidParameters("m too large");

  std::vector<std::size_t> unknown = detail::sample_distinct(params.n, params.m, rng);
  std::vector<bool> is_unknown(params.n, false);
  for (std::size_t p : unknown) is_unknown[p] = true;

  State base(params.n);
  std::vector<Literal> fixed;
  for (std::size_t p = 0; p < params.n; ++p) {
    if (is_unknown[p]) continue;
    const bool v = rng.coin();
    base.set(p, v);
    fixed.push_back({p, !v});
  }

  std::vector<State> states;
  states.reserve(params.initial_state_count());
  for (std::size_t mask = 0; mask < params.initial_state_count(); ++mask) {
    State s = base;
    for (std::size_t b = 0; b < unknown.size(); ++b) s.set(unknown[b], ((mask >> b) & 1U) != 0);
    states.push_back(std::move(s));
  }
  return {BeliefState(std::move(states)), std::move(fixed), std::move(unknown)};
}

// The drawn unachieved goal literal of a modification instance: a uniform
// sign over a uniformly chosen unknown proposition.
inline Literal gen_target(const ModelParams& params, const InitialBelief& init) {
  RngStream rng(params.seed, stream::goal);
  const std::size_t p = init.unknown[static_cast<std::size_t>(rng.below(init.unknown.size()))];
  return {p, rng.coin()};
}

// One unachieved target literal plus, when protect_achieved, every fixed
// literal of the initial belief as an achieved goal. With m = 1 this is the
// "n goals, n-1 already achieved" form of one-step plan repair.
inline Instance gen_modification_instance(const ModelParams& params) {
  params.validate();
  if (params.m == 0)
    throw InvalidParameters("m = 0 leaves no proposition that can carry an unachieved goal");
  RngStream init_rng(params.seed, stream::initial);
  InitialBelief init = gen_initial_belief(params, init_rng);
  const Literal target = gen_target(params, init);

  std::vector<Literal> goal;
  if (params.protect_achieved) goal = init.fixed;
  goal.push_back(target);
  return Instance(params.n, gen_operators(params), std::move(init.belief), std::move(goal));
}

// General instance with g goal literals on distinct propositions.
inline Instance gen_raw_instance(const ModelParams& params) {
  params.validate();
  RngStream init_rng(params.seed, stream::initial);
  InitialBelief init = gen_initial_belief(params, init_rng);
  RngStream goal_rng(params.seed, stream::goal);
  std::vector<Literal> goal = detail::fixed_conditions(params.n, params.g, goal_rng);
  return Instance(params.n, gen_operators(params), std::move(init.belief), std::move(goal));
}

} // namespace cplab
