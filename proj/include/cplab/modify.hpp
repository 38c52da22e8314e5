#pragma once

// Plan repair when the problem changes: classify the difference between two
// instances, break multi-proposition differences into a chain of
// single-proposition deltas, and repair a plan by reuse, a one-operator
// extension, or replanning.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cplab/error.hpp"
#include "cplab/model.hpp"
#include "cplab/oracle.hpp"

namespace cplab {

enum class DeltaKind { GoalAdded, GoalRemoved, InitPropFixed, InitPropUnfixed };

inline std::string to_string(DeltaKind kind) {
  switch (kind) {
  case DeltaKind::GoalAdded: return "goal-added";
  case DeltaKind::GoalRemoved: return "goal-removed";
  case DeltaKind::InitPropFixed: return "init-prop-fixed";
  case DeltaKind::InitPropUnfixed: return "init-prop-unfixed";
  }
  return "?";
}

struct Delta {
  DeltaKind kind;
  Literal literal;
  friend bool operator==(const Delta&, const Delta&) = default;
};

inline std::string to_string(const Delta& d) { return to_string(d.kind) + " " + to_string(d.literal); }

class NoDelta : public Error {
public:
  NoDelta() : Error("the two instances do not differ") {}
};

class MultiDelta : public Error {
public:
  explicit MultiDelta(std::size_t count)
      : Error("the two instances differ in " + std::to_string(count) + " single-proposition deltas"),
        count_(count) {}
  std::size_t count() const { return count_; }

private:
  std::size_t count_;
};

namespace detail {

inline void check_comparable(const Instance& a, const Instance& b) {
  if (a.n() != b.n()) throw StructuralError("instances have different proposition counts");
  if (a.operators() != b.operators()) throw StructuralError("instances have different operators");
}

inline std::optional<Literal> literal_on(const std::vector<Literal>& sorted, std::size_t p) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), Literal::pos(p));
  if (it != sorted.end() && it->prop == p) return *it;
  return std::nullopt;
}

// Deltas in chain order: goal removals, init unfixes, init fixes, goal additions.
// A sign flip on one proposition contributes a removal and an addition.
inline std::vector<Delta> collect_deltas(const Instance& old_inst, const Instance& new_inst) {
  check_comparable(old_inst, new_inst);
  const auto old_fixed = old_inst.initial().fixed_literals();
  const auto new_fixed = new_inst.initial().fixed_literals();
  std::vector<Delta> removed, unfixed, fixed, added;
  for (std::size_t p = 0; p < old_inst.n(); ++p) {
    const auto og = literal_on(old_inst.goal(), p);
    const auto ng = literal_on(new_inst.goal(), p);
    if (og != ng) {
      if (og) removed.push_back({DeltaKind::GoalRemoved, *og});
      if (ng) added.push_back({DeltaKind::GoalAdded, *ng});
    }
    const auto of = literal_on(old_fixed, p);
    const auto nf = literal_on(new_fixed, p);
    if (of != nf) {
      if (of) unfixed.push_back({DeltaKind::InitPropUnfixed, *of});
      if (nf) fixed.push_back({DeltaKind::InitPropFixed, *nf});
    }
  }
  std::vector<Delta> out;
  for (auto* part : {&removed, &unfixed, &fixed, &added}) out.insert(out.end(), part->begin(), part->end());
  return out;
}

} // namespace detail

// Single-proposition difference between two instances over the same
// propositions and operators. Initial beliefs are compared through their
// fixed-literal sets only.
inline Delta classify_delta(const Instance& old_inst, const Instance& new_inst) {
  const auto deltas = detail::collect_deltas(old_inst, new_inst);
  if (deltas.empty()) throw NoDelta();
  if (deltas.size() > 1) throw MultiDelta(deltas.size());
  return deltas.front();
}

// Instance obtained by applying one delta. Fixing a literal forces its value
// in every initial state; unfixing adds the mirrored copy of every state.
inline Instance apply_delta(const Instance& inst, const Delta& delta) {
  std::vector<Literal> goal = inst.goal();
  std::vector<State> states = inst.initial().states();
  const Literal lit = delta.literal;
  switch (delta.kind) {
  case DeltaKind::GoalAdded:
    if (detail::literal_on(goal, lit.prop)) throw StructuralError("goal already mentions p" + std::to_string(lit.prop));
    goal.push_back(lit);
    break;
  case DeltaKind::GoalRemoved: {
    auto it = std::find(goal.begin(), goal.end(), lit);
    if (it == goal.end()) throw StructuralError("goal does not contain " + to_string(lit));
    goal.erase(it);
    break;
  }
  case DeltaKind::InitPropFixed:
    for (State& s : states) s.set(lit.prop, !lit.negated);
    break;
  case DeltaKind::InitPropUnfixed: {
    const std::size_t count = states.size();
    for (std::size_t i = 0; i < count; ++i) {
      State s = states[i];
      s.set(lit.prop, !s[lit.prop]);
      states.push_back(std::move(s));
    }
    break;
  }
  }
  return Instance(inst.n(), inst.operators(), BeliefState(std::move(states)), std::move(goal));
}

// Chain of single-proposition deltas that turns old_inst into new_inst.
// Throws StructuralError when the instances cannot be connected this way
// (different n or operators, or initial beliefs that differ beyond their
// fixed literals).
inline std::vector<Delta> decompose(const Instance& old_inst, const Instance& new_inst) {
  auto deltas = detail::collect_deltas(old_inst, new_inst);
  Instance current = old_inst;
  for (const Delta& d : deltas) current = apply_delta(current, d);
  if (!(current == new_inst))
    throw StructuralError("initial beliefs differ beyond their fixed literals; no delta chain exists");
  return deltas;
}

// Lowest-id operator that, applied once, is applicable in every initial state
// and leaves the whole goal (target and protected literals) true in every
// resulting state.
inline std::optional<OperatorId> one_step_solvable(const Instance& inst) {
  const auto& initial = inst.initial();
  for (const Operator& op : inst.operators()) {
    // An unachieved literal survives unless the operator asserts it.
    bool asserts_targets = true;
    for (const Literal& t : inst.target_goals())
      if (!contains(op.post(), t)) {
        asserts_targets = false;
        break;
      }
    if (!asserts_targets || !is_applicable(op, initial)) continue;
    if (satisfies(apply_belief(op, initial), inst.goal())) return op.id();
  }
  return std::nullopt;
}

struct ModificationProblem {
  Instance old_instance;
  Plan old_plan;
  Instance new_instance;
};

enum class OutcomeKind { Reused, ExtendedOneStep, Replanned, Failed };

inline std::string to_string(OutcomeKind kind) {
  switch (kind) {
  case OutcomeKind::Reused: return "Reused";
  case OutcomeKind::ExtendedOneStep: return "ExtendedOneStep";
  case OutcomeKind::Replanned: return "Replanned";
  case OutcomeKind::Failed: return "Failed";
  }
  return "?";
}

struct ModificationOutcome {
  OutcomeKind kind = OutcomeKind::Failed;
  std::optional<Plan> plan;
  std::optional<OperatorId> appended_op;
};

// Residual problem after running `prefix` on inst: start from the resulting
// belief, keep inst's goal. Protected literals are whatever holds there.
inline std::optional<Instance> residual_instance(const Instance& inst, const Plan& prefix) {
  Execution run = execute(inst, prefix);
  if (run.blocked_step) return std::nullopt;
  return Instance(inst.n(), inst.operators(), std::move(run.belief), inst.goal());
}

// Repairs old_plan for new_instance, preferring in order: reuse unchanged,
// append one operator, replan from scratch with the breadth-first oracle.
inline ModificationOutcome modify_plan(const ModificationProblem& prob,
                                       const oracle::SearchBudget& budget = {}) {
  detail::check_comparable(prob.old_instance, prob.new_instance);
  if (!validate_plan(prob.old_instance, prob.old_plan).valid)
    throw ContractViolation("old plan does not solve the old instance");

  if (validate_plan(prob.new_instance, prob.old_plan).valid)
    return {OutcomeKind::Reused, prob.old_plan, std::nullopt};

  if (auto residual = residual_instance(prob.new_instance, prob.old_plan)) {
    if (auto op = one_step_solvable(*residual)) {
      Plan extended = prob.old_plan;
      extended.steps.push_back(*op);
      return {OutcomeKind::ExtendedOneStep, std::move(extended), op};
    }
  }

  auto result = oracle::plan_bfs(prob.new_instance, budget);
  if (auto* found = std::get_if<oracle::FoundPlan>(&result))
    return {OutcomeKind::Replanned, std::move(found->plan), std::nullopt};
  return {};
}

struct ChainStep {
  Delta delta;
  ModificationOutcome outcome;
};

// Repairs the plan one delta at a time along decompose(old, new). The last
// step's outcome is the overall result; a Failed step ends the chain.
inline std::vector<ChainStep> modify_along_chain(const Instance& old_inst, const Plan& old_plan,
                                                 const Instance& new_inst,
                                                 const oracle::SearchBudget& budget = {}) {
  std::vector<ChainStep> steps;
  Instance current = old_inst;
  Plan plan = old_plan;
  for (const Delta& d : decompose(old_inst, new_inst)) {
    Instance next = apply_delta(current, d);
    ModificationOutcome outcome = modify_plan({current, plan, next}, budget);
    steps.push_back({d, outcome});
    if (outcome.kind == OutcomeKind::Failed) break;
    plan = *outcome.plan;
    current = std::move(next);
  }
  return steps;
}

// Overall outcome of a chained repair relative to the original plan:
// Reused if every step reused it, ExtendedOneStep if the final plan is the
// original plus one operator, Replanned otherwise, Failed if any step failed.
inline ModificationOutcome summarize_chain(const Plan& old_plan, const std::vector<ChainStep>& steps) {
  if (steps.empty()) return {OutcomeKind::Reused, old_plan, std::nullopt};
  const ModificationOutcome& last = steps.back().outcome;
  if (last.kind == OutcomeKind::Failed) return {};
  const Plan& plan = *last.plan;
  if (plan == old_plan) return {OutcomeKind::Reused, plan, std::nullopt};
  if (plan.steps.size() == old_plan.steps.size() + 1 &&
      std::equal(old_plan.steps.begin(), old_plan.steps.end(), plan.steps.begin()))
    return {OutcomeKind::ExtendedOneStep, plan, plan.steps.back()};
  return {OutcomeKind::Replanned, plan, std::nullopt};
}

} // namespace cplab
