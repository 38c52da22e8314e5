#pragma once

// Propositional semantics for conformant planning: literals, complete states,
// belief states, unconditional STRIPS-style operators, instances and plans.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cplab/error.hpp"

namespace cplab {

using OperatorId = int;

struct Literal {
  std::size_t prop = 0;
  bool negated = false;

  static constexpr Literal pos(std::size_t p) { return {p, false}; }
  static constexpr Literal neg(std::size_t p) { return {p, true}; }

  constexpr Literal operator!() const { return {prop, !negated}; }

  friend constexpr bool operator==(const Literal&, const Literal&) = default;
  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

inline std::string to_string(const Literal& lit) {
  return (lit.negated ? "-p" : "p") + std::to_string(lit.prop);
}

// Complete truth assignment over n propositions.
class State {
public:
  State() = default;
  explicit State(std::size_t n, bool value = false) : values_(n, value) {}
  explicit State(std::vector<bool> values) : values_(std::move(values)) {}

  // "TFT" -> p0=T, p1=F, p2=T.
  static State from_string(std::string_view bits) {
    std::vector<bool> values;
    values.reserve(bits.size());
    for (char ch : bits) {
      if (ch == 'T' || ch == '1')
        values.push_back(true);
      else if (ch == 'F' || ch == '0')
        values.push_back(false);
      else
        throw StructuralError("state string may only contain T/F/1/0");
    }
    return State(std::move(values));
  }

  std::size_t size() const { return values_.size(); }
  bool operator[](std::size_t p) const { return values_[p]; }
  void set(std::size_t p, bool value) { values_[p] = value; }
  const std::vector<bool>& values() const { return values_; }

  std::string to_string() const {
    std::string out;
    out.reserve(values_.size());
    for (bool v : values_) out.push_back(v ? 'T' : 'F');
    return out;
  }

  friend bool operator==(const State&, const State&) = default;
  friend bool operator<(const State& a, const State& b) { return a.values_ < b.values_; }

private:
  std::vector<bool> values_;
};

inline bool literal_holds(const Literal& lit, const State& s) {
  if (lit.prop >= s.size())
    throw StructuralError("literal " + to_string(lit) + " out of range for state over " +
                          std::to_string(s.size()) + " propositions");
  return s[lit.prop] != lit.negated;
}

// Literal set with at most one literal per proposition, kept sorted by proposition.
inline std::vector<Literal> normalize_literals(std::vector<Literal> lits, std::string_view what) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].prop == lits[i - 1].prop)
      throw StructuralError(std::string(what) + " mentions p" + std::to_string(lits[i].prop) +
                            " with both signs");
  return lits;
}

inline bool contains(const std::vector<Literal>& sorted, const Literal& lit) {
  return std::binary_search(sorted.begin(), sorted.end(), lit);
}

class Operator {
public:
  Operator() = default;
  Operator(OperatorId id, std::vector<Literal> pre, std::vector<Literal> post)
      : id_(id), pre_(normalize_literals(std::move(pre), "precondition")),
        post_(normalize_literals(std::move(post), "postcondition")) {}

  OperatorId id() const { return id_; }
  const std::vector<Literal>& pre() const { return pre_; }
  const std::vector<Literal>& post() const { return post_; }

  friend bool operator==(const Operator&, const Operator&) = default;

private:
  OperatorId id_ = 0;
  std::vector<Literal> pre_;
  std::vector<Literal> post_;
};

inline bool is_applicable(const Operator& op, const State& s) {
  return std::all_of(op.pre().begin(), op.pre().end(),
                     [&](const Literal& lit) { return literal_holds(lit, s); });
}

inline State apply(const Operator& op, const State& s) {
  if (!is_applicable(op, s))
    throw ContractViolation("operator a" + std::to_string(op.id()) + " is not applicable in state " +
                            s.to_string());
  State out = s;
  for (const Literal& lit : op.post()) out.set(lit.prop, !lit.negated);
  return out;
}

// Nonempty set of equal-length states, stored sorted and deduplicated so that
// equal sets compare equal.
class BeliefState {
public:
  explicit BeliefState(std::vector<State> states) : states_(std::move(states)) {
    if (states_.empty()) throw StructuralError("belief state must be nonempty");
    const std::size_t n = states_.front().size();
    for (const State& s : states_)
      if (s.size() != n) throw StructuralError("belief state members differ in length");
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  }

  std::size_t n() const { return states_.front().size(); }
  std::size_t size() const { return states_.size(); }
  const std::vector<State>& states() const { return states_; }
  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

  // Literals true in every member state.
  std::vector<Literal> fixed_literals() const {
    std::vector<Literal> out;
    for (std::size_t p = 0; p < n(); ++p) {
      const bool v = states_.front()[p];
      const bool agreed = std::all_of(states_.begin(), states_.end(),
                                      [&](const State& s) { return s[p] == v; });
      if (agreed) out.push_back({p, !v});
    }
    return out;
  }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
  friend bool operator<(const BeliefState& a, const BeliefState& b) { return a.states_ < b.states_; }

private:
  std::vector<State> states_;
};

// Thrown by apply_belief; carries one state in which the operator is inapplicable.
class InapplicableInBelief : public ContractViolation {
public:
  InapplicableInBelief(OperatorId op, State witness)
      : ContractViolation("operator a" + std::to_string(op) + " is inapplicable in belief member " +
                          witness.to_string()),
        witness_(std::move(witness)) {}
  const State& witness() const { return witness_; }

private:
  State witness_;
};

inline bool is_applicable(const Operator& op, const BeliefState& b) {
  return std::all_of(b.begin(), b.end(), [&](const State& s) { return is_applicable(op, s); });
}

inline BeliefState apply_belief(const Operator& op, const BeliefState& b) {
  std::vector<State> image;
  image.reserve(b.size());
  for (const State& s : b) {
    if (!is_applicable(op, s)) throw InapplicableInBelief(op.id(), s);
    image.push_back(apply(op, s));
  }
  return BeliefState(std::move(image));
}

inline bool satisfies(const BeliefState& b, const std::vector<Literal>& goals) {
  return std::all_of(b.begin(), b.end(), [&](const State& s) {
    return std::all_of(goals.begin(), goals.end(),
                       [&](const Literal& g) { return literal_holds(g, s); });
  });
}

// Conformant planning instance. The goal is split into the literals already
// true in every initial state (protected) and the rest (target); the split is
// derived from the initial belief, so the partition invariants hold by
// construction.
class Instance {
public:
  Instance(std::size_t n, std::vector<Operator> operators, BeliefState initial,
           std::vector<Literal> goal)
      : n_(n), operators_(std::move(operators)), initial_(std::move(initial)),
        goal_(normalize_literals(std::move(goal), "goal")) {
    if (n_ == 0) throw StructuralError("instance needs at least one proposition");
    if (initial_.n() != n_)
      throw StructuralError("initial states have " + std::to_string(initial_.n()) +
                            " propositions, expected " + std::to_string(n_));
    for (std::size_t i = 0; i < operators_.size(); ++i) {
      const Operator& op = operators_[i];
      if (i > 0 && op.id() <= operators_[i - 1].id())
        throw StructuralError("operator ids must be strictly increasing");
      for (const auto* set : {&op.pre(), &op.post()})
        for (const Literal& lit : *set)
          if (lit.prop >= n_)
            throw StructuralError("operator a" + std::to_string(op.id()) + " mentions p" +
                                  std::to_string(lit.prop) + " out of range");
    }
    for (const Literal& g : goal_) {
      if (g.prop >= n_) throw StructuralError("goal literal " + to_string(g) + " out of range");
      if (satisfies(initial_, {g}))
        protected_.push_back(g);
      else
        target_.push_back(g);
    }
  }

  std::size_t n() const { return n_; }
  const std::vector<Operator>& operators() const { return operators_; }
  const BeliefState& initial() const { return initial_; }
  const std::vector<Literal>& goal() const { return goal_; }
  const std::vector<Literal>& protected_goals() const { return protected_; }
  const std::vector<Literal>& target_goals() const { return target_; }

  const Operator& op(OperatorId id) const {
    auto it = std::lower_bound(operators_.begin(), operators_.end(), id,
                               [](const Operator& o, OperatorId v) { return o.id() < v; });
    if (it == operators_.end() || it->id() != id)
      throw StructuralError("unknown operator id " + std::to_string(id));
    return *it;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

private:
  std::size_t n_;
  std::vector<Operator> operators_;
  BeliefState initial_;
  std::vector<Literal> goal_;
  std::vector<Literal> protected_;
  std::vector<Literal> target_;
};

struct Plan {
  std::vector<OperatorId> steps;
  friend bool operator==(const Plan&, const Plan&) = default;
};

enum class FailureKind { InapplicableInSomeBranch, GoalUnmet };

inline std::string to_string(FailureKind kind) {
  return kind == FailureKind::GoalUnmet ? "goal-unmet" : "inapplicable-in-some-initial-branch";
}

struct ValidationReport {
  bool valid = true;
  std::optional<std::size_t> failure_step;
  std::optional<FailureKind> failure_kind;
};

struct Execution {
  BeliefState belief;                       // belief before the failing step, or the final one
  std::optional<std::size_t> blocked_step;  // first step inapplicable in some branch
};

inline Execution execute(const Instance& inst, const Plan& plan) {
  BeliefState belief = inst.initial();
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const Operator& op = inst.op(plan.steps[i]);
    if (!is_applicable(op, belief)) return {std::move(belief), i};
    belief = apply_belief(op, belief);
  }
  return {std::move(belief), std::nullopt};
}

inline ValidationReport validate_plan(const Instance& inst, const Plan& plan) {
  for (OperatorId id : plan.steps) (void)inst.op(id);
  Execution run = execute(inst, plan);
  if (run.blocked_step) return {false, run.blocked_step, FailureKind::InapplicableInSomeBranch};
  if (!satisfies(run.belief, inst.goal())) return {false, plan.steps.size(), FailureKind::GoalUnmet};
  return {};
}

} // namespace cplab
