#pragma once

// Brute-force reference engines. Nothing here is meant to be fast; each
// routine follows its definition directly so it can check the real
// implementations.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cplab/error.hpp"
#include "cplab/model.hpp"

namespace cplab::oracle {

struct SearchBudget {
  std::size_t max_depth = 8;
  std::size_t max_beliefs = 1'000'000;
};

struct FoundPlan {
  Plan plan;
};
struct NoPlanWithinDepth {
  std::size_t depth;
};
struct BudgetExhausted {
  std::size_t visited;
};

using SearchResult = std::variant<FoundPlan, NoPlanWithinDepth, BudgetExhausted>;

// Breadth-first search over belief states, expanding operators in ascending
// id and only where they apply in every member state. Returns a shortest plan.
// NoPlanWithinDepth certifies that no plan of length <= max_depth exists;
// BudgetExhausted certifies nothing.
inline SearchResult plan_bfs(const Instance& inst, const SearchBudget& budget) {
  if (budget.max_beliefs == 0) throw InvalidParameters("max_beliefs must be at least 1");

  struct Node {
    BeliefState belief;
    std::size_t parent;
    OperatorId via;
  };
  std::vector<Node> nodes;
  std::set<BeliefState> visited;

  nodes.push_back({inst.initial(), 0, 0});
  visited.insert(inst.initial());

  auto extract = [&](std::size_t idx) {
    std::vector<OperatorId> rev;
    while (idx != 0) {
      rev.push_back(nodes[idx].via);
      idx = nodes[idx].parent;
    }
    return Plan{{rev.rbegin(), rev.rend()}};
  };

  if (satisfies(inst.initial(), inst.goal())) return FoundPlan{Plan{}};

  std::size_t layer_begin = 0;
  std::size_t layer_end = 1;
  for (std::size_t depth = 1; depth <= budget.max_depth; ++depth) {
    if (layer_begin == layer_end) break;
    for (std::size_t idx = layer_begin; idx < layer_end; ++idx) {
      for (const Operator& op : inst.operators()) {
        if (!is_applicable(op, nodes[idx].belief)) continue;
        BeliefState next = apply_belief(op, nodes[idx].belief);
        if (visited.contains(next)) continue;
        if (visited.size() >= budget.max_beliefs) return BudgetExhausted{visited.size()};
        visited.insert(next);
        const bool goal = satisfies(next, inst.goal());
        nodes.push_back({std::move(next), idx, op.id()});
        if (goal) return FoundPlan{extract(nodes.size() - 1)};
      }
    }
    layer_begin = layer_end;
    layer_end = nodes.size();
  }
  return NoPlanWithinDepth{budget.max_depth};
}

inline constexpr std::size_t kMaxEnumerationN = 8;

// Exact probability, by enumerating every choice of j distinct propositions
// out of n and every sign assignment, that the drawn conditions never
// contradict `targets` (a set of literals on distinct propositions).
inline double enumerate_consistency_prob(std::size_t j, std::size_t n, const std::vector<Literal>& targets) {
  if (n > kMaxEnumerationN)
    throw InvalidParameters("enumeration limited to n <= " + std::to_string(kMaxEnumerationN));
  if (j > n) throw InvalidParameters("j must not exceed n");
  std::vector<int> required(n, -1);  // -1 free, 0 must be false, 1 must be true
  for (const Literal& t : targets) {
    if (t.prop >= n) throw InvalidParameters("target literal out of range");
    required[t.prop] = t.negated ? 0 : 1;
  }

  std::uint64_t consistent = 0;
  std::uint64_t total = 0;
  for (std::uint32_t subset = 0; subset < (1U << n); ++subset) {
    if (static_cast<std::size_t>(__builtin_popcount(subset)) != j) continue;
    std::vector<std::size_t> chosen;
    for (std::size_t p = 0; p < n; ++p)
      if ((subset >> p) & 1U) chosen.push_back(p);
    for (std::uint32_t signs = 0; signs < (1U << j); ++signs) {
      ++total;
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) {
        const int value = static_cast<int>((signs >> i) & 1U);
        const int req = required[chosen[i]];
        ok = req < 0 || req == value;
      }
      consistent += ok ? 1 : 0;
    }
  }
  return static_cast<double>(consistent) / static_cast<double>(total);
}

// Canonical target: w positive literals on propositions 0..w-1.
inline double enumerate_consistency_prob(std::size_t j, std::size_t n, std::size_t w) {
  if (w > n) throw InvalidParameters("w must not exceed n");
  std::vector<Literal> targets;
  for (std::size_t p = 0; p < w; ++p) targets.push_back(Literal::pos(p));
  return enumerate_consistency_prob(j, n, targets);
}

// Every operator that alone forms a valid conformant plan, found through
// plan validation only.
inline std::vector<OperatorId> exhaustive_one_step(const Instance& inst) {
  std::vector<OperatorId> out;
  for (const Operator& op : inst.operators())
    if (validate_plan(inst, Plan{{op.id()}}).valid) out.push_back(op.id());
  return out;
}

} // namespace cplab::oracle
