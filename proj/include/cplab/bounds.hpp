#pragma once

// Analytic solvability machinery for one-step plan repair on random
// instances: the consistency recurrence f(j, n, w), the operator-count
// thresholds and the per-operator success probabilities they are built from.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cplab/error.hpp"

namespace cplab {

struct BoundParams {
  std::size_t n = 10;
  std::size_t r = 3;
  std::size_t c = 2;
  std::size_t k = 2;
  double sigma = 0.25;

  void validate() const {
    if (n < 1) throw InvalidParameters("n must be at least 1");
    if (c < 1 || c > n) throw InvalidParameters("c must lie in [1, n]");
    if (r > n) throw InvalidParameters("r must lie in [0, n]");
    if (k < 1) throw InvalidParameters("k must be at least 1");
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidParameters("sigma must lie in (0, 1)");
  }
};

// Probability that j conditions, drawn on distinct propositions out of n with
// uniform signs, are consistent with a fixed set of w conditions.
//
// f(j, n, w) = (n-w)/n * f(j-1, n-1, w) + w/2n * f(j-1, n-1, w-1), with
// f(0, ., .) = 1 and f(., ., 0) = 1. Every other boundary value, including
// f(j, n, n) = 2^-j and f(n, n, w) = 2^-w, falls out of the recurrence.
//
// Every step reduces j and n together, so only cells with n - j fixed are
// reachable; the table is indexed by (steps, w). Each cell is evaluated as
// ((n-w) f1 + (w/2) f2) / n, which keeps the dyadic boundary values exact.
inline double consistency_prob(std::size_t j, std::size_t n, std::size_t w) {
  if (j > n || w > n)
    throw InvalidParameters("consistency_prob needs 0 <= j, w <= n; got j=" + std::to_string(j) +
                            " n=" + std::to_string(n) + " w=" + std::to_string(w));
  const std::size_t offset = n - j;
  std::vector<double> prev(w + 1, 1.0);  // steps = 0: f(0, offset, .) = 1
  std::vector<double> cur(w + 1, 1.0);
  for (std::size_t step = 1; step <= j; ++step) {
    const std::size_t nn = offset + step;
    cur[0] = 1.0;
    for (std::size_t ww = 1; ww <= w && ww <= nn; ++ww) {
      double numer = 0.0;
      if (nn > ww) numer += static_cast<double>(nn - ww) * prev[ww];
      numer += 0.5 * static_cast<double>(ww) * prev[ww - 1];
      cur[ww] = numer / static_cast<double>(nn);
    }
    std::swap(prev, cur);
  }
  return prev[w];
}

// Largest operator count for which an instance is still, with probability at
// least 1 - sigma, not solvable in one step: ln(1-sigma) / ln(1 - c/2n).
inline double upper_bound_alpha(std::size_t n, std::size_t c, double sigma) {
  if (n < 1) throw InvalidParameters("n must be at least 1");
  if (c < 1 || c >= 2 * n) throw InvalidParameters("c must lie in [1, 2n)");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidParameters("sigma must lie in (0, 1)");
  const double atom = static_cast<double>(c) / (2.0 * static_cast<double>(n));
  return std::log1p(-sigma) / std::log1p(-atom);
}

// Operator count above which an instance is one-step solvable with
// probability at least 1 - sigma: e^(rk) e^c (2n/c) ln(1/sigma).
inline double lower_bound_alpha(std::size_t n, std::size_t r, std::size_t c, std::size_t k, double sigma) {
  BoundParams{n, r, c, k, sigma}.validate();
  const double nd = static_cast<double>(n);
  const double cd = static_cast<double>(c);
  return std::exp(static_cast<double>(r * k) + cd) * (2.0 * nd / cd) * -std::log(sigma);
}

namespace detail {
inline void check_success_params(std::size_t n, std::size_t r, std::size_t c, std::size_t k) {
  if (n < 1) throw InvalidParameters("n must be at least 1");
  if (r > n) throw InvalidParameters("r must lie in [0, n]");
  if (c < 1 || c > n) throw InvalidParameters("c must lie in [1, n]");
  if (k < 1) throw InvalidParameters("k must be at least 1");
}
} // namespace detail

// Variable model: (1 - r/2n)^(nk) (1 - c/2n)^(n-1) (c/2n). Treats the k
// initial states as independent complete states.
inline double one_op_success_prob_variable(std::size_t n, std::size_t r, std::size_t c, std::size_t k) {
  detail::check_success_params(n, r, c, k);
  const double nd = static_cast<double>(n);
  const double pre_ok = 1.0 - static_cast<double>(r) / (2.0 * nd);
  const double atom = static_cast<double>(c) / (2.0 * nd);
  return std::pow(pre_ok, nd * static_cast<double>(k)) * std::pow(1.0 - atom, nd - 1.0) * atom;
}

// Fixed model: 2^(-rk) f(c-1, n-1, n-1) (c/2n).
inline double one_op_success_prob_fixed(std::size_t n, std::size_t r, std::size_t c, std::size_t k) {
  detail::check_success_params(n, r, c, k);
  const double atom = static_cast<double>(c) / (2.0 * static_cast<double>(n));
  return std::exp2(-static_cast<double>(r * k)) * consistency_prob(c - 1, n - 1, n - 1) * atom;
}

// Probability that a given literal is a postcondition of at least one of o
// operators: 1 - (1 - c/2n)^o. Exact under both models.
inline double goal_in_some_postcond_prob(std::size_t n, std::size_t c, std::size_t o) {
  if (n < 1) throw InvalidParameters("n must be at least 1");
  if (c > 2 * n) throw InvalidParameters("c must not exceed 2n");
  const double atom = static_cast<double>(c) / (2.0 * static_cast<double>(n));
  return 1.0 - std::pow(1.0 - atom, static_cast<double>(o));
}

} // namespace cplab
