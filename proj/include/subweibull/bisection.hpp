#pragma once

#include <cmath>

#include "subweibull/error.hpp"

namespace subweibull {

struct Bracket {
  double lo;
  double hi;
};

/// Shrinks [lo, hi] around the threshold of a monotone predicate.
///
/// `feasible` must be false at lo and true at hi, and monotone in between.
/// Stops when hi - lo <= rel_tol * hi or after max_iter halvings. The returned
/// hi is always feasible and lo always infeasible.
template <class Predicate>
Bracket bisect_threshold(Predicate&& feasible, double lo, double hi, double rel_tol,
                         int max_iter = 200) {
  for (int i = 0; i < max_iter && hi - lo > rel_tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  return {lo, hi};
}

// Doubles hi from `start` until feasible; lo trails as the last infeasible
// point. Throws InfeasibleError past `max_hi`.
template <class Predicate>
Bracket expand_upward(Predicate&& feasible, double lo, double start, double max_hi) {
  double hi = start;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > max_hi) throw InfeasibleError("no feasible upper bracket below " + std::to_string(max_hi));
  }
  return {lo, hi};
}

}  // namespace subweibull
