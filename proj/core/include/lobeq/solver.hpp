#pragma once

#include <cmath>
#include <stdexcept>

namespace lobeq {

struct BisectionOptions {
  double rel_tol = 1e-12;
  int max_iter = 200;
  int max_expansions = 1100;
};

struct RootResult {
  double root = 0.0;
  double value = 0.0;  // fn(root)
  int iterations = 0;
  bool converged = false;
};

/// Root of a nonincreasing function `fn` with fn(lo) > 0.
///
/// The upper end starts at `hi` and is doubled until fn(hi) <= 0. Bisection
/// then runs until the bracket collapses to adjacent doubles or `max_iter`
/// halvings; `converged` reports whether the final bracket is within
/// `rel_tol` of the root.
template <class Fn>
RootResult bisect_decreasing(Fn&& fn, double lo, double hi, const BisectionOptions& opts = {}) {
  if (!(hi > lo)) {
    throw std::invalid_argument("bisect_decreasing: empty initial bracket");
  }
  double f_lo = fn(lo);
  if (!(f_lo > 0.0)) {
    throw std::domain_error("bisect_decreasing: function is not positive at the lower end");
  }
  double f_hi = fn(hi);
  int expansions = 0;
  while (f_hi > 0.0) {
    if (++expansions > opts.max_expansions || !std::isfinite(hi)) {
      throw std::runtime_error("bisect_decreasing: failed to bracket a sign change");
    }
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = fn(hi);
  }

  RootResult out;
  while (out.iterations < opts.max_iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    ++out.iterations;
    const double f_mid = fn(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  if (std::abs(f_lo) <= std::abs(f_hi)) {
    out.root = lo;
    out.value = f_lo;
  } else {
    out.root = hi;
    out.value = f_hi;
  }
  out.converged = (hi - lo) <= opts.rel_tol * std::abs(out.root);
  return out;
}

}  // namespace lobeq
