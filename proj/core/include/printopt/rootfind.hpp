#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "printopt/errors.hpp"

namespace printopt {

// Bisection on [lo, hi] for a function with f(lo) and f(hi) of opposite sign
// (zero endpoints count as roots). Returns the bracket midpoint once the
// bracket width is below tol_x.
template <class F>
double bisect(F&& f, double lo, double hi, double tol_x) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("bisect: no sign change on the given interval");
  }
  while (hi - lo > tol_x) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted in double precision
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scans [lo, hi] at `points` equally spaced samples and returns every
// subinterval across which f changes sign.
template <class F>
std::vector<std::pair<double, double>> sign_change_brackets(F&& f, double lo, double hi,
                                                            int points) {
  std::vector<std::pair<double, double>> brackets;
  if (points < 2 || !(hi > lo)) return brackets;
  double x_prev = lo;
  double f_prev = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double fx = f(x);
    if (f_prev == 0.0 || (f_prev > 0.0) != (fx > 0.0)) {
      brackets.emplace_back(x_prev, x);
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) brackets.emplace_back(x_prev, hi);
  return brackets;
}

// Derivative-free maximizer for objectives that are unimodal near the optimum:
// repeatedly subdivides the bracket around the incumbent best sample. Used as
// the fallback when a first-order condition is not trustworthy.
template <class F>
double refine_grid_max(F&& f, double lo, double hi, int coarse_points, double tol_x) {
  if (!(hi > lo)) return lo;
  while (true) {
    const int n = coarse_points;
    int best = 0;
    double fbest = f(lo);
    for (int i = 1; i < n; ++i) {
      const double x = lo + (hi - lo) * i / (n - 1);
      const double fx = f(x);
      if (fx > fbest) {
        fbest = fx;
        best = i;
      }
    }
    const double step = (hi - lo) / (n - 1);
    const double new_lo = lo + step * (best > 0 ? best - 1 : 0);
    const double new_hi = lo + step * (best < n - 1 ? best + 1 : n - 1);
    if (new_hi - new_lo < tol_x || new_hi - new_lo >= hi - lo) {
      return lo + step * best;
    }
    lo = new_lo;
    hi = new_hi;
  }
}

}  // namespace printopt
