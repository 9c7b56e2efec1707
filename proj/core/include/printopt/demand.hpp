#pragma once

#include <vector>

namespace printopt {

// One point of a tabulated CDF: F(x) = F.
struct CdfKnot {
  double x;
  double F;
};

// Continuous demand distribution on [0, upper]. Either Uniform[0, upper] or a
// piecewise-linear CDF through tabulated knots (piecewise-constant density).
// Immutable after construction; all member functions are pure.
class DemandModel {
 public:
  // Uniform[0, upper], upper > 0.
  static DemandModel uniform(double upper);

  // Knots must be strictly increasing in x, start at (0, 0), end with F = 1,
  // and have non-decreasing F. Throws ValidationError otherwise.
  static DemandModel tabulated(std::vector<CdfKnot> knots);

  bool is_uniform() const noexcept { return knots_.empty(); }
  double upper() const noexcept { return upper_; }
  const std::vector<CdfKnot>& knots() const noexcept { return knots_; }

  // P(D <= x). Defined on all of R: 0 below the support, 1 above it.
  double cdf(double x) const;

  // Density at x. Throws std::domain_error outside [0, upper].
  double pdf(double x) const;

  // Smallest x with cdf(x) >= p; quantile(0) = 0, quantile(1) = upper.
  // Throws std::domain_error for p outside [0, 1].
  double quantile(double p) const;

  // Expected sales E[min(q, D)] = integral of (1 - F) over [0, q].
  // Throws std::domain_error for q < 0.
  double expected_min(double q) const;

  // Generalized failure rate x*f(x)/(1 - F(x)); defined as 0 at x = 0.
  // Throws std::domain_error for x < 0 or x >= upper.
  double gfr(double x) const;

  // True iff the generalized failure rate is non-decreasing across a uniform
  // grid over the open support (successive differences >= -1e-12).
  bool check_igfr(int grid_points = 1024) const;

  double mean() const { return expected_min(upper_); }

  // Result of the 1024-point IGFR check, cached at construction.
  bool igfr_ok() const noexcept { return igfr_ok_; }

 private:
  DemandModel() = default;

  double upper_ = 1.0;
  std::vector<CdfKnot> knots_;  // empty for the uniform kind
  bool igfr_ok_ = true;
};

}  // namespace printopt
