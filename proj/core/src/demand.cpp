#include "printopt/demand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "printopt/errors.hpp"

namespace printopt {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

DemandModel DemandModel::uniform(double upper) {
  if (!finite(upper) || !(upper > 0.0)) {
    throw ValidationError("demand.upper", "must be a positive finite number");
  }
  DemandModel m;
  m.upper_ = upper;
  m.igfr_ok_ = true;  // x/(U - x) is increasing
  return m;
}

DemandModel DemandModel::tabulated(std::vector<CdfKnot> knots) {
  if (knots.size() < 2) {
    throw ValidationError("demand.knots", "need at least two knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const std::string field = "demand.knots[" + std::to_string(i) + "]";
    if (!finite(knots[i].x) || !finite(knots[i].F)) {
      throw ValidationError(field, "knot values must be finite");
    }
    if (knots[i].F < 0.0 || knots[i].F > 1.0) {
      throw ValidationError(field, "F must lie in [0, 1]");
    }
    if (i > 0) {
      if (!(knots[i].x > knots[i - 1].x)) {
        throw ValidationError(field, "x must be strictly increasing");
      }
      if (knots[i].F < knots[i - 1].F) {
        throw ValidationError(field, "F must be non-decreasing");
      }
    }
  }
  if (knots.front().x != 0.0 || knots.front().F != 0.0) {
    throw ValidationError("demand.knots[0]", "first knot must be (0, 0)");
  }
  if (knots.back().F != 1.0) {
    throw ValidationError("demand.knots", "last knot must have F = 1");
  }
  DemandModel m;
  m.upper_ = knots.back().x;
  m.knots_ = std::move(knots);
  m.igfr_ok_ = m.check_igfr();
  return m;
}

double DemandModel::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= upper_) return 1.0;
  if (is_uniform()) return x / upper_;
  // First knot with knot.x > x bounds the segment containing x on the right.
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                   [](double v, const CdfKnot& k) { return v < k.x; });
  const CdfKnot& hi = *it;
  const CdfKnot& lo = *(it - 1);
  return lo.F + (hi.F - lo.F) * (x - lo.x) / (hi.x - lo.x);
}

double DemandModel::pdf(double x) const {
  if (x < 0.0 || x > upper_) {
    throw std::domain_error("pdf: x outside the demand support");
  }
  if (is_uniform()) return 1.0 / upper_;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const CdfKnot& k) { return v < k.x; });
  if (it == knots_.end()) --it;  // x == upper: use the last segment
  const CdfKnot& hi = *it;
  const CdfKnot& lo = *(it - 1);
  return (hi.F - lo.F) / (hi.x - lo.x);
}

double DemandModel::quantile(double p) const {
  if (p < 0.0 || p > 1.0) {
    throw std::domain_error("quantile: p outside [0, 1]");
  }
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return upper_;
  if (is_uniform()) return p * upper_;
  // First knot with F >= p; the previous segment rises through p.
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), p,
                                   [](const CdfKnot& k, double v) { return k.F < v; });
  if (it == knots_.begin()) return it->x;
  const CdfKnot& hi = *it;
  const CdfKnot& lo = *(it - 1);
  return lo.x + (hi.x - lo.x) * (p - lo.F) / (hi.F - lo.F);
}

double DemandModel::expected_min(double q) const {
  if (q < 0.0) {
    throw std::domain_error("expected_min: negative quantity");
  }
  if (q == 0.0) return 0.0;
  if (is_uniform()) {
    if (q >= upper_) return 0.5 * upper_;
    return q - q * q / (2.0 * upper_);
  }
  // F is piecewise linear, so 1 - F integrates exactly by trapezoids.
  const double cut = std::min(q, upper_);
  double acc = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double a = knots_[i - 1].x;
    if (a >= cut) break;
    const double b = std::min(knots_[i].x, cut);
    const double survival_a = 1.0 - knots_[i - 1].F;
    const double survival_b = 1.0 - cdf(b);
    acc += (b - a) * 0.5 * (survival_a + survival_b);
  }
  return acc;
}

double DemandModel::gfr(double x) const {
  if (x < 0.0 || x >= upper_) {
    throw std::domain_error("gfr: x outside [0, upper)");
  }
  if (x == 0.0) return 0.0;
  return x * pdf(x) / (1.0 - cdf(x));
}

bool DemandModel::check_igfr(int grid_points) const {
  const int n = std::max(grid_points, 3);
  double prev = gfr(0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = upper_ * static_cast<double>(i) / (n + 1);
    const double g = gfr(x);
    if (g - prev < -1e-12) return false;
    prev = g;
  }
  return true;
}

}  // namespace printopt
