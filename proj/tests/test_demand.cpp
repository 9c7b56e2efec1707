#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "printopt/demand.hpp"
#include "printopt/errors.hpp"

using printopt::CdfKnot;
using printopt::DemandModel;

namespace {

// Quadrature oracle for E[min(q, D)]: trapezoid rule on 1 - F. Both demand
// kinds have piecewise-linear CDFs, so a fine trapezoid sum is exact up to
// knot straddling.
double expected_min_quadrature(const DemandModel& d, double q, int intervals = 200000) {
  const double hi = std::min(q, d.upper());
  if (hi <= 0.0) return 0.0;
  double acc = 0.0;
  double prev = 1.0 - d.cdf(0.0);
  for (int i = 1; i <= intervals; ++i) {
    const double x = hi * i / intervals;
    const double cur = 1.0 - d.cdf(x);
    acc += 0.5 * (prev + cur) * (hi / intervals);
    prev = cur;
  }
  return acc;
}

DemandModel dipping_gfr_model() {
  // Density 0.8 then 0.1: the failure rate collapses after the first knot.
  return DemandModel::tabulated({{0, 0}, {1, 0.8}, {2, 0.9}, {3, 1}});
}

}  // namespace

TEST_CASE("uniform cdf hits the support endpoints") {
  const DemandModel d = DemandModel::uniform(100);
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(-5.0) == 0.0);
  CHECK(d.cdf(100.0) == 1.0);
  CHECK(d.cdf(250.0) == 1.0);
  CHECK(d.cdf(35.0) == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("uniform pdf is constant and refuses out-of-support points") {
  CHECK(DemandModel::uniform(100).pdf(35.0) == doctest::Approx(0.01));
  CHECK(DemandModel::uniform(50).pdf(10.0) == doctest::Approx(0.02));
  CHECK_THROWS_AS((void)DemandModel::uniform(100).pdf(100.5), std::domain_error);
  CHECK_THROWS_AS((void)DemandModel::uniform(100).pdf(-0.5), std::domain_error);
}

TEST_CASE("tabulated pdf is the segment slope") {
  const DemandModel d = DemandModel::tabulated({{0, 0}, {50, 0.25}, {100, 1}});
  CHECK(d.pdf(75.0) == doctest::Approx(0.015).epsilon(1e-12));
  CHECK(d.pdf(10.0) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(d.cdf(75.0) == doctest::Approx(0.25 + 0.015 * 25).epsilon(1e-12));
}

TEST_CASE("quantile inverts the cdf") {
  const DemandModel d = DemandModel::uniform(100);
  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(1.0) == 100.0);
  CHECK(d.quantile(0.35) == doctest::Approx(35.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)d.quantile(-0.01), std::domain_error);
  CHECK_THROWS_AS((void)d.quantile(1.01), std::domain_error);
}

TEST_CASE("quantile/cdf round-trip within 1e-9") {
  std::mt19937_64 rng(41);
  const DemandModel models[] = {
      DemandModel::uniform(100),
      DemandModel::tabulated({{0, 0}, {20, 0.1}, {50, 0.45}, {80, 0.8}, {100, 1}}),
  };
  for (const DemandModel& d : models) {
    for (int i = 0; i < 100; ++i) {
      const double p = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 0.998 + 0.001;
      CHECK(std::abs(d.cdf(d.quantile(p)) - p) <= 1e-9);
      const double x = d.quantile(p);
      CHECK(std::abs(d.quantile(d.cdf(x)) - x) <= 1e-9);
    }
  }
}

TEST_CASE("expected_min matches the closed form and the quadrature oracle") {
  const DemandModel d = DemandModel::uniform(100);
  CHECK(d.expected_min(0.0) == 0.0);
  CHECK(d.expected_min(100.0) == doctest::Approx(50.0));
  CHECK(d.expected_min(35.0) == doctest::Approx(28.875).epsilon(1e-12));
  CHECK(d.expected_min(35.0) ==
        doctest::Approx(expected_min_quadrature(d, 35.0)).epsilon(1e-10));
  CHECK(d.expected_min(250.0) == doctest::Approx(50.0));  // saturates at the mean
  CHECK_THROWS_AS((void)d.expected_min(-1.0), std::domain_error);

  const DemandModel t = DemandModel::tabulated({{0, 0}, {50, 0.25}, {100, 1}});
  for (double q : {10.0, 50.0, 62.5, 100.0}) {
    CHECK(t.expected_min(q) == doctest::Approx(expected_min_quadrature(t, q)).epsilon(1e-9));
  }
}

TEST_CASE("expected_min is non-decreasing and concave in q") {
  const DemandModel models[] = {
      DemandModel::uniform(100),
      DemandModel::tabulated({{0, 0}, {30, 0.2}, {70, 0.75}, {100, 1}}),
  };
  for (const DemandModel& d : models) {
    const int n = 200;
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = d.expected_min(d.upper() * i / n);
    for (int i = 1; i <= n; ++i) CHECK(v[i] - v[i - 1] >= -1e-12);
    for (int i = 1; i < n; ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] <= 1e-9);
  }
}

TEST_CASE("expected_min agrees with Monte Carlo within 3 standard errors") {
  const DemandModel d = DemandModel::uniform(100);
  const double q = 35.0;
  std::mt19937_64 rng(7);
  const int n = 1'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double v = std::min(q, d.quantile(u));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq - n * mean * mean) / (n - 1.0) / n);
  CHECK(std::abs(d.expected_min(q) - mean) <= 3.0 * se);
}

TEST_CASE("d/dq expected_min equals the survival function") {
  const DemandModel models[] = {
      DemandModel::uniform(100),
      DemandModel::tabulated({{0, 0}, {30, 0.2}, {70, 0.75}, {100, 1}}),
  };
  const double h = 1e-4;
  for (const DemandModel& d : models) {
    for (double q : {5.0, 20.0, 41.7, 66.3, 90.0}) {
      const double fd = (d.expected_min(q + h) - d.expected_min(q - h)) / (2 * h);
      const double survival = 1.0 - d.cdf(q);
      CHECK(std::abs(fd - survival) / survival <= 1e-6);
    }
  }
}

TEST_CASE("generalized failure rate for uniform demand") {
  const DemandModel d = DemandModel::uniform(100);
  CHECK(d.gfr(0.0) == 0.0);
  CHECK(d.gfr(50.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.gfr(80.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)d.gfr(100.0), std::domain_error);
  CHECK_THROWS_AS((void)d.gfr(-1.0), std::domain_error);
}

TEST_CASE("check_igfr accepts uniform and rejects a dipping failure rate") {
  CHECK(DemandModel::uniform(100).check_igfr(1000));
  CHECK(DemandModel::uniform(1).check_igfr(3));
  const DemandModel dip = dipping_gfr_model();
  CHECK_FALSE(dip.check_igfr(1024));
  CHECK_FALSE(dip.igfr_ok());
  // Spot the dip by hand: just before/after the density drop at x = 1.
  CHECK(dip.gfr(0.999) > dip.gfr(1.001));
}

TEST_CASE("tabulated validation rejects malformed knot lists") {
  using printopt::ValidationError;
  CHECK_THROWS_AS(DemandModel::tabulated({{0, 0}}), ValidationError);
  CHECK_THROWS_AS(DemandModel::tabulated({{1, 0}, {2, 1}}), ValidationError);      // x0 != 0
  CHECK_THROWS_AS(DemandModel::tabulated({{0, 0.1}, {2, 1}}), ValidationError);    // F0 != 0
  CHECK_THROWS_AS(DemandModel::tabulated({{0, 0}, {2, 0.9}}), ValidationError);    // Fn != 1
  CHECK_THROWS_AS(DemandModel::tabulated({{0, 0}, {2, 0.5}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(DemandModel::tabulated({{0, 0}, {1, 0.7}, {2, 0.4}, {3, 1}}),
                  ValidationError);
  CHECK_THROWS_AS(DemandModel::uniform(0.0), ValidationError);
  CHECK_THROWS_AS(DemandModel::uniform(-3.0), ValidationError);
}
