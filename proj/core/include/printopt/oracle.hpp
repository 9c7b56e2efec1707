#pragma once

#include <cstdint>
#include <string>

#include "printopt/market.hpp"

namespace printopt {

enum class GridMode {
  Auto,               // exhaustive for n <= 3, coordinate descent beyond
  Exhaustive,         // full enumeration; ComplexityError for n > 3
  CoordinateDescent,  // multi-start coordinate descent on the grid
};

// Brute-force search over per-product quantity grids (grid_n points on each
// [0, U_i]); best of the adoption and no-adoption branches. Labels are
// grid-resolution approximations of the analytic case split.
EquilibriumSolution grid_equilibrium(const Instance& inst, int grid_n,
                                     GridMode mode = GridMode::Auto);

// Same search restricted to one adoption branch.
EquilibriumSolution grid_branch(const Instance& inst, int grid_n, bool adopted,
                                GridMode mode = GridMode::Auto);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo estimate of the retailer profit r min(q, D) - w q by
// inverse-CDF sampling. Bit-deterministic for a given (samples, seed) pair
// regardless of evaluation order: the stream is split into fixed-size batches
// with per-batch substreams derived from the seed.
McEstimate mc_retailer_profit(double quantity, double wholesale, const Product& product,
                              std::int64_t samples, std::uint64_t seed);

// Numerical second-order audit of a solution: negative curvature of the
// reduced objective (two-product capacity-bound case) or of each product's
// own term, plus capacity feasibility.
bool soc_audit(const Instance& inst, const EquilibriumSolution& sol);

struct VerificationReport {
  double analytic_profit = 0.0;  // manufacturer profit from the analytic solver
  double oracle_profit = 0.0;    // manufacturer profit from the grid search
  double abs_gap = 0.0;          // |analytic - oracle|
  double mc_mean = 0.0;          // MC estimate of the retailer profit
  double mc_std_error = 0.0;
  bool soc_ok = false;
  std::string notes;
};

// Cross-checks the analytic equilibrium against the grid oracle, a
// Monte-Carlo retailer-profit estimate, and the second-order audit.
VerificationReport verify(const Instance& inst, int grid_n, std::int64_t samples,
                          std::uint64_t seed);

}  // namespace printopt
