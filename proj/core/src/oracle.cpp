#include "printopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <fmt/core.h>

#include "printopt/errors.hpp"
#include "printopt/multi_product.hpp"

namespace printopt {

namespace {

// --------------------------------------------------------------------------
// Grid search
// --------------------------------------------------------------------------

struct ProductGrid {
  std::vector<double> q;
  std::vector<double> profit_keep;   // (w - c_m) q
  std::vector<double> profit_print;  // (w - c_p) q
  std::vector<double> prefix_best;   // running max of profit_print
  std::vector<int> prefix_arg;
  double step = 0.0;
};

// grid_n counts the equal steps on each [0, U_i]; every grid has grid_n + 1
// points including both endpoints. This keeps capacities that are round
// fractions of the supports exactly representable.
std::vector<ProductGrid> build_grids(const Instance& inst, int grid_n) {
  const int points = grid_n + 1;
  std::vector<ProductGrid> grids(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Product& p = inst.products[i];
    ProductGrid& g = grids[i];
    g.step = p.demand.upper() / grid_n;
    g.q.resize(points);
    g.profit_keep.resize(points);
    g.profit_print.resize(points);
    g.prefix_best.resize(points);
    g.prefix_arg.resize(points);
    for (int j = 0; j < points; ++j) {
      const double q = (j == points - 1) ? p.demand.upper() : g.step * j;
      const double w = wholesale_for_quantity(q, p);
      g.q[j] = q;
      g.profit_keep[j] = (w - p.cost_traditional) * q;
      g.profit_print[j] = (w - p.cost_print) * q;
      if (j == 0 || g.profit_print[j] > g.prefix_best[j - 1]) {
        g.prefix_best[j] = g.profit_print[j];
        g.prefix_arg[j] = j;
      } else {
        g.prefix_best[j] = g.prefix_best[j - 1];
        g.prefix_arg[j] = g.prefix_arg[j - 1];
      }
    }
  }
  return grids;
}

// Largest grid index whose quantity fits into `remaining` capacity; -1 when
// not even the zero order fits (negative remaining).
int feasible_index(const ProductGrid& g, double remaining) {
  if (remaining < -1e-12) return -1;
  if (remaining <= 0.0) return 0;
  const int last = static_cast<int>(g.q.size()) - 1;
  const int idx = static_cast<int>(std::floor(remaining / g.step + 1e-9));
  return std::min(idx, last);
}

std::vector<int> keep_branch_argmax(const std::vector<ProductGrid>& grids) {
  std::vector<int> arg(grids.size());
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const auto& v = grids[i].profit_keep;
    arg[i] = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  }
  return arg;
}

double print_profit_at(const std::vector<ProductGrid>& grids, const std::vector<int>& idx) {
  double total = 0.0;
  for (std::size_t i = 0; i < grids.size(); ++i) total += grids[i].profit_print[idx[i]];
  return total;
}

// Exhaustive search over capacity-feasible tuples, n <= 3. The profit is
// separable, so the last product collapses to a prefix maximum.
std::vector<int> print_branch_exhaustive(const std::vector<ProductGrid>& grids, double Q) {
  const std::size_t n = grids.size();
  std::vector<int> best(n, 0);
  double best_profit = -std::numeric_limits<double>::infinity();
  const ProductGrid& last = grids[n - 1];
  if (n == 1) {
    const int jmax = feasible_index(last, Q);
    if (jmax >= 0) best[0] = last.prefix_arg[jmax];
    return best;
  }
  if (n == 2) {
    const int j1max = feasible_index(grids[0], Q);
    for (int j1 = 0; j1 <= j1max; ++j1) {
      const int j2 = feasible_index(last, Q - grids[0].q[j1]);
      if (j2 < 0) continue;
      const double profit = grids[0].profit_print[j1] + last.prefix_best[j2];
      if (profit > best_profit) {
        best_profit = profit;
        best = {j1, last.prefix_arg[j2]};
      }
    }
    return best;
  }
  const int j1max = feasible_index(grids[0], Q);
  for (int j1 = 0; j1 <= j1max; ++j1) {
    const double rem1 = Q - grids[0].q[j1];
    const int j2max = feasible_index(grids[1], rem1);
    for (int j2 = 0; j2 <= j2max; ++j2) {
      const int j3 = feasible_index(last, rem1 - grids[1].q[j2]);
      if (j3 < 0) continue;
      const double profit =
          grids[0].profit_print[j1] + grids[1].profit_print[j2] + last.prefix_best[j3];
      if (profit > best_profit) {
        best_profit = profit;
        best = {j1, j2, last.prefix_arg[j3]};
      }
    }
  }
  return best;
}

// Clamp a candidate tuple into capacity by shaving the largest allocations.
void repair_feasible(const std::vector<ProductGrid>& grids, double Q, std::vector<int>& idx) {
  auto total = [&] {
    double t = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i) t += grids[i].q[idx[i]];
    return t;
  };
  while (total() > Q) {
    std::size_t largest = 0;
    for (std::size_t i = 1; i < grids.size(); ++i) {
      if (grids[i].q[idx[i]] > grids[largest].q[idx[largest]]) largest = i;
    }
    if (idx[largest] == 0) break;
    --idx[largest];
  }
}

std::vector<int> print_branch_descent(const Instance& inst,
                                      const std::vector<ProductGrid>& grids, double Q) {
  const std::size_t n = grids.size();
  std::vector<std::vector<int>> starts;

  // Analytic start: the capacity-aware adoption plan.
  {
    const EquilibriumSolution analytic = solve_adopt_capacitated_n(inst);
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int j = static_cast<int>(std::lround(analytic.quantity[i] / grids[i].step));
      idx[i] = std::clamp(j, 0, static_cast<int>(grids[i].q.size()) - 1);
    }
    repair_feasible(grids, Q, idx);
    starts.push_back(std::move(idx));
  }
  std::mt19937_64 rng(0x5eedba5eULL);
  for (int s = 0; s < 8; ++s) {
    std::vector<int> idx(n, 0);
    double rem = Q;
    for (std::size_t i = 0; i < n; ++i) {
      const int jmax = feasible_index(grids[i], rem);
      idx[i] = jmax <= 0 ? 0 : static_cast<int>(rng() % (jmax + 1));
      rem -= grids[i].q[idx[i]];
    }
    starts.push_back(std::move(idx));
  }

  std::vector<int> best;
  double best_profit = -std::numeric_limits<double>::infinity();
  for (auto idx : starts) {
    for (int pass = 0; pass < 200; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        double rem = Q;
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i) rem -= grids[k].q[idx[k]];
        }
        const int jmax = feasible_index(grids[i], rem);
        const int cand = jmax < 0 ? 0 : grids[i].prefix_arg[jmax];
        if (cand != idx[i]) {
          idx[i] = cand;
          changed = true;
        }
      }
      if (!changed) break;
    }
    const double profit = print_profit_at(grids, idx);
    if (profit > best_profit) {
      best_profit = profit;
      best = idx;
    }
  }
  return best;
}

EquilibriumSolution solution_from_indices(const Instance& inst,
                                          const std::vector<ProductGrid>& grids,
                                          const std::vector<int>& idx, bool adopted) {
  std::vector<double> q(grids.size());
  for (std::size_t i = 0; i < grids.size(); ++i) q[i] = grids[i].q[idx[i]];
  CaseLabel label = CaseLabel::NoAdoption;
  if (adopted) {
    double max_step = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i) {
      max_step = std::max(max_step, grids[i].step);
      total += q[i];
    }
    label = (inst.capacity - total <= max_step + 1e-12) ? CaseLabel::CapacityBound
                                                        : CaseLabel::Unconstrained;
  }
  return detail::assemble_solution(inst, std::move(q), adopted, label, 0.0, false);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

EquilibriumSolution grid_branch(const Instance& inst, int grid_n, bool adopted, GridMode mode) {
  validate(inst);
  if (grid_n < 10) throw ValidationError("grid_n", "grid needs at least 10 points");
  if (mode == GridMode::Exhaustive && inst.size() > 3) {
    throw ComplexityError("exhaustive grid search is limited to three products");
  }
  const auto grids = build_grids(inst, grid_n);
  std::vector<int> idx;
  if (!adopted) {
    idx = keep_branch_argmax(grids);
  } else if (mode == GridMode::CoordinateDescent ||
             (mode == GridMode::Auto && inst.size() > 3)) {
    idx = print_branch_descent(inst, grids, inst.capacity);
  } else {
    idx = print_branch_exhaustive(grids, inst.capacity);
  }
  return solution_from_indices(inst, grids, idx, adopted);
}

EquilibriumSolution grid_equilibrium(const Instance& inst, int grid_n, GridMode mode) {
  EquilibriumSolution keep = grid_branch(inst, grid_n, false, mode);
  EquilibriumSolution print = grid_branch(inst, grid_n, true, mode);
  if (print.manufacturer_profit > keep.manufacturer_profit + 1e-9) return print;
  return keep;
}

// --------------------------------------------------------------------------
// Monte Carlo
// --------------------------------------------------------------------------

McEstimate mc_retailer_profit(double quantity, double wholesale, const Product& product,
                              std::int64_t samples, std::uint64_t seed) {
  constexpr std::int64_t kBatch = 65536;
  if (samples < 1) return {};
  const double r = product.retail_price;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t done = 0;
  for (std::int64_t batch = 0; done < samples; ++batch) {
    const std::int64_t count = std::min(kBatch, samples - done);
    // One independent substream per batch; results do not depend on how
    // batches are scheduled.
    std::mt19937_64 rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (batch + 1))));
    double batch_sum = 0.0;
    double batch_sq = 0.0;
    for (std::int64_t k = 0; k < count; ++k) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double demand = product.demand.quantile(u);
      const double value = r * std::min(quantity, demand) - wholesale * quantity;
      batch_sum += value;
      batch_sq += value * value;
    }
    sum += batch_sum;
    sum_sq += batch_sq;
    done += count;
  }
  McEstimate est;
  const double n = static_cast<double>(samples);
  est.mean = sum / n;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

// --------------------------------------------------------------------------
// Second-order audit
// --------------------------------------------------------------------------

bool soc_audit(const Instance& inst, const EquilibriumSolution& sol) {
  const std::size_t n = inst.size();
  if (sol.quantity.size() != n) return false;

  if (sol.adopted && sol.label == CaseLabel::CapacityBound && n == 2 && !sol.corner &&
      inst.capacity > 0.0) {
    const Product& p1 = inst.products[0];
    const Product& p2 = inst.products[1];
    const double Q = inst.capacity;
    const auto reduced = [&](double q1) {
      const double q2 = std::clamp(Q - q1, 0.0, p2.demand.upper());
      return (wholesale_for_quantity(q1, p1) - p1.cost_print) * q1 +
             (wholesale_for_quantity(q2, p2) - p2.cost_print) * q2;
    };
    const double lo = std::max(0.0, Q - p2.demand.upper());
    const double hi = std::min(Q, p1.demand.upper());
    const double x = sol.quantity[0];
    double h = std::max(1e-5 * Q, 1e-7);
    h = std::min({h, x - lo, hi - x});
    if (h > 0.0) {
      const double curvature = (reduced(x + h) - 2.0 * reduced(x) + reduced(x - h)) / (h * h);
      if (!(curvature < 0.0)) return false;
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Product& p = inst.products[i];
    const double q = sol.quantity[i];
    total += q;
    if (q > 0.0 && q < p.demand.upper()) {
      // Per-coordinate curvature -2 r f(q) must be negative.
      if (!(p.demand.pdf(q) > 0.0)) return false;
    }
  }
  if (sol.adopted && total > inst.capacity + 1e-8) return false;
  return true;
}

// --------------------------------------------------------------------------
// Aggregate verification
// --------------------------------------------------------------------------

VerificationReport verify(const Instance& inst, int grid_n, std::int64_t samples,
                          std::uint64_t seed) {
  VerificationReport report;
  const EquilibriumSolution analytic = equilibrium(inst);
  const EquilibriumSolution oracle = grid_equilibrium(inst, grid_n);
  report.analytic_profit = analytic.manufacturer_profit;
  report.oracle_profit = oracle.manufacturer_profit;
  report.abs_gap = std::abs(report.analytic_profit - report.oracle_profit);

  double var = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const McEstimate est = mc_retailer_profit(analytic.quantity[i], analytic.wholesale[i],
                                              inst.products[i], samples, seed + i);
    report.mc_mean += est.mean;
    var += est.std_error * est.std_error;
  }
  report.mc_std_error = std::sqrt(var);
  report.soc_ok = soc_audit(inst, analytic);
  report.notes = fmt::format("case={} v={} lambda={:.6g} corner={} analytic_pi_R={:.10g}",
                             to_string(analytic.label), analytic.adopted ? 1 : 0,
                             analytic.shadow_price, analytic.corner ? 1 : 0,
                             analytic.retailer_profit);
  return report;
}

}  // namespace printopt
