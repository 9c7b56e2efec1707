#include "printopt/multi_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "printopt/errors.hpp"
#include "printopt/rootfind.hpp"
#include "printopt/two_product.hpp"

namespace printopt {

namespace {

constexpr double kProfitTie = 1e-9;
constexpr double kCapacityResidual = 1e-8;

void require_products(const Instance& inst) {
  if (inst.products.empty()) {
    throw ValidationError("products", "at least one product is required");
  }
}

double shadow_price_cap(const Instance& inst) {
  double cap = 0.0;
  for (const Product& p : inst.products) {
    cap = std::max(cap, p.retail_price - p.cost_print);
  }
  return cap;
}

double foc_sum(const Instance& inst, double lambda) {
  double sum = 0.0;
  for (const Product& p : inst.products) sum += foc_quantity(p, lambda);
  return sum;
}

}  // namespace

double foc_quantity(const Product& product, double shadow_price) {
  const double r = product.retail_price;
  const double target = product.cost_print + shadow_price;
  if (target >= r) return 0.0;
  const DemandModel& d = product.demand;
  const double q_hi = d.quantile(1.0 - product.cost_print / r);
  const auto gap = [&](double q) { return detail::marginal_revenue(product, q) - target; };
  if (d.igfr_ok()) {
    // Marginal revenue falls from r at q = 0 to below cost_print at the
    // newsvendor quantity; one crossing.
    return bisect(gap, 0.0, q_hi, 1e-10);
  }
  // Several stationary points possible: keep the one worth the most in the
  // priced-up objective (w(q) - c_p - lambda) q.
  const auto value = [&](double q) {
    return (wholesale_for_quantity(q, product) - target) * q;
  };
  double best_q = 0.0;
  double best_v = 0.0;
  for (const auto& [a, b] : sign_change_brackets(gap, 0.0, q_hi, 512)) {
    const double root = bisect(gap, a, b, 1e-10);
    if (value(root) > best_v) {
      best_v = value(root);
      best_q = root;
    }
  }
  return best_q;
}

EquilibriumSolution solve_no_adoption_n(const Instance& inst) {
  require_products(inst);
  std::vector<double> q(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    q[i] = benchmark_optimum(inst.products[i].cost_traditional, inst.products[i]).quantity;
  }
  return detail::assemble_solution(inst, std::move(q), false, CaseLabel::NoAdoption, 0.0, false);
}

EquilibriumSolution solve_adopt_unconstrained_n(const Instance& inst) {
  require_products(inst);
  std::vector<double> q(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    q[i] = benchmark_optimum(inst.products[i].cost_print, inst.products[i]).quantity;
  }
  return detail::assemble_solution(inst, std::move(q), true, CaseLabel::Unconstrained, 0.0, false);
}

EquilibriumSolution solve_adopt_capacitated_n(const Instance& inst) {
  require_products(inst);
  const std::size_t n = inst.size();
  const double Q = inst.capacity;

  if (Q == 0.0) {
    std::vector<double> zeros(n, 0.0);
    return detail::assemble_solution(inst, std::move(zeros), true, CaseLabel::CapacityBound,
                                     shadow_price_cap(inst), false);
  }
  if (!detail::capacity_binds(foc_sum(inst, 0.0), Q)) {
    return solve_adopt_unconstrained_n(inst);  // capacity not actually binding
  }

  // The allocation sum falls continuously from sum(q_i^1) at lambda = 0 to 0
  // at the largest margin, so the capacity residual brackets a root.
  const double lambda_hi = shadow_price_cap(inst);
  const auto residual = [&](double lambda) { return foc_sum(inst, lambda) - Q; };
  const double lambda = bisect(residual, 0.0, lambda_hi, 1e-13 * std::max(1.0, lambda_hi));

  std::vector<double> q(n);
  bool corner = false;
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = foc_quantity(inst.products[i], lambda);
    if (q[i] == 0.0 && foc_quantity(inst.products[i], 0.0) > 0.0) corner = true;
  }
  // Non-IGFR demands can make the allocation map jump across the capacity
  // target; fold any leftover residual into the largest allocation.
  double gap = Q - std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(gap) > kCapacityResidual) {
    const std::size_t j = static_cast<std::size_t>(
        std::max_element(q.begin(), q.end()) - q.begin());
    q[j] = std::clamp(q[j] + gap, 0.0, inst.products[j].demand.upper());
  }
  return detail::assemble_solution(inst, std::move(q), true, CaseLabel::CapacityBound,
                                   std::max(lambda, 0.0), corner);
}

EquilibriumSolution equilibrium_n(const Instance& inst) {
  require_products(inst);
  EquilibriumSolution keep = solve_no_adoption_n(inst);
  EquilibriumSolution adopt = detail::capacity_binds(foc_sum(inst, 0.0), inst.capacity)
                                  ? solve_adopt_capacitated_n(inst)
                                  : solve_adopt_unconstrained_n(inst);
  if (adopt.manufacturer_profit > keep.manufacturer_profit + kProfitTie) return adopt;
  return keep;
}

EquilibriumSolution equilibrium(const Instance& inst) {
  return inst.size() == 2 ? equilibrium_2(inst) : equilibrium_n(inst);
}

EquilibriumSolution three_product_uniform_closed_form(const Instance& inst) {
  if (inst.size() != 3) {
    throw UnsupportedModelError("three-product closed form needs exactly three products");
  }
  for (const Product& p : inst.products) {
    if (!p.demand.is_uniform()) {
      throw UnsupportedModelError("three-product closed form requires uniform demand");
    }
  }
  const double U1 = inst.products[0].demand.upper(), U2 = inst.products[1].demand.upper(),
               U3 = inst.products[2].demand.upper();
  const double r1 = inst.products[0].retail_price, r2 = inst.products[1].retail_price,
               r3 = inst.products[2].retail_price;
  const double c1 = inst.products[0].cost_print, c2 = inst.products[1].cost_print,
               c3 = inst.products[2].cost_print;
  const double Q = inst.capacity;
  const double denom = 2.0 * (U1 * r2 * r3 + U2 * r1 * r3 + U3 * r1 * r2);

  std::vector<double> q(3);
  q[0] = U1 *
         (2.0 * Q * r2 * r3 + U2 * c2 * r3 - U2 * c1 * r3 - U2 * r2 * r3 + U2 * r1 * r3 -
          U3 * c1 * r2 + U3 * c3 * r2 + U3 * r1 * r2 - U3 * r2 * r3) /
         denom;
  q[1] = U2 *
         (2.0 * Q * r1 * r3 + U1 * c1 * r3 - U1 * c2 * r3 - U1 * r1 * r3 + U1 * r2 * r3 -
          U3 * c2 * r1 + U3 * c3 * r1 + U3 * r1 * r2 - U3 * r1 * r3) /
         denom;
  q[2] = U3 *
         (2.0 * Q * r1 * r2 + U1 * c1 * r2 - U1 * c3 * r2 - U1 * r1 * r2 + U1 * r2 * r3 -
          U2 * c3 * r1 + U2 * c2 * r1 + U2 * r1 * r3 - U2 * r1 * r2) /
         denom;

  EquilibriumSolution sol;
  sol.adopted = true;
  sol.label = CaseLabel::CapacityBound;
  sol.quantity = q;
  sol.wholesale.resize(3);
  const double r[3] = {r1, r2, r3};
  const double U[3] = {U1, U2, U3};
  const double c[3] = {c1, c2, c3};
  double lambda = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (q[i] < 0.0 || q[i] > U[i]) {
      sol.corner = true;  // outside the interior regime the forms assume
      sol.quantity[i] = std::clamp(q[i], 0.0, U[i]);
    }
    const double qi = sol.quantity[i];
    sol.wholesale[i] = r[i] * (1.0 - qi / U[i]);
    sol.manufacturer_profit += (sol.wholesale[i] - c[i]) * qi;
    sol.retailer_profit += r[i] * qi * qi / (2.0 * U[i]);
    if (qi > 0.0) lambda = std::max(lambda, r[i] * (1.0 - 2.0 * qi / U[i]) - c[i]);
  }
  sol.manufacturer_profit -= inst.adoption_cost;
  sol.shadow_price = std::max(lambda, 0.0);
  return sol;
}

}  // namespace printopt
