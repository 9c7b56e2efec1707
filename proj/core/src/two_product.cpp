#include "printopt/two_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "printopt/errors.hpp"
#include "printopt/multi_product.hpp"
#include "printopt/rootfind.hpp"

namespace printopt {

namespace {

constexpr double kProfitTie = 1e-9;

void require_two_products(const Instance& inst) {
  if (inst.size() != 2) {
    throw ValidationError("products", "this solver expects exactly two products");
  }
}

void require_uniform_2(const Instance& inst) {
  require_two_products(inst);
  if (!inst.products[0].demand.is_uniform() || !inst.products[1].demand.is_uniform()) {
    throw UnsupportedModelError("closed forms require uniform demand on both products");
  }
}

// The complement Q - q1, clamped against ulp overshoot of the support.
double complement_quantity(const Instance& inst, double q1) {
  return std::clamp(inst.capacity - q1, 0.0, inst.products[1].demand.upper());
}

// Manufacturer profit of the capacity split (q1, Q - q1) under printing,
// before the fixed cost.
double split_profit(const Instance& inst, double q1) {
  const Product& p1 = inst.products[0];
  const Product& p2 = inst.products[1];
  const double q2 = complement_quantity(inst, q1);
  return (wholesale_for_quantity(q1, p1) - p1.cost_print) * q1 +
         (wholesale_for_quantity(q2, p2) - p2.cost_print) * q2;
}

// Shadow price from the first-order condition of the active products.
double recover_shadow_price(const Instance& inst, const std::vector<double>& q) {
  double lambda = 0.0;
  bool any_active = false;
  for (std::size_t i = 0; i < inst.products.size(); ++i) {
    if (q[i] > 1e-12) {
      any_active = true;
      lambda = std::max(lambda,
                        detail::marginal_revenue(inst.products[i], q[i]) -
                            inst.products[i].cost_print);
    }
  }
  if (!any_active) {
    for (const Product& p : inst.products) {
      lambda = std::max(lambda, p.retail_price - p.cost_print);
    }
  }
  return std::max(lambda, 0.0);
}

}  // namespace

EquilibriumSolution solve_no_adoption_2(const Instance& inst) {
  require_two_products(inst);
  std::vector<double> q(2);
  for (int i = 0; i < 2; ++i) {
    q[i] = benchmark_optimum(inst.products[i].cost_traditional, inst.products[i]).quantity;
  }
  return detail::assemble_solution(inst, std::move(q), false, CaseLabel::NoAdoption, 0.0, false);
}

EquilibriumSolution solve_adopt_unconstrained_2(const Instance& inst) {
  require_two_products(inst);
  std::vector<double> q(2);
  for (int i = 0; i < 2; ++i) {
    q[i] = benchmark_optimum(inst.products[i].cost_print, inst.products[i]).quantity;
  }
  return detail::assemble_solution(inst, std::move(q), true, CaseLabel::Unconstrained, 0.0, false);
}

EquilibriumSolution solve_adopt_capacitated_2(const Instance& inst) {
  require_two_products(inst);
  const Product& p1 = inst.products[0];
  const Product& p2 = inst.products[1];
  const double Q = inst.capacity;

  if (Q == 0.0) {
    return detail::assemble_solution(inst, {0.0, 0.0}, true, CaseLabel::CapacityBound,
                                     recover_shadow_price(inst, {0.0, 0.0}), false);
  }
  const double q1_free = foc_quantity(p1, 0.0);
  const double q2_free = foc_quantity(p2, 0.0);
  if (!detail::capacity_binds(q1_free + q2_free, Q)) {
    // Capacity not binding after all: hand back the interior optimum.
    return solve_adopt_unconstrained_2(inst);
  }

  const double lo = std::max(0.0, Q - p2.demand.upper());
  const double hi = std::min(Q, p1.demand.upper());
  // Balance of marginal revenues net of print costs; the derivative of the
  // reduced objective in q1.
  const auto balance = [&](double q1) {
    return (detail::marginal_revenue(p1, q1) - p1.cost_print) -
           (detail::marginal_revenue(p2, complement_quantity(inst, q1)) - p2.cost_print);
  };

  double q1 = lo;
  bool corner = false;
  const double b_lo = balance(lo);
  const double b_hi = balance(hi);
  const bool igfr = p1.demand.igfr_ok() && p2.demand.igfr_ok();
  if (igfr) {
    if (b_lo <= 0.0) {
      q1 = lo;  // product 1 never earns the marginal unit
      corner = true;
    } else if (b_hi >= 0.0) {
      q1 = hi;
      corner = true;
    } else {
      q1 = bisect(balance, lo, hi, 1e-10);
    }
  } else {
    // The balance may cross zero several times; keep the best-profit root.
    const auto brackets = sign_change_brackets(balance, lo, hi, 512);
    if (brackets.empty()) {
      q1 = split_profit(inst, lo) >= split_profit(inst, hi) ? lo : hi;
      corner = true;
    } else {
      double best_profit = -std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : brackets) {
        const double root = bisect(balance, a, b, 1e-10);
        const double profit = split_profit(inst, root);
        if (profit > best_profit) {
          best_profit = profit;
          q1 = root;
        }
      }
      for (double end : {lo, hi}) {
        if (split_profit(inst, end) > best_profit) {
          best_profit = split_profit(inst, end);
          q1 = end;
          corner = true;
        }
      }
    }
  }

  std::vector<double> q{q1, complement_quantity(inst, q1)};
  const double lambda = recover_shadow_price(inst, q);
  return detail::assemble_solution(inst, std::move(q), true, CaseLabel::CapacityBound, lambda,
                                   corner);
}

EquilibriumSolution solve_adoption_2(const Instance& inst) {
  require_two_products(inst);
  const double q1_free = foc_quantity(inst.products[0], 0.0);
  const double q2_free = foc_quantity(inst.products[1], 0.0);
  if (detail::capacity_binds(q1_free + q2_free, inst.capacity)) {
    return solve_adopt_capacitated_2(inst);
  }
  return solve_adopt_unconstrained_2(inst);
}

EquilibriumSolution equilibrium_2(const Instance& inst) {
  EquilibriumSolution keep = solve_no_adoption_2(inst);
  EquilibriumSolution adopt = solve_adoption_2(inst);
  // Ties keep traditional production: no point paying the fixed cost.
  if (adopt.manufacturer_profit > keep.manufacturer_profit + kProfitTie) return adopt;
  return keep;
}

// ---------------------------------------------------------------------------
// Uniform-demand closed forms. Everything below is evaluated with plain
// algebra on (U_i, r_i, c_i) so it stays an independent route from the
// bisection solvers above.
// ---------------------------------------------------------------------------

namespace {

struct UniformParams {
  double U1, U2, r1, r2, cm1, cm2, cp1, cp2, K, Q;
};

UniformParams uniform_params(const Instance& inst) {
  const Product& p1 = inst.products[0];
  const Product& p2 = inst.products[1];
  return {p1.demand.upper(), p2.demand.upper(), p1.retail_price,  p2.retail_price,
          p1.cost_traditional, p2.cost_traditional, p1.cost_print, p2.cost_print,
          inst.adoption_cost,  inst.capacity};
}

EquilibriumSolution closed_form_from_quantities(const UniformParams& u,
                                                const std::vector<double>& q, bool adopted,
                                                CaseLabel label, double lambda, bool corner,
                                                double manufacturer_profit) {
  EquilibriumSolution sol;
  sol.adopted = adopted;
  sol.label = label;
  sol.shadow_price = lambda;
  sol.corner = corner;
  sol.quantity = q;
  sol.wholesale = {u.r1 * (1.0 - q[0] / u.U1), u.r2 * (1.0 - q[1] / u.U2)};
  sol.manufacturer_profit = manufacturer_profit;
  // Retailer profit at the best response reduces to r q^2 / (2U) per product.
  sol.retailer_profit = u.r1 * q[0] * q[0] / (2.0 * u.U1) + u.r2 * q[1] * q[1] / (2.0 * u.U2);
  return sol;
}

double no_adoption_profit_expr(const UniformParams& u) {
  return (u.U1 * u.r1 * u.r1 * u.r2 +
          (u.U2 * u.r2 * u.r2 + (-2.0 * u.U1 * u.cm1 - 2.0 * u.U2 * u.cm2) * u.r2 +
           u.U2 * u.cm2 * u.cm2) *
              u.r1 +
          u.U1 * u.cm1 * u.cm1 * u.r2) /
         (4.0 * u.r1 * u.r2);
}

double unconstrained_profit_expr(const UniformParams& u) {
  return (u.U1 * u.r1 * u.r1 * u.r2 +
          (u.r2 * u.r2 * u.U2 + (-2.0 * u.U1 * u.cp1 - 2.0 * u.U2 * u.cp2) * u.r2 +
           u.U2 * u.cp2 * u.cp2) *
              u.r1 +
          u.U1 * u.cp1 * u.cp1 * u.r2) /
         (4.0 * u.r1 * u.r2) -
         u.K;
}

double capacitated_profit_expr(const UniformParams& u) {
  const double d = u.cp1 - u.cp2 - u.r1 + u.r2;
  return ((d * d * u.U2 - 4.0 * u.Q * u.r2 * (u.cp1 - u.r1)) * u.U1 -
          4.0 * u.Q * u.r1 * ((u.cp2 - u.r2) * u.U2 + u.Q * u.r2)) /
             (4.0 * u.U1 * u.r2 + 4.0 * u.U2 * u.r1) -
         u.K;
}

}  // namespace

EquilibriumSolution uniform_closed_form_2(const Instance& inst, CaseLabel which) {
  require_uniform_2(inst);
  const UniformParams u = uniform_params(inst);

  switch (which) {
    case CaseLabel::NoAdoption: {
      const std::vector<double> q{0.5 * u.U1 * (1.0 - u.cm1 / u.r1),
                                  0.5 * u.U2 * (1.0 - u.cm2 / u.r2)};
      return closed_form_from_quantities(u, q, false, CaseLabel::NoAdoption, 0.0, false,
                                         no_adoption_profit_expr(u));
    }
    case CaseLabel::Unconstrained: {
      std::vector<double> q{0.5 * u.U1 * (1.0 - u.cp1 / u.r1),
                            0.5 * u.U2 * (1.0 - u.cp2 / u.r2)};
      double profit;
      if (q[0] >= 0.0 && q[1] >= 0.0) {
        profit = unconstrained_profit_expr(u);
      } else {
        // A print cost above the retail price drops that product entirely.
        q[0] = std::max(q[0], 0.0);
        q[1] = std::max(q[1], 0.0);
        profit = (u.r1 * (1.0 - q[0] / u.U1) - u.cp1) * q[0] +
                 (u.r2 * (1.0 - q[1] / u.U2) - u.cp2) * q[1] - u.K;
      }
      return closed_form_from_quantities(u, q, true, CaseLabel::Unconstrained, 0.0, false,
                                         profit);
    }
    case CaseLabel::CapacityBound: {
      const double lo = std::max(0.0, u.Q - u.U2);
      const double hi = std::min(u.Q, u.U1);
      double q1;
      bool corner = false;
      if (u.cp1 >= u.r1 && u.cp2 >= u.r2) {
        return closed_form_from_quantities(u, {0.0, 0.0}, true, CaseLabel::CapacityBound,
                                           0.0, true, -u.K);
      }
      if (u.cp1 >= u.r1) {
        q1 = lo;  // product 1 priced out; all capacity to product 2
        corner = true;
      } else if (u.cp2 >= u.r2) {
        q1 = std::min(hi, 0.5 * u.U1 * (1.0 - u.cp1 / u.r1));
        corner = true;
      } else {
        q1 = u.U1 *
             (2.0 * u.Q * u.r2 - u.U2 * u.cp1 + u.U2 * u.cp2 + u.U2 * u.r1 - u.U2 * u.r2) /
             (2.0 * (u.U1 * u.r2 + u.U2 * u.r1));
        if (q1 < lo) {
          q1 = lo;
          corner = true;
        } else if (q1 > hi) {
          q1 = hi;
          corner = true;
        }
      }
      const std::vector<double> q{q1, u.Q - q1};
      const double w1 = u.r1 * (1.0 - q[0] / u.U1);
      const double w2 = u.r2 * (1.0 - q[1] / u.U2);
      const double profit = corner
                                ? (w1 - u.cp1) * q[0] + (w2 - u.cp2) * q[1] - u.K
                                : capacitated_profit_expr(u);
      double lambda = 0.0;
      if (q[0] > 0.0) lambda = std::max(lambda, u.r1 * (1.0 - 2.0 * q[0] / u.U1) - u.cp1);
      if (q[1] > 0.0) lambda = std::max(lambda, u.r2 * (1.0 - 2.0 * q[1] / u.U2) - u.cp2);
      return closed_form_from_quantities(u, q, true, CaseLabel::CapacityBound,
                                         std::max(lambda, 0.0), corner, profit);
    }
    case CaseLabel::Error: break;
  }
  throw ValidationError("case", "no closed form for the requested case");
}

double capacity_gap(const Instance& inst) {
  require_uniform_2(inst);
  const UniformParams u = uniform_params(inst);
  // Fixed cost cancels between the two adoption regimes.
  return unconstrained_profit_expr(u) - capacitated_profit_expr(u);
}

double capacity_gap_identity(const Instance& inst) {
  require_uniform_2(inst);
  const UniformParams u = uniform_params(inst);
  const double inner = ((u.Q - 0.5 * u.U1 - 0.5 * u.U2) * u.r2 + 0.5 * u.U2 * u.cp2) * u.r1 +
                       0.5 * u.U1 * u.cp1 * u.r2;
  return inner * inner / ((u.U1 * u.r2 + u.U2 * u.r1) * u.r1 * u.r2);
}

double adoption_capital_threshold(const Instance& inst) {
  require_uniform_2(inst);
  const UniformParams u = uniform_params(inst);
  const double term1 =
      u.U1 * (u.cm1 - u.cp1) * (1.0 - (u.cm1 + u.cp1) / (2.0 * u.r1));
  const double term2 =
      u.U2 * (u.cm2 - u.cp2) * (1.0 - (u.cm2 + u.cp2) / (2.0 * u.r2));
  return 0.5 * (term1 + term2);
}

}  // namespace printopt
