#include "printopt/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "printopt/errors.hpp"
#include "printopt/rootfind.hpp"

namespace printopt {

void validate(const Instance& inst) {
  if (inst.products.empty()) {
    throw ValidationError("products", "at least one product is required");
  }
  if (!std::isfinite(inst.adoption_cost) || inst.adoption_cost < 0.0) {
    throw ValidationError("K", "must be a finite non-negative number");
  }
  if (!std::isfinite(inst.capacity) || inst.capacity < 0.0) {
    throw ValidationError("Q", "must be a finite non-negative number");
  }
  for (std::size_t i = 0; i < inst.products.size(); ++i) {
    const Product& p = inst.products[i];
    const std::string base = "products[" + std::to_string(i) + "].";
    if (!std::isfinite(p.retail_price) || !(p.retail_price > 0.0)) {
      throw ValidationError(base + "r", "must be a positive finite number");
    }
    if (!std::isfinite(p.cost_traditional) || !(p.cost_traditional > 0.0)) {
      throw ValidationError(base + "c_m", "must be a positive finite number");
    }
    if (p.cost_traditional > p.retail_price) {
      throw ValidationError(base + "c_m", "must not exceed the retail price r");
    }
    if (!std::isfinite(p.cost_print) || !(p.cost_print > 0.0)) {
      throw ValidationError(base + "c_p", "must be a positive finite number");
    }
  }
}

std::string to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::CapacityBound: return "Case1";
    case CaseLabel::Unconstrained: return "Case2";
    case CaseLabel::NoAdoption: return "Case3";
    case CaseLabel::Error: return "error";
  }
  return "error";
}

double best_response_quantity(double wholesale, const Product& product) {
  const double p = 1.0 - wholesale / product.retail_price;
  return product.demand.quantile(std::clamp(p, 0.0, 1.0));
}

double retailer_expected_profit(double quantity, double wholesale, const Product& product) {
  return product.retail_price * product.demand.expected_min(quantity) - wholesale * quantity;
}

double wholesale_for_quantity(double quantity, const Product& product) {
  if (quantity < 0.0 || quantity > product.demand.upper()) {
    throw std::domain_error("wholesale_for_quantity: quantity outside the demand support");
  }
  return product.retail_price * (1.0 - product.demand.cdf(quantity));
}

namespace detail {

double marginal_revenue(const Product& product, double q) {
  const DemandModel& d = product.demand;
  return product.retail_price * (1.0 - d.cdf(q)) - product.retail_price * q * d.pdf(q);
}

bool capacity_binds(double unconstrained_sum, double capacity) {
  return unconstrained_sum > capacity + 1e-9 * std::max(1.0, capacity);
}

EquilibriumSolution assemble_solution(const Instance& inst, std::vector<double> quantities,
                                      bool adopted, CaseLabel label, double shadow_price,
                                      bool corner) {
  EquilibriumSolution sol;
  sol.adopted = adopted;
  sol.label = label;
  sol.shadow_price = shadow_price;
  sol.corner = corner;
  sol.quantity = std::move(quantities);
  sol.wholesale.resize(sol.quantity.size());
  for (std::size_t i = 0; i < inst.products.size(); ++i) {
    const Product& p = inst.products[i];
    const double q = std::clamp(sol.quantity[i], 0.0, p.demand.upper());
    sol.quantity[i] = q;
    sol.wholesale[i] = wholesale_for_quantity(q, p);
    const double unit_cost = adopted ? p.cost_print : p.cost_traditional;
    sol.manufacturer_profit += (sol.wholesale[i] - unit_cost) * q;
    sol.retailer_profit += retailer_expected_profit(q, sol.wholesale[i], p);
  }
  if (adopted) sol.manufacturer_profit -= inst.adoption_cost;
  return sol;
}

}  // namespace detail

namespace {

BenchmarkOptimum benchmark_optimum_by_scan(double unit_cost, const Product& product) {
  const double r = product.retail_price;
  const double q_hi = product.demand.quantile(std::clamp(1.0 - unit_cost / r, 0.0, 1.0));
  const auto profit = [&](double q) {
    return (wholesale_for_quantity(q, product) - unit_cost) * q;
  };
  BenchmarkOptimum best;
  best.via_grid = true;
  best.quantity = refine_grid_max(profit, 0.0, q_hi, 4096, 1e-10);
  best.wholesale = wholesale_for_quantity(best.quantity, product);
  best.profit = profit(best.quantity);
  if (best.profit < 0.0) {  // selling nothing dominates
    best = BenchmarkOptimum{0.0, r, 0.0, true};
  }
  return best;
}

}  // namespace

BenchmarkOptimum benchmark_optimum(double unit_cost, const Product& product) {
  const double r = product.retail_price;
  if (unit_cost > r) return {0.0, r, 0.0, false};
  if (!product.demand.igfr_ok()) return benchmark_optimum_by_scan(unit_cost, product);

  const DemandModel& d = product.demand;
  const double q_hi = d.quantile(1.0 - unit_cost / r);
  if (q_hi == 0.0) return {0.0, r, 0.0, false};
  // (1 - F(q)) - q f(q) falls from 1 - c/r >= 0 at q = 0 to -q f < 0 at the
  // newsvendor quantity; strictly decreasing under IGFR.
  const auto stationarity = [&](double q) {
    return (1.0 - d.cdf(q)) - q * d.pdf(q) - unit_cost / r;
  };
  BenchmarkOptimum best;
  best.quantity = bisect(stationarity, 0.0, q_hi, 1e-10);
  best.wholesale = wholesale_for_quantity(best.quantity, product);
  best.profit = (best.wholesale - unit_cost) * best.quantity;
  return best;
}

}  // namespace printopt
