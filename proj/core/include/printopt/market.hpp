#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "printopt/demand.hpp"

namespace printopt {

// One SKU: exogenous retail price and the two candidate unit production costs.
struct Product {
  double retail_price = 0.0;      // what the retailer charges customers
  double cost_traditional = 0.0;  // manufacturer unit cost, incumbent process
  double cost_print = 0.0;        // manufacturer unit cost when printed
  DemandModel demand = DemandModel::uniform(1.0);
};

// A full problem: the product line plus the printer's fixed cost and capacity.
struct Instance {
  std::vector<Product> products;
  double adoption_cost = 0.0;  // one-off cost of switching to printing
  double capacity = 0.0;       // total printed units the printer can supply

  std::size_t size() const noexcept { return products.size(); }
};

// Enforces the instance invariants (n >= 1, costs positive, traditional cost
// not above the retail price, ...). Throws ValidationError with a field path.
void validate(const Instance& inst);

enum class CaseLabel {
  CapacityBound,  // printing adopted, capacity exhausted
  Unconstrained,  // printing adopted with slack capacity
  NoAdoption,     // status quo production
  Error,          // sweep cell that failed to solve
};

// "Case1" / "Case2" / "Case3" / "error".
std::string to_string(CaseLabel label);

struct EquilibriumSolution {
  bool adopted = false;
  std::vector<double> wholesale;  // per product, w_i = r_i (1 - F_i(q_i))
  std::vector<double> quantity;   // per product retailer orders
  CaseLabel label = CaseLabel::NoAdoption;
  double manufacturer_profit = 0.0;
  double retailer_profit = 0.0;
  double shadow_price = 0.0;  // marginal value of printer capacity, 0 when slack
  bool corner = false;        // an interior first-order condition was infeasible
};

// Retailer best response: quantile(1 - w/r), clamped to 0 once w reaches r.
double best_response_quantity(double wholesale, const Product& product);

// r * E[min(q, D)] - w * q.
double retailer_expected_profit(double quantity, double wholesale, const Product& product);

// Inverse of the best response: w = r (1 - F(q)). Throws std::domain_error
// for q outside the demand support.
double wholesale_for_quantity(double quantity, const Product& product);

struct BenchmarkOptimum {
  double quantity = 0.0;
  double wholesale = 0.0;
  double profit = 0.0;
  bool via_grid = false;  // optimum located by grid scan (non-IGFR demand)
};

// Single-product manufacturer optimum at unit cost c: the root of
// (1 - F(q))(1 - q f(q)/(1 - F(q))) = c/r, solved in quantity space.
// c above the retail price yields the degenerate (0, r, 0).
BenchmarkOptimum benchmark_optimum(double unit_cost, const Product& product);

namespace detail {

// Marginal revenue of the q-th unit: r (1 - F(q)) - r q f(q).
double marginal_revenue(const Product& product, double q);

// Capacity comparison shared by the adoption solvers. A capacity exactly at
// the unconstrained optimum counts as slack; the slop absorbs root-finder
// tolerance so the case label is deterministic there.
bool capacity_binds(double unconstrained_sum, double capacity);

// Builds a solution from quantities: wholesale prices, profits, label.
EquilibriumSolution assemble_solution(const Instance& inst, std::vector<double> quantities,
                                      bool adopted, CaseLabel label, double shadow_price,
                                      bool corner);

}  // namespace detail

}  // namespace printopt
