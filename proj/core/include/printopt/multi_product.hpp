#pragma once

#include "printopt/market.hpp"

namespace printopt {

// Quantity at which a product's marginal revenue equals cost_print + shadow
// price: r (1 - F(q)) - r q f(q) = c_p + lambda. Returns 0 once the priced-up
// cost reaches the retail price.
double foc_quantity(const Product& product, double shadow_price);

// n-product solvers (n >= 1).
EquilibriumSolution solve_no_adoption_n(const Instance& inst);
EquilibriumSolution solve_adopt_unconstrained_n(const Instance& inst);

// Capacity-bound adoption: finds the shadow price at which the per-product
// first-order quantities sum to the capacity (outer bisection over lambda,
// inner root-finds per product). Returns the unconstrained solution when
// capacity is not actually binding.
EquilibriumSolution solve_adopt_capacitated_n(const Instance& inst);

EquilibriumSolution equilibrium_n(const Instance& inst);

// Dispatch: dedicated two-product path for n == 2, general solver otherwise.
EquilibriumSolution equilibrium(const Instance& inst);

// Capacity-bound closed forms for three uniform-demand products; oracle
// counterpart of solve_adopt_capacitated_n. Throws UnsupportedModelError
// unless n == 3 with all demands uniform.
EquilibriumSolution three_product_uniform_closed_form(const Instance& inst);

}  // namespace printopt
