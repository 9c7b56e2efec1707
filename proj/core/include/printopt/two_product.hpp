#pragma once

#include "printopt/market.hpp"

namespace printopt {

// Two-product solvers. All take an Instance with exactly two products and
// throw ValidationError otherwise.

// Status-quo optimum: independent single-product optima at traditional costs.
EquilibriumSolution solve_no_adoption_2(const Instance& inst);

// Printing adopted, capacity ignored: independent optima at print costs,
// fixed cost subtracted. Callers are responsible for the capacity check.
EquilibriumSolution solve_adopt_unconstrained_2(const Instance& inst);

// Printing adopted with the capacity constraint binding. The split of the
// capacity between the two products solves the marginal-revenue balance
// equation; falls back to a corner allocation when no interior balance exists.
EquilibriumSolution solve_adopt_capacitated_2(const Instance& inst);

// Best adoption plan: capacitated when the unconstrained orders exceed
// capacity, unconstrained otherwise (ties go to the unconstrained label).
EquilibriumSolution solve_adoption_2(const Instance& inst);

// Full equilibrium: adoption wins only when it beats the status quo by more
// than 1e-9; ties keep traditional production.
EquilibriumSolution equilibrium_2(const Instance& inst);

// Closed-form solution for uniform demand, evaluated verbatim for the
// requested case. Independent algebraic route used as an oracle against the
// generic solvers. Throws UnsupportedModelError for non-uniform demand.
EquilibriumSolution uniform_closed_form_2(const Instance& inst, CaseLabel which);

// Profit the capacity cap costs under adoption (uniform demand only):
// unconstrained minus capacity-bound manufacturer profit. Non-negative.
double capacity_gap(const Instance& inst);

// The same gap via the factored-square identity; separate algebraic route.
double capacity_gap_identity(const Instance& inst);

// Largest adoption fixed cost at which unconstrained printing still beats the
// status quo (uniform demand only). Negative when printing never pays.
double adoption_capital_threshold(const Instance& inst);

}  // namespace printopt
