#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "printopt/market.hpp"

namespace printopt {

// One swept axis: `steps` grid points from `from` to `to` inclusive.
struct AxisSpec {
  std::string param_path;  // "K", "Q", "products[0].c_p", "products[0].demand.upper", ...
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
};

struct SweepSpec {
  AxisSpec axis;
  std::optional<AxisSpec> second;  // set for 2-D sweeps
};

// One evaluated grid point of a sweep.
struct RegionCell {
  std::vector<double> coords;  // 1 or 2 swept coordinates
  CaseLabel label = CaseLabel::Error;
  bool adopted = false;
  double manufacturer_profit = 0.0;
  double retailer_profit = 0.0;
  double shadow_price = 0.0;
  std::vector<double> wholesale;
  std::vector<double> quantity;
};

// Returns a copy of `inst` with the field addressed by `path` set to `value`.
// Paths: K, Q, products[i].r, products[i].c_m, products[i].c_p,
// products[i].demand.upper (uniform demand only).
Instance with_param(const Instance& inst, const std::string& path, double value);
double get_param(const Instance& inst, const std::string& path);

// Equilibrium case of the instance: "Case1" (capacity-bound printing),
// "Case2" (unconstrained printing) or "Case3" (no printing).
std::string classify(const Instance& inst);

// Evaluates the equilibrium at every grid point. Cells that fail to solve are
// flagged with CaseLabel::Error instead of aborting the sweep. Cells may be
// solved concurrently (`threads` = 0 picks the hardware default); the output
// order is always row-major in the axis coordinates.
std::vector<RegionCell> sweep(const Instance& inst, const SweepSpec& spec, int threads = 0);

enum class BoundaryKind { Adoption, Capacity };

// Bisects the parameter to 1e-6 for the point where the requested label
// flips: adoption on/off, or capacity binding/slack within the adoption plan.
// Throws BracketError when lo and hi classify the same way.
double find_boundary(const Instance& inst, const std::string& param_path, BoundaryKind kind,
                     double lo, double hi);

// CSV emission: header `coord1[,coord2],case,v,pi_M,pi_R,w_1..w_n,q_1..q_n,lambda`,
// 10 significant digits, rows in coordinate order, trailing newline.
void emit_csv(const std::vector<RegionCell>& cells, std::ostream& out);
void emit_csv(const std::vector<RegionCell>& cells, const std::string& path);

}  // namespace printopt
