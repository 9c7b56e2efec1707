#include "printopt/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "printopt/errors.hpp"
#include "printopt/multi_product.hpp"

namespace printopt {

namespace {

struct ParamRef {
  enum class Field { AdoptionCost, Capacity, RetailPrice, CostTraditional, CostPrint, DemandUpper };
  Field field;
  std::size_t product = 0;
};

ParamRef resolve_path(const Instance& inst, const std::string& path) {
  if (path == "K") return {ParamRef::Field::AdoptionCost};
  if (path == "Q") return {ParamRef::Field::Capacity};
  const std::string prefix = "products[";
  if (path.rfind(prefix, 0) == 0) {
    const auto close = path.find(']', prefix.size());
    if (close != std::string::npos && path.size() > close + 1 && path[close + 1] == '.') {
      std::size_t index = 0;
      const char* first = path.data() + prefix.size();
      const char* last = path.data() + close;
      const auto [ptr, ec] = std::from_chars(first, last, index);
      if (ec == std::errc() && ptr == last) {
        if (index >= inst.size()) {
          throw ValidationError(path, "product index out of range");
        }
        const std::string field = path.substr(close + 2);
        if (field == "r") return {ParamRef::Field::RetailPrice, index};
        if (field == "c_m") return {ParamRef::Field::CostTraditional, index};
        if (field == "c_p") return {ParamRef::Field::CostPrint, index};
        if (field == "demand.upper") {
          if (!inst.products[index].demand.is_uniform()) {
            throw ValidationError(path, "demand.upper is only sweepable for uniform demand");
          }
          return {ParamRef::Field::DemandUpper, index};
        }
      }
    }
  }
  throw ValidationError(path, "unknown parameter path");
}

}  // namespace

Instance with_param(const Instance& inst, const std::string& path, double value) {
  const ParamRef ref = resolve_path(inst, path);
  Instance out = inst;
  switch (ref.field) {
    case ParamRef::Field::AdoptionCost: out.adoption_cost = value; break;
    case ParamRef::Field::Capacity: out.capacity = value; break;
    case ParamRef::Field::RetailPrice: out.products[ref.product].retail_price = value; break;
    case ParamRef::Field::CostTraditional:
      out.products[ref.product].cost_traditional = value;
      break;
    case ParamRef::Field::CostPrint: out.products[ref.product].cost_print = value; break;
    case ParamRef::Field::DemandUpper:
      out.products[ref.product].demand = DemandModel::uniform(value);
      break;
  }
  return out;
}

double get_param(const Instance& inst, const std::string& path) {
  const ParamRef ref = resolve_path(inst, path);
  switch (ref.field) {
    case ParamRef::Field::AdoptionCost: return inst.adoption_cost;
    case ParamRef::Field::Capacity: return inst.capacity;
    case ParamRef::Field::RetailPrice: return inst.products[ref.product].retail_price;
    case ParamRef::Field::CostTraditional: return inst.products[ref.product].cost_traditional;
    case ParamRef::Field::CostPrint: return inst.products[ref.product].cost_print;
    case ParamRef::Field::DemandUpper: return inst.products[ref.product].demand.upper();
  }
  throw ValidationError(path, "unknown parameter path");
}

std::string classify(const Instance& inst) {
  validate(inst);
  return to_string(equilibrium(inst).label);
}

namespace {

std::vector<double> axis_coords(const AxisSpec& axis, const char* which) {
  if (axis.steps < 2) {
    throw ValidationError(std::string(which) + ".steps", "need at least 2 grid points");
  }
  if (!(axis.from < axis.to)) {
    throw ValidationError(std::string(which) + ".from", "must be strictly below to");
  }
  std::vector<double> coords(axis.steps);
  for (int i = 0; i < axis.steps; ++i) {
    coords[i] = axis.from + (axis.to - axis.from) * i / (axis.steps - 1);
  }
  return coords;
}

RegionCell solve_cell(const Instance& base, const SweepSpec& spec,
                      const std::vector<double>& coords, std::size_t n_products) {
  RegionCell cell;
  cell.coords = coords;
  try {
    Instance inst = with_param(base, spec.axis.param_path, coords[0]);
    if (spec.second) inst = with_param(inst, spec.second->param_path, coords[1]);
    validate(inst);
    const EquilibriumSolution sol = equilibrium(inst);
    cell.label = sol.label;
    cell.adopted = sol.adopted;
    cell.manufacturer_profit = sol.manufacturer_profit;
    cell.retailer_profit = sol.retailer_profit;
    cell.shadow_price = sol.shadow_price;
    cell.wholesale = sol.wholesale;
    cell.quantity = sol.quantity;
  } catch (const std::exception&) {
    // Degenerate points become error cells; the sweep carries on.
    cell.label = CaseLabel::Error;
    cell.adopted = false;
    cell.wholesale.assign(n_products, 0.0);
    cell.quantity.assign(n_products, 0.0);
  }
  return cell;
}

}  // namespace

std::vector<RegionCell> sweep(const Instance& inst, const SweepSpec& spec, int threads) {
  validate(inst);
  get_param(inst, spec.axis.param_path);  // reject bad paths up front
  const std::vector<double> first = axis_coords(spec.axis, "param");
  std::vector<double> second;
  if (spec.second) {
    get_param(inst, spec.second->param_path);
    second = axis_coords(*spec.second, "param2");
  }

  const std::size_t n2 = spec.second ? second.size() : 1;
  const std::size_t total = first.size() * n2;
  std::vector<RegionCell> cells(total);

  const auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t idx = begin; idx < total; idx += stride) {
      const std::size_t i = idx / n2;
      const std::size_t j = idx % n2;
      std::vector<double> coords{first[i]};
      if (spec.second) coords.push_back(second[j]);
      cells[idx] = solve_cell(inst, spec, coords, inst.size());
    }
  };

  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, total);
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run, t, workers);
    for (auto& th : pool) th.join();
  }
  return cells;
}

double find_boundary(const Instance& inst, const std::string& param_path, BoundaryKind kind,
                     double lo, double hi) {
  validate(inst);
  if (!(lo < hi)) throw ValidationError("lo", "must be strictly below hi");

  const auto signal = [&](double value) -> bool {
    const Instance probe = with_param(inst, param_path, value);
    validate(probe);
    if (kind == BoundaryKind::Adoption) return equilibrium(probe).adopted;
    // Capacity: is the adoption plan capacity-bound?
    double unconstrained_sum = 0.0;
    for (const Product& p : probe.products) unconstrained_sum += foc_quantity(p, 0.0);
    return detail::capacity_binds(unconstrained_sum, probe.capacity);
  };

  const bool at_lo = signal(lo);
  if (at_lo == signal(hi)) {
    throw BracketError("find_boundary: same classification at both bracket ends");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (signal(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

void append_number(std::string& row, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  row += buf;
}

}  // namespace

void emit_csv(const std::vector<RegionCell>& cells, std::ostream& out) {
  if (cells.empty()) throw ValidationError("cells", "nothing to emit");
  const std::size_t dims = cells.front().coords.size();
  const std::size_t n = cells.front().wholesale.size();

  std::string header = "coord1";
  if (dims > 1) header += ",coord2";
  header += ",case,v,pi_M,pi_R";
  for (std::size_t i = 1; i <= n; ++i) header += ",w_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) header += ",q_" + std::to_string(i);
  header += ",lambda\n";
  out << header;

  for (const RegionCell& cell : cells) {
    if (cell.coords.size() != dims || cell.wholesale.size() != n ||
        cell.quantity.size() != n) {
      throw ValidationError("cells", "inconsistent cell shapes");
    }
    std::string row;
    for (double c : cell.coords) {
      append_number(row, c);
      row += ',';
    }
    row += to_string(cell.label);
    row += cell.adopted ? ",1," : ",0,";
    append_number(row, cell.manufacturer_profit);
    row += ',';
    append_number(row, cell.retailer_profit);
    for (double w : cell.wholesale) {
      row += ',';
      append_number(row, w);
    }
    for (double q : cell.quantity) {
      row += ',';
      append_number(row, q);
    }
    row += ',';
    append_number(row, cell.shadow_price);
    row += '\n';
    out << row;
  }
}

void emit_csv(const std::vector<RegionCell>& cells, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  emit_csv(cells, out);
  out.flush();
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace printopt
