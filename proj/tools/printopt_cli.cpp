// printopt: solve, sweep, and verify printer-adoption equilibria from
// instance config files.
//
// Exit codes: 0 success, 1 validation error, 2 numerical (bracket) failure,
// 3 I/O failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "printopt/config.hpp"
#include "printopt/errors.hpp"
#include "printopt/multi_product.hpp"
#include "printopt/oracle.hpp"
#include "printopt/sweep.hpp"

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void print_solution(const printopt::Instance& inst, const printopt::EquilibriumSolution& sol) {
  std::cout << "case: " << printopt::to_string(sol.label) << "\n";
  std::cout << "adopt: " << (sol.adopted ? 1 : 0) << "\n";
  std::cout << "pi_M: " << num(sol.manufacturer_profit) << "\n";
  std::cout << "pi_R: " << num(sol.retailer_profit) << "\n";
  std::cout << "lambda: " << num(sol.shadow_price) << "\n";
  if (sol.corner) std::cout << "corner: 1\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    std::cout << "product " << i + 1 << ": w = " << num(sol.wholesale[i])
              << ", q = " << num(sol.quantity[i]) << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Stackelberg equilibria for printer adoption across a product line"};
  app.require_subcommand(1);

  std::string config_path;
  std::string param, param2, out_path, kind = "adoption";
  double from = 0, to = 0, from2 = 0, to2 = 0, lo = 0, hi = 0;
  int steps = 0, steps2 = 0, threads = 0;
  int grid_n = 400;
  std::int64_t mc_samples = 1'000'000;
  std::uint64_t seed = 20240901;

  CLI::App* solve = app.add_subcommand("solve", "print the equilibrium of an instance");
  solve->add_option("config", config_path, "instance config file")->required();

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "evaluate the equilibrium across a parameter grid (CSV)");
  sweep_cmd->add_option("config", config_path)->required();
  sweep_cmd->add_option("--param", param, "parameter path, e.g. products[1].c_p")->required();
  sweep_cmd->add_option("--from", from)->required();
  sweep_cmd->add_option("--to", to)->required();
  sweep_cmd->add_option("--steps", steps, "number of grid points")->required();
  sweep_cmd->add_option("--param2", param2, "second axis parameter path");
  sweep_cmd->add_option("--from2", from2);
  sweep_cmd->add_option("--to2", to2);
  sweep_cmd->add_option("--steps2", steps2);
  sweep_cmd->add_option("--out", out_path, "write CSV here instead of stdout");
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware default)");

  CLI::App* boundary =
      app.add_subcommand("boundary", "bisect a case boundary along one parameter");
  boundary->add_option("config", config_path)->required();
  boundary->add_option("--param", param)->required();
  boundary->add_option("--kind", kind, "adoption|capacity")
      ->check(CLI::IsMember({"adoption", "capacity"}));
  boundary->add_option("--lo", lo)->required();
  boundary->add_option("--hi", hi)->required();

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "cross-check the analytic solution against the oracles");
  verify_cmd->add_option("config", config_path)->required();
  verify_cmd->add_option("--grid", grid_n, "grid steps per product axis");
  verify_cmd->add_option("--mc", mc_samples, "Monte-Carlo samples per product");
  verify_cmd->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const printopt::Instance inst = printopt::load_instance(config_path);

  if (solve->parsed()) {
    print_solution(inst, printopt::equilibrium(inst));
    return 0;
  }
  if (sweep_cmd->parsed()) {
    printopt::SweepSpec spec;
    spec.axis = {param, from, to, steps};
    if (!param2.empty()) spec.second = printopt::AxisSpec{param2, from2, to2, steps2};
    const auto cells = printopt::sweep(inst, spec, threads);
    if (out_path.empty()) {
      printopt::emit_csv(cells, std::cout);
    } else {
      printopt::emit_csv(cells, out_path);
    }
    return 0;
  }
  if (boundary->parsed()) {
    const auto boundary_kind = kind == "capacity" ? printopt::BoundaryKind::Capacity
                                                  : printopt::BoundaryKind::Adoption;
    std::cout << num(printopt::find_boundary(inst, param, boundary_kind, lo, hi)) << "\n";
    return 0;
  }
  const auto report = printopt::verify(inst, grid_n, mc_samples, seed);
  std::cout << "analytic_pi: " << num(report.analytic_profit) << "\n";
  std::cout << "oracle_pi: " << num(report.oracle_profit) << "\n";
  std::cout << "abs_gap: " << num(report.abs_gap) << "\n";
  std::cout << "mc_mean: " << num(report.mc_mean) << "\n";
  std::cout << "mc_stderr: " << num(report.mc_std_error) << "\n";
  std::cout << "soc_ok: " << (report.soc_ok ? 1 : 0) << "\n";
  std::cout << "notes: " << report.notes << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const printopt::BracketError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const printopt::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
