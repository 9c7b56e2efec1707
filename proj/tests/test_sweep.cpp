#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "printopt/errors.hpp"
#include "printopt/sweep.hpp"
#include "test_support.hpp"

using namespace printopt;
using namespace printopt::testing;

namespace {

const std::string kRepo = PRINTOPT_REPO_DIR;

std::vector<CaseLabel> compressed_labels(const std::vector<RegionCell>& cells) {
  std::vector<CaseLabel> seq;
  for (const RegionCell& cell : cells) {
    if (seq.empty() || seq.back() != cell.label) seq.push_back(cell.label);
  }
  return seq;
}

std::string csv_string(const std::vector<RegionCell>& cells) {
  std::ostringstream out;
  emit_csv(cells, out);
  return out.str();
}

SweepSpec three_product_cp3_spec() {
  SweepSpec spec;
  spec.axis = {"products[2].c_p", 1.0, 150.0, 300};
  return spec;
}

}  // namespace

TEST_CASE("parameter paths address instance fields") {
  const Instance tight = tight_capacity_instance(5.0);
  CHECK(get_param(tight, "K") == 10.0);
  CHECK(get_param(tight, "Q") == 8.0);
  CHECK(get_param(tight, "products[1].c_p") == 5.0);
  CHECK(get_param(tight, "products[0].demand.upper") == 10.0);

  const Instance bumped = with_param(tight, "products[1].c_p", 7.5);
  CHECK(get_param(bumped, "products[1].c_p") == 7.5);
  CHECK(get_param(tight, "products[1].c_p") == 5.0);  // original untouched
  CHECK(get_param(with_param(tight, "products[0].demand.upper", 12.0),
                  "products[0].demand.upper") == 12.0);

  CHECK_THROWS_AS((void)get_param(tight, "products[5].c_p"), ValidationError);
  CHECK_THROWS_AS((void)get_param(tight, "products[0].volume"), ValidationError);
  CHECK_THROWS_AS((void)get_param(tight, "nonsense"), ValidationError);

  Instance tab = tight;
  tab.products[0].demand = DemandModel::tabulated({{0, 0}, {4, 0.6}, {10, 1}});
  CHECK_THROWS_AS((void)with_param(tab, "products[0].demand.upper", 12.0), ValidationError);
}

TEST_CASE("classify names the equilibrium case") {
  CHECK(classify(tight_capacity_instance(5.0)) == "Case1");
  CHECK(classify(tight_capacity_instance(11.0)) == "Case2");
  CHECK(classify(tight_capacity_instance(18.0)) == "Case3");
  CHECK(classify(cost_plane_instance(20.0, 26.0)) == "Case2");
  CHECK(classify(cost_plane_instance(20.0, 29.0)) == "Case3");
}

TEST_CASE("three-product print-cost sweep walks Case1 -> Case2 -> Case3") {
  const auto cells = sweep(three_product_instance(20.0), three_product_cp3_spec());
  REQUIRE(cells.size() == 300);
  const auto seq = compressed_labels(cells);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == CaseLabel::CapacityBound);
  CHECK(seq[1] == CaseLabel::Unconstrained);
  CHECK(seq[2] == CaseLabel::NoAdoption);

  double last_case1 = 0.0, first_case2 = 0.0, last_case2 = 0.0, first_case3 = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i - 1].label == CaseLabel::CapacityBound &&
        cells[i].label == CaseLabel::Unconstrained) {
      last_case1 = cells[i - 1].coords[0];
      first_case2 = cells[i].coords[0];
    }
    if (cells[i - 1].label == CaseLabel::Unconstrained &&
        cells[i].label == CaseLabel::NoAdoption) {
      last_case2 = cells[i - 1].coords[0];
      first_case3 = cells[i].coords[0];
    }
  }
  // Derived boundaries sit inside the transition cells.
  CHECK(last_case1 < 23.625);
  CHECK(first_case2 > 23.625);
  CHECK(last_case2 < 43.7697);
  CHECK(first_case3 > 43.7697);

  SUBCASE("boundary bisection lands inside the same transition") {
    const double cap = find_boundary(three_product_instance(20.0), "products[2].c_p",
                                     BoundaryKind::Capacity, 1.0, 40.0);
    CHECK(cap > last_case1);
    CHECK(cap < first_case2);
    const double adopt = find_boundary(three_product_instance(20.0), "products[2].c_p",
                                       BoundaryKind::Adoption, 30.0, 60.0);
    CHECK(adopt > last_case2);
    CHECK(adopt < first_case3);
    CHECK(cap == doctest::Approx(23.625).epsilon(1e-4));
    CHECK(adopt == doctest::Approx(43.7697).epsilon(1e-4));
  }
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
  const Instance line3 = three_product_instance(20.0);
  SweepSpec spec = three_product_cp3_spec();
  spec.axis.steps = 60;
  const std::string serial = csv_string(sweep(line3, spec, 1));
  const std::string parallel = csv_string(sweep(line3, spec, 4));
  const std::string again = csv_string(sweep(line3, spec));
  CHECK(serial == parallel);
  CHECK(serial == again);
}

TEST_CASE("three-product sweep matches the golden CSV byte for byte") {
  const auto cells = sweep(three_product_instance(20.0), three_product_cp3_spec());
  std::ifstream golden(kRepo + "/tests/golden/three_product_cp3_sweep.csv", std::ios::binary);
  REQUIRE(golden);
  std::ostringstream expected;
  expected << golden.rdbuf();
  CHECK(csv_string(cells) == expected.str());
}

TEST_CASE("two-dimensional sweep covers the demand plane") {
  SweepSpec spec;
  spec.axis = {"products[0].demand.upper", 5.0, 400.0, 80};
  spec.second = AxisSpec{"products[1].demand.upper", 7.5, 600.0, 80};
  const auto cells = sweep(demand_growth_instance(100, 150), spec);
  REQUIRE(cells.size() == 80 * 80);

  // Row-major ordering in the axis coordinates.
  CHECK(cells[0].coords == std::vector<double>{5.0, 7.5});
  CHECK(cells[1].coords[0] == 5.0);
  CHECK(cells[80].coords[0] == doctest::Approx(10.0));

  // Along the diagonal U2 = 1.5 U1 the regimes appear in the documented order.
  std::vector<RegionCell> diagonal;
  for (int i = 0; i < 80; ++i) diagonal.push_back(cells[i * 80 + i]);
  const auto seq = compressed_labels(diagonal);
  const std::vector<CaseLabel> expected{CaseLabel::NoAdoption, CaseLabel::Unconstrained,
                                        CaseLabel::CapacityBound, CaseLabel::NoAdoption};
  CHECK(seq == expected);
}

TEST_CASE("cells with broken parameters become error cells") {
  SweepSpec spec;
  spec.axis = {"products[0].c_m", 10.0, 60.0, 6};  // r = 50, so 60 is invalid
  const auto cells = sweep(cost_plane_instance(20.0, 26.0), spec);
  REQUIRE(cells.size() == 6);
  int errors = 0;
  for (const auto& cell : cells) {
    if (cell.label == CaseLabel::Error) ++errors;
  }
  CHECK(errors == 1);
  CHECK(cells.back().label == CaseLabel::Error);
  CHECK(cells.back().wholesale.size() == 2);

  SUBCASE("error cells keep their place in the CSV") {
    const std::string csv = csv_string(cells);
    CHECK(csv.find("error") != std::string::npos);
  }
}

TEST_CASE("sweep specs are validated") {
  const Instance tight = tight_capacity_instance(5.0);
  SweepSpec spec;
  spec.axis = {"products[1].c_p", 5.0, 5.0, 10};
  CHECK_THROWS_AS((void)sweep(tight, spec), ValidationError);
  spec.axis = {"products[1].c_p", 5.0, 10.0, 1};
  CHECK_THROWS_AS((void)sweep(tight, spec), ValidationError);
  spec.axis = {"products[1].banana", 5.0, 10.0, 10};
  CHECK_THROWS_AS((void)sweep(tight, spec), ValidationError);
}

TEST_CASE("find_boundary needs a real bracket") {
  CHECK_THROWS_AS((void)find_boundary(tight_capacity_instance(5.0), "products[1].c_p",
                                      BoundaryKind::Adoption, 1.0, 5.0),
                  BracketError);
}

TEST_CASE("tight-capacity instance boundaries") {
  const double cap = find_boundary(tight_capacity_instance(10.0), "products[1].c_p",
                                   BoundaryKind::Capacity, 5.0, 15.0);
  CHECK(cap == doctest::Approx(32.0 / 3.0).epsilon(1e-5));
  const double adopt = find_boundary(tight_capacity_instance(10.0), "products[1].c_p",
                                     BoundaryKind::Adoption, 5.0, 15.0);
  CHECK(adopt == doctest::Approx(11.1305755).epsilon(1e-5));
}

TEST_CASE("retail prices are sweepable axes") {
  // Low margins keep traditional production; high prices push orders into the
  // printer's capacity.
  Instance inst;
  inst.products = {uniform_product(31, 15, 10, 100), uniform_product(35, 30, 20, 150)};
  inst.adoption_cost = 400;
  inst.capacity = 90;
  SweepSpec spec;
  spec.axis = {"products[0].r", 31.0, 120.0, 10};
  spec.second = AxisSpec{"products[1].r", 35.0, 240.0, 10};
  const auto cells = sweep(inst, spec);
  REQUIRE(cells.size() == 100);
  CHECK(cells.front().label == CaseLabel::NoAdoption);
  CHECK(cells.back().label == CaseLabel::CapacityBound);
  for (const auto& cell : cells) CHECK(cell.label != CaseLabel::Error);
}

TEST_CASE("printing can win even when it costs more per unit") {
  SweepSpec spec;
  spec.axis = {"products[0].c_p", 1.0, 45.0, 23};
  spec.second = AxisSpec{"products[1].c_p", 1.0, 95.0, 48};
  const auto cells = sweep(cost_plane_instance(20.0, 26.0), spec);
  int adopted_above_cm2 = 0;
  for (const auto& cell : cells) {
    if (cell.adopted && cell.coords[1] > 30.0) ++adopted_above_cm2;
  }
  CHECK(adopted_above_cm2 > 0);
}

TEST_CASE("a third product can flip the equilibrium to printing") {
  Instance two;
  two.products = {uniform_product(50, 15, 16, 100), uniform_product(100, 30, 31, 150)};
  two.adoption_cost = 0;
  two.capacity = 170;
  CHECK(classify(two) == "Case3");
  CHECK(classify(three_product_instance(40.0)) == "Case2");  // same pair plus product 3
}

TEST_CASE("csv layout") {
  const Instance tight = tight_capacity_instance(5.0);
  SweepSpec spec;
  spec.axis = {"products[1].c_p", 5.0, 6.0, 2};
  const auto cells = sweep(tight, spec);
  const std::string csv = csv_string(cells);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "coord1,case,v,pi_M,pi_R,w_1,w_2,q_1,q_2,lambda");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 2);
  CHECK(csv.back() == '\n');
  CHECK(csv.find("49.85714286") != std::string::npos);  // 10 significant digits

  SUBCASE("one cell gives a two-line file") {
    const std::vector<RegionCell> one{cells[0]};
    std::istringstream count(csv_string(one));
    int n = 0;
    while (std::getline(count, row)) ++n;
    CHECK(n == 2);
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(csv_string({}), ValidationError);
  }
  SUBCASE("two-dimensional header gains coord2") {
    SweepSpec spec2 = spec;
    spec2.second = AxisSpec{"K", 0.0, 10.0, 2};
    const std::string csv2 = csv_string(sweep(tight, spec2));
    CHECK(csv2.rfind("coord1,coord2,case,", 0) == 0);
  }
}
