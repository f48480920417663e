#include <cmath>

#include <doctest.h>

#include "qpm/common.hpp"
#include "qpm/crystal.hpp"

using namespace qpm;

namespace {
crystal::UnitCell npp_cell() {
  crystal::UnitCell cell;
  cell.a_angstrom = 5.261;
  cell.b_angstrom = 14.908;
  cell.c_angstrom = 7.185;
  cell.beta_deg = 105.18;
  cell.molecules_per_cell = 2;
  cell.transparency_window_um = {0.5, 2.0};
  return cell;
}
} // namespace

TEST_CASE("layer counts for the NPP cell along b") {
  const auto cell = npp_cell();

  const auto three_um = crystal::build_stack(cell, 3.0);
  CHECK(three_um.layer_count == 4024); // floor(30000/14.908) = 2012 cells

  const auto one_um = crystal::build_stack(cell, 1.0);
  CHECK(one_um.layer_count == 1340); // floor(10000/14.908) = 670 cells

  // exactly one unit cell thick
  const auto one_cell = crystal::build_stack(cell, 14.908e-4);
  CHECK(one_cell.layer_count == 2);
}

TEST_CASE("layer spacing times count reproduces the length") {
  const auto cell = npp_cell();
  for (double length_um : {0.01, 0.5, 1.0, 3.0, 17.3}) {
    const auto stack = crystal::build_stack(cell, length_um);
    CHECK(stack.layer_spacing_angstrom * static_cast<double>(stack.layer_count) ==
          doctest::Approx(length_um * 1e4).epsilon(1e-9));
    CHECK(stack.crystal_length_um == length_um);
  }
}

TEST_CASE("layer count is monotone in crystal length") {
  const auto cell = npp_cell();
  long prev = 0;
  for (int i = 1; i <= 40; ++i) {
    const auto stack = crystal::build_stack(cell, 0.25 * i);
    CHECK(stack.layer_count >= prev);
    prev = stack.layer_count;
  }
}

TEST_CASE("stack construction errors") {
  const auto cell = npp_cell();
  CHECK_THROWS_AS(crystal::build_stack(cell, 0.0), DomainError);
  CHECK_THROWS_AS(crystal::build_stack(cell, -1.0), DomainError);
  // thinner than one cell along b (14.908 A = 0.0014908 um)
  CHECK_THROWS_AS(crystal::build_stack(cell, 0.001), DomainError);
  CHECK_THROWS_AS(crystal::build_stack(cell, 3.0, crystal::PropagationAxis::A),
                  DomainError);
  CHECK_THROWS_AS(crystal::build_stack(cell, 3.0, crystal::PropagationAxis::C),
                  DomainError);
}

TEST_CASE("molecular cross-section a c sin(beta)") {
  const auto cell = npp_cell();
  const double sigma = crystal::molecule_cross_section(cell);
  // 5.261 * 7.185 * sin(105.18 deg) = 36.4813558...
  CHECK(sigma == doctest::Approx(36.4813558).epsilon(1e-7));
  CHECK(std::abs(sigma - 36.5) <= 0.1);

  // a and c enter symmetrically
  auto swapped = cell;
  std::swap(swapped.a_angstrom, swapped.c_angstrom);
  CHECK(crystal::molecule_cross_section(swapped) == sigma);

  // beta = 90 degrees maximizes the section at a*c
  auto ortho = cell;
  ortho.beta_deg = 90.0;
  CHECK(crystal::molecule_cross_section(ortho) ==
        doctest::Approx(5.261 * 7.185).epsilon(1e-12));
  CHECK(crystal::molecule_cross_section(ortho) > sigma);
}

TEST_CASE("unit cell and frame validation") {
  CHECK_NOTHROW(npp_cell().validate());

  auto bad = npp_cell();
  bad.a_angstrom = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  bad = npp_cell();
  bad.beta_deg = 180.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  bad = npp_cell();
  bad.molecules_per_cell = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  bad = npp_cell();
  bad.transparency_window_um = {2.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), DomainError);

  crystal::MolecularFrame frame{58.6, 11.0};
  CHECK_NOTHROW(frame.validate());
  CHECK_THROWS_AS((crystal::MolecularFrame{-1.0, 11.0}.validate()),
                  DomainError);
  CHECK_THROWS_AS((crystal::MolecularFrame{58.6, 91.0}.validate()),
                  DomainError);
}
