#include "qpm/crystal.hpp"

#include <cmath>
#include <string>

#include "qpm/common.hpp"
#include "qpm/constants.hpp"

namespace qpm::crystal {

void UnitCell::validate() const {
  if (!(a_angstrom > 0.0) || !(b_angstrom > 0.0) || !(c_angstrom > 0.0))
    throw DomainError("unit cell: a, b, c must be positive");
  if (!(beta_deg > 0.0) || !(beta_deg < 180.0))
    throw DomainError("unit cell: beta must lie in (0, 180) degrees");
  if (molecules_per_cell < 1)
    throw DomainError("unit cell: molecules_per_cell must be >= 1");
  if (!(transparency_window_um.first < transparency_window_um.second))
    throw DomainError("unit cell: transparency window min must be < max");
}

void MolecularFrame::validate() const {
  if (ct_axis_angle_deg < 0.0 || ct_axis_angle_deg > 90.0)
    throw DomainError("molecular frame: ct_axis_angle_deg outside [0, 90]");
  if (mean_plane_angle_deg < 0.0 || mean_plane_angle_deg > 90.0)
    throw DomainError("molecular frame: mean_plane_angle_deg outside [0, 90]");
}

LayerStack build_stack(const UnitCell& cell, double length_um,
                       PropagationAxis axis) {
  cell.validate();
  if (axis != PropagationAxis::B)
    throw DomainError("build_stack: only propagation along the b axis is supported");
  if (!(length_um > 0.0))
    throw DomainError("build_stack: length must be positive");

  const double length_angstrom = length_um * 1e4;
  // 1e-9 slack absorbs representation noise when the length is an exact
  // multiple of b.
  const double cells = std::floor(length_angstrom / cell.b_angstrom + 1e-9);
  if (cells < 1.0)
    throw DomainError("build_stack: crystal too thin (length < one unit cell along b)");

  LayerStack stack;
  stack.crystal_length_um = length_um;
  stack.layer_count = static_cast<long>(cells) * cell.molecules_per_cell;
  stack.layer_spacing_angstrom = length_angstrom / static_cast<double>(stack.layer_count);
  return stack;
}

double molecule_cross_section(const UnitCell& cell) {
  cell.validate();
  return cell.a_angstrom * cell.c_angstrom *
         std::sin(units::to_radians(cell.beta_deg));
}

} // namespace qpm::crystal
