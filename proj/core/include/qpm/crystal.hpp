#pragma once

#include <utility>

namespace qpm::crystal {

// Monoclinic unit cell. Lengths in angstrom, beta in degrees.
struct UnitCell {
  double a_angstrom = 0.0;
  double b_angstrom = 0.0;
  double c_angstrom = 0.0;
  double beta_deg = 0.0;
  int molecules_per_cell = 0;
  std::pair<double, double> transparency_window_um{0.0, 0.0};

  void validate() const; // throws DomainError on violated invariants
};

// Orientation of the molecule inside the cell: angle between the crystal b
// axis and the donor-acceptor charge-transfer axis, and between the molecular
// mean plane and the (101) plane. Both in [0, 90] degrees.
struct MolecularFrame {
  double ct_axis_angle_deg = 0.0;
  double mean_plane_angle_deg = 0.0;

  void validate() const;
};

// Sequence of evenly spaced molecular interaction layers along the
// propagation axis. One molecule = one layer.
struct LayerStack {
  double crystal_length_um = 0.0;
  double layer_spacing_angstrom = 0.0;
  long layer_count = 0;
};

enum class PropagationAxis { A, B, C };

// Builds the layer stack for propagation along the crystal b axis (the only
// supported axis): layer_count = floor(length / b) * molecules_per_cell,
// layers spread evenly over the length.
LayerStack build_stack(const UnitCell& cell, double length_um,
                       PropagationAxis axis = PropagationAxis::B);

// Per-molecule cross-section a*c*sin(beta) presented to a beam along b [A^2].
double molecule_cross_section(const UnitCell& cell);

} // namespace qpm::crystal
