#pragma once

#include <utility>
#include <vector>

namespace qpm::huckel {

// A conjugated pi system as a topological graph. Site energies and bond
// resonance factors are dimensionless Huckel parameters: the Coulomb shift
// h_i and bond scaling k_ij, both in units of beta with alpha as the zero
// reference.
struct PiSystem {
  int atom_count = 0;
  std::vector<std::pair<int, int>> bonds;
  std::vector<double> alpha_shift;  // per atom, size == atom_count
  std::vector<double> bond_factor;  // per bond, size == bonds.size()
  int electron_count = 0;

  void validate() const;

  // N-membered ring, h = 0, k = 1, one electron per atom. N >= 3.
  static PiSystem ring(int n);
};

// Orbital energies x_k (energy = alpha + x_k beta) sorted ascending in x_k.
// Because beta < 0 the most bonding orbital is the LAST entry; occupation
// fills from the top of this list downward. coefficients[k][i] is the
// weight of atom i in orbital k; densities[i] = sum over occupied orbitals
// of occupancy * C_ki^2.
struct MOResult {
  std::vector<double> energies;
  std::vector<std::vector<double>> coefficients;
  std::vector<double> densities;
};

// Diagonalizes the Huckel matrix (H_ii = h_i, H_ij = k_ij on bonds) and
// fills the lowest-energy orbitals with electron_count/2 pairs. A partially
// occupied degenerate shell is filled fractionally and evenly, which keeps
// densities invariant under graph automorphisms.
MOResult solve(const PiSystem& system);

// q_acceptor - q_donor. Positive when pi density piles up on the acceptor.
double density_asymmetry(const MOResult& result, int acceptor_atom,
                         int donor_atom);

// Per-orbital per-atom weights |C_ki|^2 averaged over each degenerate group
// (energies within 1e-9 of each other). Individual degenerate eigenvectors
// are basis-dependent; the group average is not.
std::vector<std::vector<double>> symmetrized_weights(const MOResult& result);

} // namespace qpm::huckel
