#include "qpm/huckel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qpm/common.hpp"

namespace qpm::huckel {

namespace {

constexpr double kDegeneracyTol = 1e-9;

// Shells of (near-)equal energy, as index ranges [begin, end).
std::vector<std::pair<int, int>> degenerate_groups(
    const std::vector<double>& energies) {
  std::vector<std::pair<int, int>> groups;
  const int n = static_cast<int>(energies.size());
  int begin = 0;
  for (int k = 1; k <= n; ++k) {
    if (k == n || std::abs(energies[k] - energies[k - 1]) > kDegeneracyTol) {
      groups.emplace_back(begin, k);
      begin = k;
    }
  }
  return groups;
}

} // namespace

void PiSystem::validate() const {
  if (atom_count < 1) {
    throw DomainError("pi system needs at least one atom");
  }
  if (alpha_shift.size() != static_cast<size_t>(atom_count)) {
    throw DomainError("alpha_shift must have one entry per atom");
  }
  if (bond_factor.size() != bonds.size()) {
    throw DomainError("bond_factor must have one entry per bond");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : bonds) {
    if (i < 0 || i >= atom_count || j < 0 || j >= atom_count) {
      throw DomainError("bond index out of range: (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
    }
    if (i == j) {
      throw DomainError("self bond at atom " + std::to_string(i));
    }
    auto key = std::minmax(i, j);
    if (!seen.insert(key).second) {
      throw DomainError("duplicate bond (" + std::to_string(key.first) + ", " +
                        std::to_string(key.second) + ")");
    }
  }
  if (electron_count <= 0 || electron_count % 2 != 0) {
    throw DomainError("electron count must be positive and even, got " +
                      std::to_string(electron_count));
  }
  if (electron_count > 2 * atom_count) {
    throw DomainError("electron count exceeds 2 per atom");
  }
  // Connectivity: BFS from atom 0 must reach every atom.
  std::vector<std::vector<int>> adj(atom_count);
  for (const auto& [i, j] : bonds) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> visited(atom_count, 0);
  std::vector<int> queue{0};
  visited[0] = 1;
  for (size_t head = 0; head < queue.size(); ++head) {
    for (int next : adj[queue[head]]) {
      if (!visited[next]) {
        visited[next] = 1;
        queue.push_back(next);
      }
    }
  }
  for (int i = 0; i < atom_count; ++i) {
    if (!visited[i]) {
      throw DomainError("pi system is disconnected: atom " + std::to_string(i) +
                        " unreachable from atom 0");
    }
  }
}

PiSystem PiSystem::ring(int n) {
  if (n < 3) throw DomainError("ring needs at least 3 atoms");
  PiSystem sys;
  sys.atom_count = n;
  sys.alpha_shift.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    sys.bonds.emplace_back(i, (i + 1) % n);
    sys.bond_factor.push_back(1.0);
  }
  sys.electron_count = n - n % 2;
  return sys;
}

MOResult solve(const PiSystem& system) {
  system.validate();
  const int n = system.atom_count;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = system.alpha_shift[i];
  for (size_t b = 0; b < system.bonds.size(); ++b) {
    const auto& [i, j] = system.bonds[b];
    h(i, j) = system.bond_factor[b];
    h(j, i) = system.bond_factor[b];
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("Huckel eigensolver failed");
  }

  MOResult result;
  result.energies.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + n);
  result.coefficients.resize(n);
  for (int k = 0; k < n; ++k) {
    result.coefficients[k].resize(n);
    for (int i = 0; i < n; ++i) {
      result.coefficients[k][i] = solver.eigenvectors()(i, k);
    }
  }

  // beta < 0, so bonding orbitals sit at the top of the ascending x list.
  // Fill shells from the top; a shell that cannot take all its electrons as
  // full pairs shares them evenly across its members.
  result.densities.assign(n, 0.0);
  const auto groups = degenerate_groups(result.energies);
  int remaining = system.electron_count;
  for (auto it = groups.rbegin(); it != groups.rend() && remaining > 0; ++it) {
    const int size = it->second - it->first;
    const int taken = std::min(remaining, 2 * size);
    const double occupancy = static_cast<double>(taken) / size;
    for (int k = it->first; k < it->second; ++k) {
      for (int i = 0; i < n; ++i) {
        const double c = result.coefficients[k][i];
        result.densities[i] += occupancy * c * c;
      }
    }
    remaining -= taken;
  }
  return result;
}

double density_asymmetry(const MOResult& result, int acceptor_atom,
                         int donor_atom) {
  const int n = static_cast<int>(result.densities.size());
  if (acceptor_atom < 0 || acceptor_atom >= n || donor_atom < 0 ||
      donor_atom >= n) {
    throw DomainError("atom index out of range");
  }
  return result.densities[acceptor_atom] - result.densities[donor_atom];
}

std::vector<std::vector<double>> symmetrized_weights(const MOResult& result) {
  const int n = static_cast<int>(result.energies.size());
  std::vector<std::vector<double>> weights(n, std::vector<double>(n, 0.0));
  for (const auto& [begin, end] : degenerate_groups(result.energies)) {
    const int size = end - begin;
    std::vector<double> mean(n, 0.0);
    for (int k = begin; k < end; ++k) {
      for (int i = 0; i < n; ++i) {
        const double c = result.coefficients[k][i];
        mean[i] += c * c / size;
      }
    }
    for (int k = begin; k < end; ++k) weights[k] = mean;
  }
  return weights;
}

} // namespace qpm::huckel
