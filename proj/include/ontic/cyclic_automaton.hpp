#pragma once

#include <vector>

#include "ontic/common.hpp"

namespace ontic {

/// Period-N deterministic cycle with elementary time step delta_t.
class CycleConfig {
 public:
  CycleConfig(int states, double delta_t);

  int states() const { return states_; }
  double delta_t() const { return delta_t_; }
  /// Angular frequency 2*pi/(N*delta_t).
  double omega() const { return omega_; }
  double period() const { return states_ * delta_t_; }

 private:
  int states_;
  double delta_t_;
  double omega_;
};

/// One ontological basis state |x>^ont, 0 <= x < N.
class OntState {
 public:
  OntState(int index, const CycleConfig& cfg);
  int index() const { return index_; }
  friend bool operator==(const OntState&, const OntState&) = default;

 private:
  explicit OntState(int index) : index_(index) {}
  friend OntState evolve_step(OntState, const CycleConfig&);
  int index_;
};

/// x -> (x+1) mod N.
OntState evolve_step(OntState state, const CycleConfig& cfg);

/// Permutation matrix U(delta_t)^steps acting on ontological amplitudes:
/// column x carries a single 1 in row (x+steps) mod N.
ComplexMatrix evolution_matrix(const CycleConfig& cfg, long steps);

/// E_n = n*omega, n = 0..N-1. E_0 is pinned to zero; no zero-point shift.
std::vector<double> energy_levels(const CycleConfig& cfg);

enum class BasisDirection { ont_to_energy, energy_to_ont };

/// Discrete Fourier map between ontological and energy amplitudes.
///
/// The energy eigenstates are |n>^E = N^{-1/2} sum_x exp(2 pi i n x/N) |x>^ont,
/// so the energy_to_ont matrix has entries exp(+2 pi i n x/N)/sqrt(N) and the
/// ont_to_energy matrix is its conjugate transpose.  With this sign
/// U |n>^E = exp(-i E_n delta_t) |n>^E, i.e. amplitudes rotate as exp(-i omega n t).
struct BasisChange {
  ComplexMatrix matrix;
  BasisDirection direction;
};

BasisChange basis_change(const CycleConfig& cfg, BasisDirection direction);

}  // namespace ontic
