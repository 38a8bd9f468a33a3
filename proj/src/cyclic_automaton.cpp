#include "ontic/cyclic_automaton.hpp"

#include <cmath>
#include <string>

namespace ontic {

CycleConfig::CycleConfig(int states, double delta_t)
    : states_(states), delta_t_(delta_t) {
  if (states < 1) throw DomainError("cycle length N must be >= 1, got " + std::to_string(states));
  if (!(delta_t > 0.0) || !std::isfinite(delta_t))
    throw DomainError("delta_t must be positive and finite");
  omega_ = kTwoPi / (static_cast<double>(states) * delta_t);
}

OntState::OntState(int index, const CycleConfig& cfg) : index_(index) {
  if (index < 0 || index >= cfg.states())
    throw DomainError("ontological state index " + std::to_string(index) + " outside [0, " +
                      std::to_string(cfg.states()) + ")");
}

OntState evolve_step(OntState state, const CycleConfig& cfg) {
  return OntState((state.index_ + 1) % cfg.states());
}

ComplexMatrix evolution_matrix(const CycleConfig& cfg, long steps) {
  if (steps < 0) throw DomainError("evolution_matrix: steps must be >= 0");
  const long n = cfg.states();
  const long shift = steps % n;
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (long x = 0; x < n; ++x) u((x + shift) % n, x) = 1.0;
  return u;
}

std::vector<double> energy_levels(const CycleConfig& cfg) {
  std::vector<double> levels(cfg.states());
  for (int n = 0; n < cfg.states(); ++n) levels[n] = n * cfg.omega();
  return levels;
}

BasisChange basis_change(const CycleConfig& cfg, BasisDirection direction) {
  const int n = cfg.states();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const double sign = direction == BasisDirection::energy_to_ont ? 1.0 : -1.0;
  ComplexMatrix m(n, n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      // Reduce n*x mod N first so the phase argument stays in [0, 2pi).
      const long r = (static_cast<long>(row) * col) % n;
      m(row, col) = std::polar(norm, sign * kTwoPi * static_cast<double>(r) / n);
    }
  }
  return {std::move(m), direction};
}

}  // namespace ontic
