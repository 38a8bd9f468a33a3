#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ontic/mode_lattice.hpp"

namespace ontic {

enum class EvolutionMethod { spectral, convolution_F2, leapfrog_second_order };

/// How the cubic term is applied by the leapfrog integrator.
enum class CubicMode {
  real_field,       // b real, conserved energy available
  complex_literal,  // b^3 taken literally on complex b; experimental, nothing is conserved
};

std::string to_string(EvolutionMethod);
std::string to_string(CubicMode);

struct EvolutionRun {
  MomentumLattice lattice;
  EvolutionMethod method = EvolutionMethod::spectral;
  Dispersion dispersion = Dispersion::continuum;
  CubicMode cubic = CubicMode::real_field;
  double dt = 0.0;
  long steps = 0;
  double coupling = 0.0;
  std::vector<ComplexField> snapshots;  // position space, strictly increasing times
  std::vector<double> energy_times;     // leapfrog real-field runs only
  std::vector<double> energies;
  std::optional<ComplexField> final_velocity;
};

/// Position-space initial data b(x) = A exp(-|x - x0|^2 / (2 sigma^2) + i k0 . x).
/// Entries of centre and k0 beyond the lattice dimension are ignored.
ComplexField gaussian_packet(const MomentumLattice& lattice, std::array<double, 3> centre, double sigma,
                             std::array<double, 3> k0, double amplitude = 1.0);

/// Snapshots every record_every steps (and at the end) of exact per-mode evolution.
EvolutionRun run_spectral(const ComplexField& initial, const MomentumLattice& lattice, double dt,
                          long steps, long record_every = 1,
                          Dispersion dispersion = Dispersion::continuum);

/// Free propagation by convolution with the lattice F2 kernel, through the
/// transform.  Only the free theory is handled; coupling != 0 throws.
ComplexField evolve_convolution(const ComplexField& initial, const MomentumLattice& lattice, double t,
                                double coupling = 0.0, Dispersion dispersion = Dispersion::continuum);

/// Lattice F2 kernel K(z) = (1/n) sum_k exp(i k.z - i omega(k) t) on the grid offsets z,
/// by the explicit (n^2) mode sum.  Cutoff policy applies to excluded modes.
ComplexField lattice_f2_kernel(const MomentumLattice& lattice, double t,
                               Dispersion dispersion = Dispersion::continuum);

/// b(x, t) = sum_y K(x - y) b(y, 0) as an explicit double loop.  Limited to
/// lattices of at most 4096 points.
ComplexField evolve_convolution_literal(const ComplexField& initial, const MomentumLattice& lattice,
                                        double t, double coupling = 0.0,
                                        Dispersion dispersion = Dispersion::continuum);

struct DerivativeDefect {
  double dt = 0.0;
  double max_defect = 0.0;  // max_x |(b(dt) - b(-dt)) / (2 dt) + i (F1 * b)(x)|
};

/// Centred time difference of the spectrally evolved field against -i times the
/// omega-multiplier (F1 convolution).  Accepts either field space.
DerivativeDefect time_derivative_check(const ComplexField& b, const MomentumLattice& lattice, double dt);

struct ResidualReport {
  std::vector<double> dx;  // axis-0 spacing per refinement level
  std::vector<double> dt;
  std::vector<double> max_residual;
  std::vector<double> l2_residual;  // sqrt(sum |r|^2 dV / interior time levels)
  std::vector<double> ratios;       // max_residual[i] / max_residual[i+1]
};

/// Residual of the centred discrete operator Lap_h b - D_tt b - M^2 b over the
/// interior snapshots of one run; needs >= 3 snapshots at the run's uniform dt.
/// The returned report has one level and no ratios.
ResidualReport kg_residual(const EvolutionRun& run);

struct RefinementSpec {
  LatticeSpec base;               // coarsest lattice
  std::array<double, 3> centre{};
  double sigma = 1.0;
  std::array<double, 3> k0{};
  double dt = 0.1;                // coarsest step
  double duration = 1.0;          // evolved time per level
  int levels = 4;
};

/// Runs spectral evolution of the same packet with grid points doubled and dt halved
/// at each level and collects the residual of each level plus the successive ratios.
ResidualReport kg_refinement_study(const RefinementSpec& spec);

struct LeapfrogOptions {
  CubicMode cubic = CubicMode::real_field;
  long record_every = 1;  // snapshot cadence in steps; 0 keeps only the first and last
  long energy_every = 1;
  double abort_growth = 10.0;  // |E| beyond this multiple of |E0| aborts
};

/// Stability bound 2 / max lattice frequency of the linear part.
double leapfrog_stability_bound(const MomentumLattice& lattice);

/// Kick-drift-kick leapfrog for d_t^2 b = Lap_h b - M^2 b - (lambda/6) b^3 on position-space data.
/// Requires dt below the stability bound; real_field mode needs real b and b_dot.
EvolutionRun leapfrog_interact(const ComplexField& b0, const ComplexField& b_dot0,
                               const MomentumLattice& lattice, double coupling, double dt, long steps,
                               const LeapfrogOptions& options = {});

/// E = sum [b_dot^2/2 + (forward gradient)^2/2 + M^2 b^2/2 + lambda b^4/24] dV, real parts only.
double field_energy(const ComplexField& b, const ComplexField& b_dot, const MomentumLattice& lattice,
                    double coupling);

/// max_n |E_n - E_0| / |E_0| over the recorded energies.
double relative_energy_drift(const EvolutionRun& run);

/// Forward n steps, velocity reversed, n steps again; returns max abs
/// difference of the returned field and reversed velocity against the start.
double reversibility_error(const ComplexField& b0, const ComplexField& b_dot0,
                           const MomentumLattice& lattice, double coupling, double dt, long steps);

struct FrontReport {
  std::vector<double> times;
  std::vector<double> peaks;  // unwrapped peak position along axis 0
  double speed = 0.0;
  double expected = 0.0;      // group velocity at k0
  double max_displacement = 0.0;
  double noise_floor = 0.0;
  bool trackable = true;
  std::string diagnostic;
};

/// Envelope peak of |b|^2 along axis 0 of a 1D run (parabolic refinement of the
/// maximum), unwrapped across the periodic box, then a least-squares line in t.
/// Loss of the peak (below 5% of its initial height) marks the run untrackable.
FrontReport wavefront_measure(const EvolutionRun& run, double k0);

}  // namespace ontic
