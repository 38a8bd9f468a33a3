#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ontic/mode_lattice.hpp"

namespace ontic {

struct EnsembleSpec {
  LatticeSpec lattice;
  long samples = 1;
  std::uint64_t seed = 0;
};

void validate(const EnsembleSpec& spec);

/// One vacuum draw in momentum space: b~(k) = exp(i theta_k), theta_k uniform on [0, 2 pi).
/// Sample i is generated from its own engine seeded by (seed, i), modes in flat order,
/// so any sample can be regenerated alone.
ComplexField sample_vacuum(const EnsembleSpec& spec, const MomentumLattice& lattice, long sample_index);

struct Correlator {
  std::size_t points = 0;
  long samples = 0;
  std::vector<Complex> mean;     // <b*(x) b(y)>, row-major in (x, y)
  std::vector<double> stderr_;   // sqrt(sum |X - mean|^2 / (n (n-1)))
  std::vector<std::size_t> degenerate;  // entries with zero estimated variance

  Complex at(std::size_t x, std::size_t y) const { return mean[x * points + y]; }
  double error(std::size_t x, std::size_t y) const { return stderr_[x * points + y]; }
};

/// Monte-Carlo estimate over spec.samples draws, each optionally evolved
/// spectrally by time t before returning to position space.  Needs >= 100 samples.
/// Samples are accumulated in fixed blocks combined in block order, so the
/// result does not depend on the thread count.
Correlator ensemble_correlator(const EnsembleSpec& spec, std::optional<double> t = std::nullopt,
                               unsigned threads = 1);

/// Same estimator over explicit position-space samples.
Correlator correlator_from_samples(const std::vector<ComplexField>& samples);

struct BoundsCheck {
  double sigmas = 3.0;
  std::size_t diagonal_outside = 0;
  std::size_t off_diagonal_outside = 0;
  double worst_diagonal = 0.0;  // max |C - 1| / stderr on the diagonal
  double worst_off_diagonal = 0.0;
  bool passed() const { return diagonal_outside == 0 && off_diagonal_outside == 0; }
};

/// Compares against the uniform-phase prediction delta_{xy}.
BoundsCheck check_delta_correlator(const Correlator& c, double sigmas = 3.0);

/// Columns x,y,re,im,stderr.
void write_correlator_csv(std::ostream& out, const Correlator& c);

}  // namespace ontic
