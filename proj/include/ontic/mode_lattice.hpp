#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ontic/common.hpp"

namespace ontic {

/// What happens to modes with |k| > cutoff during spectral evolution.
enum class CutoffPolicy {
  freeze,  // phase not advanced; the mode keeps its value
  zero,    // mode removed from the field
};

/// Which frequency table drives the per-mode rotation.
enum class Dispersion {
  continuum,  // omega(k) = sqrt(k^2 + M^2)
  lattice,    // symbol of the centred second-difference Laplacian
};

struct LatticeSpec {
  std::vector<double> box_lengths;  // L_i > 0, one per axis, 1 <= D <= 3
  std::vector<int> grid_points;     // n_i, positive and even
  double mass = 0.0;                // M >= 0
  std::optional<double> cutoff;     // Lambda > 0 when set
  CutoffPolicy cutoff_policy = CutoffPolicy::freeze;
};

/// Periodic box with its momentum grid and dispersion table.
///
/// Flat indices are row-major with the last axis fastest.  Along each axis
/// grid index j maps to the integer m = j for j < n/2 and m = j - n otherwise,
/// so m covers [-n/2, n/2) and k = 2 pi m / L.  The Nyquist mode -n/2 has a
/// single representative.
class MomentumLattice {
 public:
  explicit MomentumLattice(LatticeSpec spec);

  int dims() const { return static_cast<int>(spec_.grid_points.size()); }
  int points(int axis) const { return spec_.grid_points.at(axis); }
  const std::vector<int>& shape() const { return spec_.grid_points; }
  double box_length(int axis) const { return spec_.box_lengths.at(axis); }
  double spacing(int axis) const { return box_length(axis) / points(axis); }
  std::size_t size() const { return total_; }
  double volume() const;
  double cell_volume() const;
  double mass() const { return spec_.mass; }
  std::optional<double> cutoff() const { return spec_.cutoff; }
  CutoffPolicy cutoff_policy() const { return spec_.cutoff_policy; }
  const LatticeSpec& spec() const { return spec_; }

  std::array<int, 3> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const int> index) const;

  /// Integer mode label m_i along each axis.
  std::array<int, 3> mode_number(std::size_t flat) const;
  std::array<double, 3> wave_vector(std::size_t flat) const;
  std::array<double, 3> position(std::size_t flat) const;
  double k_squared(std::size_t flat) const { return k2_[flat]; }
  double omega(std::size_t flat) const { return omega_[flat]; }
  double lattice_omega(std::size_t flat) const { return lattice_omega_[flat]; }
  double frequency(std::size_t flat, Dispersion d) const {
    return d == Dispersion::continuum ? omega_[flat] : lattice_omega_[flat];
  }
  bool excluded(std::size_t flat) const { return excluded_[flat] != 0; }
  std::span<const double> omegas() const { return omega_; }

  /// Largest lattice frequency sqrt(sum_i 4/dx_i^2 + M^2).
  double max_lattice_omega() const;

 private:
  LatticeSpec spec_;
  std::size_t total_ = 0;
  std::vector<double> k2_;
  std::vector<double> omega_;
  std::vector<double> lattice_omega_;
  std::vector<unsigned char> excluded_;
};

/// Validates and builds; DomainError on odd or non-positive grid sizes,
/// bad lengths, M < 0 or a non-positive cutoff.
MomentumLattice build_lattice(LatticeSpec spec);

enum class FieldSpace { position, momentum };

/// Complex field samples over the grid at one time.  b(x) is not required to
/// be real: the b~(k) modes are independent.
struct ComplexField {
  FieldSpace space = FieldSpace::position;
  std::vector<int> shape;
  std::vector<Complex> values;
  double time = 0.0;
};

ComplexField make_field(const MomentumLattice& lattice, FieldSpace space, double time = 0.0);

/// b~(k, t) = exp(-i omega(k) t) b~(k, 0) for every mode; excluded modes
/// follow the lattice's cutoff policy.  Pure elementwise map.
ComplexField spectral_evolve(const ComplexField& field, const MomentumLattice& lattice, double t,
                             Dispersion dispersion = Dispersion::continuum);

/// Unitary DFT with 1/sqrt(total points) in both directions:
///   b~(k) = N^{-1/2} sum_x exp(-i k.x) b(x),   b(x) = N^{-1/2} sum_k exp(i k.x) b~(k).
ComplexField to_momentum(const ComplexField& field, const MomentumLattice& lattice);
ComplexField to_position(const ComplexField& field, const MomentumLattice& lattice);

/// Throws DomainError if the field shape does not match the lattice.
void check_shape(const ComplexField& field, const MomentumLattice& lattice);

double norm_squared(const ComplexField& field);
double max_abs_difference(const ComplexField& x, const ComplexField& y);

}  // namespace ontic
