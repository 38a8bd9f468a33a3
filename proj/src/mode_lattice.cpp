#include "ontic/mode_lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace ontic {

namespace {

int mode_label(int j, int n) { return j < n / 2 ? j : j - n; }

}  // namespace

MomentumLattice::MomentumLattice(LatticeSpec spec) : spec_(std::move(spec)) {
  const auto& n = spec_.grid_points;
  const auto& len = spec_.box_lengths;
  if (n.empty() || n.size() > 3) throw DomainError("lattice dimension must be 1, 2 or 3");
  if (len.size() != n.size()) throw DomainError("box_lengths and grid_points differ in length");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] <= 0 || n[i] % 2 != 0)
      throw DomainError("grid size along axis " + std::to_string(i) +
                        " must be positive and even, got " + std::to_string(n[i]));
    if (!(len[i] > 0.0) || !std::isfinite(len[i]))
      throw DomainError("box length along axis " + std::to_string(i) + " must be positive");
  }
  if (!(spec_.mass >= 0.0) || !std::isfinite(spec_.mass)) throw DomainError("mass must be >= 0");
  if (spec_.cutoff && !(*spec_.cutoff > 0.0)) throw DomainError("cutoff must be positive");

  total_ = 1;
  for (int v : n) total_ *= static_cast<std::size_t>(v);
  k2_.resize(total_);
  omega_.resize(total_);
  lattice_omega_.resize(total_);
  excluded_.resize(total_);
  const double m2 = spec_.mass * spec_.mass;
  for (std::size_t f = 0; f < total_; ++f) {
    const auto k = wave_vector(f);
    double k2 = 0.0;
    double lap = 0.0;
    for (int axis = 0; axis < dims(); ++axis) {
      k2 += k[axis] * k[axis];
      const double s = 2.0 / spacing(axis) * std::sin(0.5 * k[axis] * spacing(axis));
      lap += s * s;
    }
    k2_[f] = k2;
    omega_[f] = std::sqrt(k2 + m2);
    lattice_omega_[f] = std::sqrt(lap + m2);
    excluded_[f] = spec_.cutoff && std::sqrt(k2) > *spec_.cutoff;
  }
}

double MomentumLattice::volume() const {
  double v = 1.0;
  for (double l : spec_.box_lengths) v *= l;
  return v;
}

double MomentumLattice::cell_volume() const { return volume() / static_cast<double>(total_); }

std::array<int, 3> MomentumLattice::multi_index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int axis = dims() - 1; axis >= 0; --axis) {
    const auto n = static_cast<std::size_t>(points(axis));
    idx[axis] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t MomentumLattice::flat_index(std::span<const int> index) const {
  std::size_t flat = 0;
  for (int axis = 0; axis < dims(); ++axis) {
    const int n = points(axis);
    const int j = ((index[axis] % n) + n) % n;
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  }
  return flat;
}

std::array<int, 3> MomentumLattice::mode_number(std::size_t flat) const {
  auto idx = multi_index(flat);
  for (int axis = 0; axis < dims(); ++axis) idx[axis] = mode_label(idx[axis], points(axis));
  return idx;
}

std::array<double, 3> MomentumLattice::wave_vector(std::size_t flat) const {
  const auto m = mode_number(flat);
  std::array<double, 3> k{0.0, 0.0, 0.0};
  for (int axis = 0; axis < dims(); ++axis) k[axis] = kTwoPi * m[axis] / box_length(axis);
  return k;
}

std::array<double, 3> MomentumLattice::position(std::size_t flat) const {
  const auto idx = multi_index(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int axis = 0; axis < dims(); ++axis) x[axis] = idx[axis] * spacing(axis);
  return x;
}

double MomentumLattice::max_lattice_omega() const {
  double s = spec_.mass * spec_.mass;
  for (int axis = 0; axis < dims(); ++axis) s += 4.0 / (spacing(axis) * spacing(axis));
  return std::sqrt(s);
}

MomentumLattice build_lattice(LatticeSpec spec) { return MomentumLattice(std::move(spec)); }

ComplexField make_field(const MomentumLattice& lattice, FieldSpace space, double time) {
  return {space, lattice.shape(), std::vector<Complex>(lattice.size()), time};
}

void check_shape(const ComplexField& field, const MomentumLattice& lattice) {
  if (field.shape != lattice.shape() || field.values.size() != lattice.size())
    throw DomainError("field shape does not match the lattice");
}

ComplexField spectral_evolve(const ComplexField& field, const MomentumLattice& lattice, double t,
                             Dispersion dispersion) {
  check_shape(field, lattice);
  if (field.space != FieldSpace::momentum)
    throw DomainError("spectral_evolve expects a momentum-space field");
  ComplexField out = field;
  out.time = field.time + t;
  for (std::size_t f = 0; f < lattice.size(); ++f) {
    if (lattice.excluded(f)) {
      if (lattice.cutoff_policy() == CutoffPolicy::zero) out.values[f] = 0.0;
      continue;
    }
    out.values[f] *= std::polar(1.0, -lattice.frequency(f, dispersion) * t);
  }
  return out;
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Buffers are always fftw_malloc-aligned so the same codelets run on every
// call; that keeps repeated transforms bitwise reproducible.
ComplexField transform(const ComplexField& field, const MomentumLattice& lattice, int sign,
                       FieldSpace target) {
  check_shape(field, lattice);
  const std::size_t n = lattice.size();
  FftwBuffer in(n), out(n);
  std::copy(field.values.begin(), field.values.end(), reinterpret_cast<Complex*>(in.data));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(lattice.dims(), lattice.shape().data(), in.data, out.data, sign,
                         FFTW_ESTIMATE);
  }
  if (!plan) throw NumericalError("FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  ComplexField result{target, field.shape, std::vector<Complex>(n), field.time};
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const auto* o = reinterpret_cast<const Complex*>(out.data);
  for (std::size_t f = 0; f < n; ++f) result.values[f] = o[f] * norm;
  return result;
}

}  // namespace

ComplexField to_momentum(const ComplexField& field, const MomentumLattice& lattice) {
  if (field.space != FieldSpace::position) throw DomainError("to_momentum expects a position field");
  return transform(field, lattice, FFTW_FORWARD, FieldSpace::momentum);
}

ComplexField to_position(const ComplexField& field, const MomentumLattice& lattice) {
  if (field.space != FieldSpace::momentum) throw DomainError("to_position expects a momentum field");
  return transform(field, lattice, FFTW_BACKWARD, FieldSpace::position);
}

double norm_squared(const ComplexField& field) {
  double s = 0.0;
  for (const auto& v : field.values) s += std::norm(v);
  return s;
}

double max_abs_difference(const ComplexField& x, const ComplexField& y) {
  if (x.values.size() != y.values.size()) throw DomainError("fields differ in size");
  double m = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) m = std::max(m, std::abs(x.values[i] - y.values[i]));
  return m;
}

}  // namespace ontic
