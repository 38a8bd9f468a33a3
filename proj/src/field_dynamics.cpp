#include "ontic/field_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "ontic/kernel_engine.hpp"

namespace ontic {

namespace {

void require_position(const ComplexField& f, const char* what) {
  if (f.space != FieldSpace::position) throw DomainError(std::string(what) + " expects a position-space field");
}

// Per-mode phase factor for a step of length t, honouring the cutoff policy.
Complex mode_phase(const MomentumLattice& lattice, std::size_t f, double t, Dispersion d) {
  if (lattice.excluded(f)) return lattice.cutoff_policy() == CutoffPolicy::zero ? 0.0 : 1.0;
  return std::polar(1.0, -lattice.frequency(f, d) * t);
}

// Periodic neighbour tables, plus[a][f] and minus[a][f] along axis a.
struct Neighbours {
  std::vector<std::vector<std::size_t>> plus, minus;
  std::vector<double> inv_dx2;
};

Neighbours neighbours(const MomentumLattice& lattice) {
  Neighbours nb;
  const int d = lattice.dims();
  nb.plus.resize(d);
  nb.minus.resize(d);
  std::size_t stride = 1;
  for (int a = d - 1; a >= 0; --a) {
    const auto n = static_cast<std::size_t>(lattice.points(a));
    auto& p = nb.plus[a];
    auto& m = nb.minus[a];
    p.resize(lattice.size());
    m.resize(lattice.size());
    for (std::size_t f = 0; f < lattice.size(); ++f) {
      const std::size_t j = (f / stride) % n;
      p[f] = j + 1 < n ? f + stride : f - (n - 1) * stride;
      m[f] = j > 0 ? f - stride : f + (n - 1) * stride;
    }
    stride *= n;
  }
  nb.inv_dx2.resize(d);
  for (int a = 0; a < d; ++a) nb.inv_dx2[a] = 1.0 / (lattice.spacing(a) * lattice.spacing(a));
  return nb;
}

template <class T>
void laplacian(const Neighbours& nb, const std::vector<T>& b, std::vector<T>& out) {
  const std::size_t n = b.size();
  std::fill(out.begin(), out.end(), T(0));
  for (std::size_t a = 0; a < nb.plus.size(); ++a) {
    const auto& p = nb.plus[a];
    const auto& m = nb.minus[a];
    const double w = nb.inv_dx2[a];
    for (std::size_t f = 0; f < n; ++f) out[f] += (b[p[f]] - 2.0 * b[f] + b[m[f]]) * w;
  }
}

template <class T>
void acceleration(const Neighbours& nb, const std::vector<T>& b, double m2, double coupling,
                  std::vector<T>& out) {
  laplacian(nb, b, out);
  const double c = coupling / 6.0;
  for (std::size_t f = 0; f < b.size(); ++f) out[f] -= m2 * b[f] + c * b[f] * b[f] * b[f];
}

double energy_real(const Neighbours& nb, const std::vector<double>& b, const std::vector<double>& v,
                   double m2, double coupling, double cell) {
  double s = 0.0;
  for (std::size_t f = 0; f < b.size(); ++f) {
    double grad = 0.0;
    for (std::size_t a = 0; a < nb.plus.size(); ++a) {
      const double g = b[nb.plus[a][f]] - b[f];
      grad += g * g * nb.inv_dx2[a];
    }
    const double b2 = b[f] * b[f];
    s += 0.5 * v[f] * v[f] + 0.5 * grad + 0.5 * m2 * b2 + coupling / 24.0 * b2 * b2;
  }
  return s * cell;
}

std::vector<double> real_part(const ComplexField& f, const char* what) {
  std::vector<double> out(f.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (f.values[i].imag() != 0.0)
      throw DomainError(std::string(what) + " must be real in real_field mode");
    out[i] = f.values[i].real();
  }
  return out;
}

template <class T>
ComplexField as_field(const MomentumLattice& lattice, const std::vector<T>& v, double time) {
  ComplexField f = make_field(lattice, FieldSpace::position, time);
  for (std::size_t i = 0; i < v.size(); ++i) f.values[i] = v[i];
  return f;
}

template <class T>
EvolutionRun leapfrog(std::vector<T> b, std::vector<T> v, const MomentumLattice& lattice, double coupling,
                      double dt, long steps, const LeapfrogOptions& opt, double t0) {
  EvolutionRun run{lattice, EvolutionMethod::leapfrog_second_order, Dispersion::lattice, opt.cubic,
                   dt, steps, coupling, {}, {}, {}, std::nullopt};
  const auto nb = neighbours(lattice);
  const double m2 = lattice.mass() * lattice.mass();
  const double cell = lattice.cell_volume();
  constexpr bool is_real = std::is_same_v<T, double>;
  std::vector<T> acc(b.size());
  double e0 = 0.0;
  auto record_energy = [&](long step) {
    if constexpr (is_real) {
      const double e = energy_real(nb, b, v, m2, coupling, cell);
      if (step == 0) e0 = e;
      run.energy_times.push_back(t0 + step * dt);
      run.energies.push_back(e);
      if (!std::isfinite(e) || std::abs(e) > opt.abort_growth * std::max(std::abs(e0), 1e-300))
        throw NumericalError("leapfrog instability: energy grew from " + std::to_string(e0) + " to " +
                             std::to_string(e) + " by step " + std::to_string(step));
    }
  };
  run.snapshots.push_back(as_field(lattice, b, t0));
  record_energy(0);
  acceleration(nb, b, m2, coupling, acc);
  for (long s = 1; s <= steps; ++s) {
    for (std::size_t f = 0; f < b.size(); ++f) {
      v[f] += 0.5 * dt * acc[f];
      b[f] += dt * v[f];
    }
    acceleration(nb, b, m2, coupling, acc);
    for (std::size_t f = 0; f < b.size(); ++f) v[f] += 0.5 * dt * acc[f];
    if (opt.energy_every > 0 && (s % opt.energy_every == 0 || s == steps)) record_energy(s);
    if constexpr (!is_real) {
      for (const auto& x : b)
        if (!std::isfinite(std::abs(x)))
          throw NumericalError("leapfrog instability: non-finite field at step " + std::to_string(s));
    }
    if ((opt.record_every > 0 && s % opt.record_every == 0) || s == steps)
      run.snapshots.push_back(as_field(lattice, b, t0 + s * dt));
  }
  run.final_velocity = as_field(lattice, v, t0 + steps * dt);
  return run;
}

}  // namespace

std::string to_string(EvolutionMethod m) {
  switch (m) {
    case EvolutionMethod::spectral: return "spectral";
    case EvolutionMethod::convolution_F2: return "convolution_F2";
    case EvolutionMethod::leapfrog_second_order: return "leapfrog_second_order";
  }
  return "?";
}

std::string to_string(CubicMode m) { return m == CubicMode::real_field ? "real_field" : "complex_literal"; }

ComplexField gaussian_packet(const MomentumLattice& lattice, std::array<double, 3> centre, double sigma,
                             std::array<double, 3> k0, double amplitude) {
  if (!(sigma > 0.0)) throw DomainError("packet width must be positive");
  ComplexField f = make_field(lattice, FieldSpace::position);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto x = lattice.position(i);
    double r2 = 0.0, phase = 0.0;
    for (int a = 0; a < lattice.dims(); ++a) {
      // nearest periodic image of the centre
      const double len = lattice.box_length(a);
      double d = x[a] - centre[a];
      d -= len * std::round(d / len);
      r2 += d * d;
      phase += k0[a] * x[a];
    }
    f.values[i] = std::polar(amplitude * std::exp(-0.5 * r2 / (sigma * sigma)), phase);
  }
  return f;
}

EvolutionRun run_spectral(const ComplexField& initial, const MomentumLattice& lattice, double dt, long steps,
                          long record_every, Dispersion dispersion) {
  require_position(initial, "run_spectral");
  check_shape(initial, lattice);
  if (!(dt > 0.0) || steps < 0) throw DomainError("run_spectral needs dt > 0 and steps >= 0");
  EvolutionRun run{lattice, EvolutionMethod::spectral, dispersion, CubicMode::real_field,
                   dt, steps, 0.0, {}, {}, {}, std::nullopt};
  const ComplexField k0 = to_momentum(initial, lattice);
  run.snapshots.push_back(initial);
  for (long s = 1; s <= steps; ++s) {
    if ((record_every > 0 && s % record_every == 0) || s == steps) {
      // Evolve from t = 0 each time so the phases carry no accumulated rounding.
      auto snap = to_position(spectral_evolve(k0, lattice, s * dt, dispersion), lattice);
      snap.time = initial.time + s * dt;
      run.snapshots.push_back(std::move(snap));
    }
  }
  return run;
}

ComplexField evolve_convolution(const ComplexField& initial, const MomentumLattice& lattice, double t,
                                double coupling, Dispersion dispersion) {
  if (coupling != 0.0) throw DomainError("kernel convolution describes the free theory only (lambda = 0)");
  require_position(initial, "evolve_convolution");
  auto out = to_position(spectral_evolve(to_momentum(initial, lattice), lattice, t, dispersion), lattice);
  out.time = initial.time + t;
  return out;
}

ComplexField lattice_f2_kernel(const MomentumLattice& lattice, double t, Dispersion dispersion) {
  const std::size_t n = lattice.size();
  std::vector<Complex> phase(n);
  std::vector<std::array<double, 3>> k(n);
  for (std::size_t f = 0; f < n; ++f) {
    phase[f] = mode_phase(lattice, f, t, dispersion);
    k[f] = lattice.wave_vector(f);
  }
  ComplexField kernel = make_field(lattice, FieldSpace::position, t);
  for (std::size_t z = 0; z < n; ++z) {
    const auto x = lattice.position(z);
    Complex s = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
      double kz = 0.0;
      for (int a = 0; a < lattice.dims(); ++a) kz += k[f][a] * x[a];
      s += std::polar(1.0, kz) * phase[f];
    }
    kernel.values[z] = s / static_cast<double>(n);
  }
  return kernel;
}

ComplexField evolve_convolution_literal(const ComplexField& initial, const MomentumLattice& lattice, double t,
                                        double coupling, Dispersion dispersion) {
  if (coupling != 0.0) throw DomainError("kernel convolution describes the free theory only (lambda = 0)");
  require_position(initial, "evolve_convolution_literal");
  check_shape(initial, lattice);
  if (lattice.size() > 4096) throw DomainError("literal convolution is limited to 4096 lattice points");
  const auto kernel = lattice_f2_kernel(lattice, t, dispersion);
  const std::size_t n = lattice.size();
  ComplexField out = make_field(lattice, FieldSpace::position, initial.time + t);
  std::array<int, 3> diff{};
  for (std::size_t x = 0; x < n; ++x) {
    const auto ix = lattice.multi_index(x);
    Complex s = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const auto iy = lattice.multi_index(y);
      for (int a = 0; a < lattice.dims(); ++a) diff[a] = ix[a] - iy[a];
      s += kernel.values[lattice.flat_index(std::span<const int>(diff.data(), lattice.dims()))] *
           initial.values[y];
    }
    out.values[x] = s;
  }
  return out;
}

DerivativeDefect time_derivative_check(const ComplexField& b, const MomentumLattice& lattice, double dt) {
  if (!(dt > 0.0)) throw DomainError("time_derivative_check needs dt > 0");
  check_shape(b, lattice);
  const ComplexField bk = b.space == FieldSpace::momentum ? b : to_momentum(b, lattice);
  ComplexField diff = bk;
  for (std::size_t f = 0; f < lattice.size(); ++f) {
    const Complex fwd = mode_phase(lattice, f, dt, Dispersion::continuum) * bk.values[f];
    const Complex bwd = mode_phase(lattice, f, -dt, Dispersion::continuum) * bk.values[f];
    const double w = lattice.excluded(f) ? 0.0 : lattice.omega(f);
    diff.values[f] = (fwd - bwd) / (2.0 * dt) + Complex(0.0, w) * bk.values[f];
  }
  const auto pos = to_position(diff, lattice);
  double m = 0.0;
  for (const auto& v : pos.values) m = std::max(m, std::abs(v));
  return {dt, m};
}

ResidualReport kg_residual(const EvolutionRun& run) {
  const auto& lat = run.lattice;
  const auto& snaps = run.snapshots;
  if (snaps.size() < 3) throw DomainError("kg_residual needs at least 3 snapshots");
  const double dt = snaps[1].time - snaps[0].time;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    require_position(snaps[i], "kg_residual");
    if (std::abs(snaps[i].time - snaps[i - 1].time - dt) > 1e-9 * dt)
      throw DomainError("kg_residual needs snapshots at uniform dt");
  }
  const auto nb = neighbours(lat);
  const double m2 = lat.mass() * lat.mass();
  std::vector<Complex> lap(lat.size());
  double max_r = 0.0, sum2 = 0.0;
  for (std::size_t n = 1; n + 1 < snaps.size(); ++n) {
    const auto& b = snaps[n].values;
    laplacian(nb, b, lap);
    for (std::size_t f = 0; f < lat.size(); ++f) {
      const Complex dtt = (snaps[n + 1].values[f] - 2.0 * b[f] + snaps[n - 1].values[f]) / (dt * dt);
      const double r = std::abs(lap[f] - dtt - m2 * b[f]);
      max_r = std::max(max_r, r);
      sum2 += r * r;
    }
  }
  ResidualReport rep;
  rep.dx.push_back(lat.spacing(0));
  rep.dt.push_back(dt);
  rep.max_residual.push_back(max_r);
  rep.l2_residual.push_back(std::sqrt(sum2 * lat.cell_volume() / static_cast<double>(snaps.size() - 2)));
  return rep;
}

ResidualReport kg_refinement_study(const RefinementSpec& spec) {
  if (spec.levels < 2) throw DomainError("refinement study needs at least 2 levels");
  if (!(spec.dt > 0.0) || !(spec.duration > 0.0)) throw DomainError("refinement study needs dt, duration > 0");
  ResidualReport out;
  for (int level = 0; level < spec.levels; ++level) {
    LatticeSpec ls = spec.base;
    for (auto& n : ls.grid_points) n <<= level;
    const auto lat = build_lattice(ls);
    const double dt = std::ldexp(spec.dt, -level);
    const long steps = std::max<long>(2, std::lround(spec.duration / dt));
    const auto b0 = gaussian_packet(lat, spec.centre, spec.sigma, spec.k0);
    const auto rep = kg_residual(run_spectral(b0, lat, dt, steps, 1));
    out.dx.push_back(rep.dx[0]);
    out.dt.push_back(rep.dt[0]);
    out.max_residual.push_back(rep.max_residual[0]);
    out.l2_residual.push_back(rep.l2_residual[0]);
  }
  for (std::size_t i = 0; i + 1 < out.max_residual.size(); ++i)
    out.ratios.push_back(out.max_residual[i] / out.max_residual[i + 1]);
  return out;
}

double leapfrog_stability_bound(const MomentumLattice& lattice) { return 2.0 / lattice.max_lattice_omega(); }

EvolutionRun leapfrog_interact(const ComplexField& b0, const ComplexField& b_dot0, const MomentumLattice& lattice,
                               double coupling, double dt, long steps, const LeapfrogOptions& options) {
  require_position(b0, "leapfrog_interact");
  require_position(b_dot0, "leapfrog_interact");
  check_shape(b0, lattice);
  check_shape(b_dot0, lattice);
  if (steps < 0) throw DomainError("steps must be >= 0");
  const double bound = leapfrog_stability_bound(lattice);
  if (!(dt > 0.0) || !(dt < bound))
    throw DomainError("leapfrog dt must lie in (0, " + std::to_string(bound) + ")");
  if (options.cubic == CubicMode::real_field)
    return leapfrog(real_part(b0, "b"), real_part(b_dot0, "b_dot"), lattice, coupling, dt, steps, options,
                    b0.time);
  return leapfrog(b0.values, b_dot0.values, lattice, coupling, dt, steps, options, b0.time);
}

double field_energy(const ComplexField& b, const ComplexField& b_dot, const MomentumLattice& lattice,
                    double coupling) {
  check_shape(b, lattice);
  check_shape(b_dot, lattice);
  std::vector<double> x(b.values.size()), v(b.values.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = b.values[i].real();
    v[i] = b_dot.values[i].real();
  }
  return energy_real(neighbours(lattice), x, v, lattice.mass() * lattice.mass(), coupling, lattice.cell_volume());
}

double relative_energy_drift(const EvolutionRun& run) {
  if (run.energies.empty()) throw DomainError("run has no recorded energies");
  const double e0 = run.energies.front();
  double m = 0.0;
  for (double e : run.energies) m = std::max(m, std::abs(e - e0));
  return m / std::abs(e0);
}

double reversibility_error(const ComplexField& b0, const ComplexField& b_dot0, const MomentumLattice& lattice,
                           double coupling, double dt, long steps) {
  LeapfrogOptions opt;
  opt.record_every = 0;
  opt.energy_every = 0;
  const auto fwd = leapfrog_interact(b0, b_dot0, lattice, coupling, dt, steps, opt);
  ComplexField v = *fwd.final_velocity;
  for (auto& x : v.values) x = -x;
  const auto back = leapfrog_interact(fwd.snapshots.back(), v, lattice, coupling, dt, steps, opt);
  ComplexField v_back = *back.final_velocity;
  for (auto& x : v_back.values) x = -x;
  return std::max(max_abs_difference(back.snapshots.back(), b0), max_abs_difference(v_back, b_dot0));
}

FrontReport wavefront_measure(const EvolutionRun& run, double k0) {
  const auto& lat = run.lattice;
  if (lat.dims() != 1) throw DomainError("wavefront_measure handles 1D runs");
  if (run.snapshots.size() < 3) throw DomainError("wavefront_measure needs at least 3 snapshots");
  FrontReport rep;
  const double k[1] = {k0};
  if (k0 == 0.0 && lat.mass() == 0.0) throw DomainError("group velocity undefined at k0 = 0, M = 0");
  rep.expected = group_velocity(k, lat.mass())[0];
  const int n = lat.points(0);
  const double dx = lat.spacing(0);
  const double len = lat.box_length(0);
  rep.noise_floor = 1e-3 * dx;
  double first_height = 0.0;
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    const auto& v = run.snapshots[s].values;
    int j = 0;
    for (int i = 1; i < n; ++i)
      if (std::norm(v[i]) > std::norm(v[j])) j = i;
    const double ym = std::norm(v[(j - 1 + n) % n]);
    const double y0 = std::norm(v[j]);
    const double yp = std::norm(v[(j + 1) % n]);
    const double curv = ym - 2.0 * y0 + yp;
    const double offset = curv < 0.0 ? 0.5 * (ym - yp) / curv : 0.0;
    double x = (j + offset) * dx;
    if (s == 0) {
      first_height = y0;
    } else {
      const double prev = rep.peaks.back();
      x += len * std::round((prev - x) / len);
      if (y0 < 0.05 * first_height && rep.trackable) {
        rep.trackable = false;
        rep.diagnostic = "packet peak fell below 5% of its initial height at t = " +
                         std::to_string(run.snapshots[s].time);
      }
    }
    rep.times.push_back(run.snapshots[s].time);
    rep.peaks.push_back(x);
    rep.max_displacement = std::max(rep.max_displacement, std::abs(x - rep.peaks.front()));
  }
  const double cnt = static_cast<double>(rep.times.size());
  double mt = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    mt += rep.times[i];
    mx += rep.peaks[i];
  }
  mt /= cnt;
  mx /= cnt;
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    stt += (rep.times[i] - mt) * (rep.times[i] - mt);
    stx += (rep.times[i] - mt) * (rep.peaks[i] - mx);
  }
  rep.speed = stx / stt;
  return rep;
}

}  // namespace ontic
