#include "ontic/experiments.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/Eigenvalues>

#include "ontic/cyclic_automaton.hpp"
#include "ontic/field_dynamics.hpp"
#include "ontic/field_io.hpp"
#include "ontic/kernel_engine.hpp"
#include "ontic/ladder_algebra.hpp"
#include "ontic/vacuum_ensemble.hpp"

namespace ontic {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& dir, const std::string& name, ExperimentResult& res) {
  std::ofstream out(dir / name);
  if (!out) throw OutputError("cannot open " + (dir / name).string() + " for writing");
  res.outputs.push_back(name);
  return out;
}

void close_output(std::ofstream& out, const fs::path& dir, const std::string& name) {
  out.flush();
  if (!out) throw OutputError("write to " + (dir / name).string() + " failed");
}

template <class Writer>
void write_file(const fs::path& dir, const std::string& name, ExperimentResult& res, Writer&& w) {
  auto out = open_output(dir, name, res);
  w(out);
  close_output(out, dir, name);
}

std::vector<int> int_list(const Json& v) {
  if (v.is_array()) {
    std::vector<int> out;
    for (const auto& x : v) out.push_back(static_cast<int>(x.get<double>()));
    return out;
  }
  return {static_cast<int>(v.get<double>())};
}

std::vector<double> number_list(const Json& v) {
  if (v.is_array()) return v.get<std::vector<double>>();
  return {v.get<double>()};
}

LatticeSpec lattice_spec(const Json& p) {
  LatticeSpec s;
  s.grid_points = int_list(p["n"]);
  s.box_lengths = number_list(p["L"]);
  s.mass = p["M"].get<double>();
  return s;
}

std::optional<double> cutoff_of(const Json& p) {
  if (p["Lambda"].is_null()) return std::nullopt;
  return p["Lambda"].get<double>();
}

Json identities(const Json& p, std::uint64_t seed) {
  const double omega = p["omega"].get<double>();
  const int pairs = p.value("time_pairs", 10);
  const double scale = p.value("time_scale", 10.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(-scale, scale);
  Json out = Json::array();
  for (int n : int_list(p["levels"])) {
    const auto ops = build_mode(n, omega);
    const auto rep = commutator_defect(ops);
    double timed = 0.0;
    for (int i = 0; i < pairs; ++i) {
      const double t1 = time(rng), t2 = time(rng);
      timed = std::max(timed, max_abs(commutator(evolve_operator(timed_b(ops), t1),
                                                 evolve_operator(timed_b_dag(ops), t2))));
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(ops.b, false);
    double root_distance = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const Complex lam = solver.eigenvalues()[i];
      double best = INFINITY;
      for (int k = 0; k < n; ++k) best = std::min(best, std::abs(lam - std::polar(1.0, -kTwoPi * k / n)));
      root_distance = std::max(root_distance, best);
    }
    out.push_back({{"N", n},
                   {"b_unitarity", rep.b_unitarity},
                   {"b_bdag_commutator", rep.b_bdag_commutator},
                   {"timed_b_bdag_commutator", timed},
                   {"eigenvalue_root_distance", root_distance},
                   {"b_number_defect_interior", rep.b_number_defect_interior},
                   {"b_number_wrap_entry", {rep.b_number_wrap_entry.real(), rep.b_number_wrap_entry.imag()}},
                   {"b_number_wrap_defect", rep.b_number_wrap_defect},
                   {"qp_defect_interior", rep.qp_defect_interior},
                   {"qp_top_entry", {rep.qp_top_entry.real(), rep.qp_top_entry.imag()}},
                   {"a_adag_defect_interior", rep.a_adag_defect_interior},
                   {"truncation_defect_interior", rep.truncation_defect_interior},
                   {"truncation_wrap_defect", rep.truncation_wrap_defect},
                   {"reconstruction_defect_interior", rep.reconstruction_defect_interior},
                   {"reconstruction_wrap_entry", rep.reconstruction_wrap_entry}});
  }
  return out;
}

void spectrum(const Json& p, const fs::path& dir, ExperimentResult& res) {
  const CycleConfig cfg(p["N"].get<int>(), p["dt"].get<double>());
  const auto e = energy_levels(cfg);
  write_file(dir, "spectrum.csv", res, [&](std::ostream& o) {
    o << "n,E\n";
    for (std::size_t i = 0; i < e.size(); ++i) o << i << ',' << format_double(e[i]) << '\n';
  });
  const auto u = evolution_matrix(cfg, 1);
  const auto un = evolution_matrix(cfg, cfg.states());
  const auto b = basis_change(cfg, BasisDirection::energy_to_ont).matrix;
  ComplexMatrix d = b.adjoint() * u * b;
  double leak = 0.0, phase = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (i != j) leak = std::max(leak, std::abs(d(i, j)));
      else phase = std::max(phase, std::abs(d(i, i) - std::polar(1.0, -e[i] * cfg.delta_t())));
    }
  res.results = {{"omega", cfg.omega()},
                 {"period", cfg.period()},
                 {"U_pow_N_is_identity", un == ComplexMatrix::Identity(cfg.states(), cfg.states())},
                 {"dft_offdiagonal_leakage", leak},
                 {"dft_diagonal_phase_defect", phase}};
}

void kernel(const Json& p, const fs::path& dir, ExperimentResult& res) {
  KernelSpec spec;
  spec.kind = parse_kernel_kind(p["kernel"].get<std::string>());
  spec.mass = p["M"].get<double>();
  spec.method = parse_kernel_method(p["method"].get<std::string>());
  spec.cutoff = cutoff_of(p);
  spec.time = p.value("t", 0.0);
  spec.window = parse_window(p.value("window", std::string("cosine_taper")));
  const auto z = p["z"].get<std::vector<double>>();
  const auto table = tabulate_kernel(spec, z);
  write_file(dir, "kernel.csv", res, [&](std::ostream& o) { write_kernel_csv(o, table); });
  double worst = 0.0;
  for (const auto& pt : table.points) worst = std::max(worst, pt.error / std::max(std::abs(pt.value), 1e-300));
  res.results = {{"points", table.points.size()}, {"max_relative_error_estimate", worst}};
}

void decay(const Json& p, const fs::path& dir, ExperimentResult& res) {
  KernelSpec spec;
  spec.kind = KernelKind::F1;
  spec.mass = p["M"].get<double>();
  spec.cutoff = cutoff_of(p);
  spec.method = parse_kernel_method(p.value("method", std::string("contour")));
  spec.window = parse_window(p.value("window", std::string("erf_taper")));
  const double lo = p["z_min"].get<double>(), hi = p["z_max"].get<double>();
  const int n = p["points"].get<int>();
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = lo + (hi - lo) * i / (n - 1);
  const auto table = tabulate_kernel(spec, z);
  const int terms = p.value("prefactor_terms", 3);
  const auto fit = decay_fit(table, lo, hi, terms);
  write_file(dir, "decay.csv", res, [&](std::ostream& o) { write_kernel_csv(o, table); });
  res.results = {{"slope", fit.slope},
                 {"expected_slope", -spec.mass},
                 {"relative_deviation", std::abs(fit.slope + spec.mass) / spec.mass},
                 {"intercept", fit.intercept},
                 {"residual", fit.residual},
                 {"prefactor_terms", terms},
                 {"points", fit.points}};
}

void front(const Json& p, const fs::path& dir, ExperimentResult& res) {
  const auto lat = build_lattice(lattice_spec(p));
  const double k0 = p["k0"].get<double>();
  const double centre = p.value("centre", 0.25 * lat.box_length(0));
  const auto b0 = gaussian_packet(lat, {centre, 0, 0}, p["sigma"].get<double>(), {k0, 0, 0});
  const auto run = run_spectral(b0, lat, p["dt"].get<double>(), p["steps"].get<long>(), p.value("record_every", 1L));
  const auto rep = wavefront_measure(run, k0);
  write_file(dir, "front.csv", res, [&](std::ostream& o) {
    o << "t,peak\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      o << format_double(rep.times[i]) << ',' << format_double(rep.peaks[i]) << '\n';
  });
  res.results = {{"speed", rep.speed},
                 {"group_velocity", rep.expected},
                 {"relative_deviation", rep.expected != 0.0 ? std::abs(rep.speed / rep.expected - 1.0) : rep.speed},
                 {"max_displacement", rep.max_displacement},
                 {"noise_floor", rep.noise_floor},
                 {"trackable", rep.trackable},
                 {"diagnostic", rep.diagnostic}};
}

void evolve(const Json& p, const fs::path& dir, ExperimentResult& res) {
  const auto lat = build_lattice(lattice_spec(p));
  const auto k0v = number_list(p["k0"]);
  std::array<double, 3> k0{}, centre{};
  for (int a = 0; a < lat.dims(); ++a) {
    k0[a] = k0v[a];
    centre[a] = 0.5 * lat.box_length(a);
  }
  const auto b0 = gaussian_packet(lat, centre, p["sigma"].get<double>(), k0);
  const double dt = p["dt"].get<double>();
  const long steps = p["steps"].get<long>();
  const long every = p.value("record_every", 1L);
  const double lambda = p["lambda"].get<double>();
  const auto method = p["method"].get<std::string>();
  EvolutionRun run = run_spectral(b0, lat, dt, steps, every);
  if (method == "convolution_F2") {
    for (auto& snap : run.snapshots) snap = evolve_convolution(b0, lat, snap.time);
    run.method = EvolutionMethod::convolution_F2;
  } else if (method == "leapfrog_second_order") {
    // positive-frequency initial velocity -i omega b
    auto vk = to_momentum(b0, lat);
    for (std::size_t f = 0; f < lat.size(); ++f) vk.values[f] *= Complex(0.0, -lat.lattice_omega(f));
    LeapfrogOptions opt;
    opt.cubic = CubicMode::complex_literal;
    opt.record_every = every;
    run = leapfrog_interact(b0, to_position(vk, lat), lat, lambda, dt, steps, opt);
  }
  save_field_csv(dir / "field_initial.csv", run.snapshots.front(), lat);
  res.outputs.push_back("field_initial.csv");
  save_field_csv(dir / "field_final.csv", run.snapshots.back(), lat);
  res.outputs.push_back("field_final.csv");
  write_file(dir, "norm.csv", res, [&](std::ostream& o) {
    o << "t,norm2\n";
    for (const auto& s : run.snapshots) o << format_double(s.time) << ',' << format_double(norm_squared(s)) << '\n';
  });
  res.results = {{"method", to_string(run.method)}, {"snapshots", run.snapshots.size()}};
  if (method == "leapfrog_second_order" && lambda != 0.0) res.results["experimental"] = "complex_literal cubic term";
  bool uniform = run.snapshots.size() >= 3 && steps % every == 0;
  if (uniform) {
    const auto kg = kg_residual(run);
    res.results["kg_max_residual"] = kg.max_residual[0];
    res.results["kg_l2_residual"] = kg.l2_residual[0];
  }
}

void interact(const Json& p, const fs::path& dir, ExperimentResult& res) {
  const auto lat = build_lattice(lattice_spec(p));
  std::array<double, 3> centre{};
  for (int a = 0; a < lat.dims(); ++a) centre[a] = 0.5 * lat.box_length(a);
  const auto b0 = gaussian_packet(lat, centre, p["sigma"].get<double>(), {}, p["amplitude"].get<double>());
  const auto v0 = make_field(lat, FieldSpace::position);
  const double lambda = p["lambda"].get<double>();
  const double dt = p["dt"].get<double>();
  const long steps = p["steps"].get<long>();
  LeapfrogOptions opt;
  opt.cubic = p.value("cubic", std::string("real_field")) == "real_field" ? CubicMode::real_field
                                                                           : CubicMode::complex_literal;
  opt.record_every = p.value("record_every", 0L);
  opt.energy_every = p.value("energy_every", 1L);
  const auto run = leapfrog_interact(b0, v0, lat, lambda, dt, steps, opt);
  save_field_csv(dir / "field_final.csv", run.snapshots.back(), lat);
  res.outputs.push_back("field_final.csv");
  res.results = {{"stability_bound", leapfrog_stability_bound(lat)},
                 {"dt_over_bound", dt / leapfrog_stability_bound(lat)},
                 {"cubic", to_string(opt.cubic)}};
  if (opt.cubic == CubicMode::real_field) {
    write_file(dir, "energy.csv", res, [&](std::ostream& o) {
      o << "t,E\n";
      for (std::size_t i = 0; i < run.energies.size(); ++i)
        o << format_double(run.energy_times[i]) << ',' << format_double(run.energies[i]) << '\n';
    });
    res.results["relative_energy_drift"] = relative_energy_drift(run);
    if (p.value("reversibility", false))
      res.results["reversibility_error"] = reversibility_error(b0, v0, lat, lambda, dt, steps);
  } else {
    res.results["experimental"] = "complex_literal cubic term; no conserved energy";
  }
}

void vacuum(const Json& p, std::uint64_t seed, unsigned threads, const fs::path& dir, ExperimentResult& res) {
  EnsembleSpec spec{lattice_spec(p), p["samples"].get<long>(), seed};
  std::vector<std::optional<double>> times{std::nullopt};
  if (p.contains("times"))
    for (double t : p["times"].get<std::vector<double>>()) times.emplace_back(t);
  Json checks = Json::array();
  for (const auto& t : times) {
    const auto c = ensemble_correlator(spec, t, threads);
    const auto b = check_delta_correlator(c);
    const std::string name = t ? "correlator_t" + format_double(*t) + ".csv" : "correlator.csv";
    write_file(dir, name, res, [&](std::ostream& o) { write_correlator_csv(o, c); });
    checks.push_back({{"t", t ? *t : 0.0},
                      {"file", name},
                      {"diagonal_outside_3sigma", b.diagonal_outside},
                      {"off_diagonal_outside_3sigma", b.off_diagonal_outside},
                      {"worst_diagonal_sigma", b.worst_diagonal},
                      {"worst_off_diagonal_sigma", b.worst_off_diagonal},
                      {"degenerate_entries", c.degenerate.size()},
                      {"passed", b.passed()}});
  }
  res.results = {{"samples", spec.samples}, {"checks", checks}};
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config, const fs::path& out_dir, std::uint64_t seed,
                                unsigned threads) {
  ExperimentResult res;
  const auto& p = config.params;
  switch (config.experiment) {
    case Experiment::identities:
      res.results = {{"modes", identities(p, seed)}};
      write_file(out_dir, "identities.json", res, [&](std::ostream& o) { o << res.results.dump(2) << '\n'; });
      break;
    case Experiment::spectrum: spectrum(p, out_dir, res); break;
    case Experiment::kernel: kernel(p, out_dir, res); break;
    case Experiment::decay: decay(p, out_dir, res); break;
    case Experiment::front: front(p, out_dir, res); break;
    case Experiment::evolve: evolve(p, out_dir, res); break;
    case Experiment::interact: interact(p, out_dir, res); break;
    case Experiment::vacuum: vacuum(p, seed, threads, out_dir, res); break;
  }
  return res;
}

}  // namespace ontic
