#include <doctest.h>

#include <random>

#include "ontic/mode_lattice.hpp"

using namespace ontic;

namespace {

LatticeSpec spec1d(double len, int n, double m) { return {{len}, {n}, m, std::nullopt, CutoffPolicy::freeze}; }

ComplexField random_field(const MomentumLattice& lat, FieldSpace space, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto f = make_field(lat, space);
  for (auto& v : f.values) v = Complex(g(rng), g(rng));
  return f;
}

}  // namespace

TEST_SUITE("mode_lattice") {

TEST_CASE("integer modes at L = 2 pi") {
  const auto lat = build_lattice(spec1d(kTwoPi, 8, 0.0));
  std::vector<double> k;
  for (std::size_t f = 0; f < lat.size(); ++f) k.push_back(lat.wave_vector(f)[0]);
  std::sort(k.begin(), k.end());
  const std::vector<double> want{-4, -3, -2, -1, 0, 1, 2, 3};
  for (int i = 0; i < 8; ++i) CHECK(k[i] == doctest::Approx(want[i]).epsilon(1e-15));
  CHECK(lat.mode_number(4)[0] == -4);
  CHECK(lat.mode_number(3)[0] == 3);
}

TEST_CASE("3-4-5 dispersion") {
  const auto lat = build_lattice({{kTwoPi, kTwoPi, kTwoPi}, {8, 8, 8}, 4.0, std::nullopt, CutoffPolicy::freeze});
  const int idx[3] = {3, 0, 0};
  const auto f = lat.flat_index(idx);
  CHECK(lat.wave_vector(f)[0] == doctest::Approx(3.0));
  CHECK(lat.omega(f) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("massless dispersion is |k| and every omega satisfies the mass shell") {
  const auto m0 = build_lattice({{3.0, 5.0}, {6, 10}, 0.0, std::nullopt, CutoffPolicy::freeze});
  for (std::size_t f = 0; f < m0.size(); ++f) CHECK(m0.omega(f) == doctest::Approx(std::sqrt(m0.k_squared(f))));
  const auto lat = build_lattice({{3.0, 5.0, 2.0}, {6, 10, 4}, 1.7, std::nullopt, CutoffPolicy::freeze});
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const double w = lat.omega(f);
    CHECK(w >= 1.7);
    CHECK(std::abs(w * w - lat.k_squared(f) - 1.7 * 1.7) <= 1e-12 * w * w);
  }
}

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(build_lattice(spec1d(1.0, 7, 0.0)), DomainError);
  CHECK_THROWS_AS(build_lattice(spec1d(1.0, 0, 0.0)), DomainError);
  CHECK_THROWS_AS(build_lattice(spec1d(-1.0, 8, 0.0)), DomainError);
  CHECK_THROWS_AS(build_lattice(spec1d(1.0, 8, -0.1)), DomainError);
  CHECK_THROWS_AS(build_lattice({{1.0}, {8}, 0.0, 0.0, CutoffPolicy::freeze}), DomainError);
  CHECK_THROWS_AS(build_lattice({{1.0, 1.0}, {8}, 0.0, std::nullopt, CutoffPolicy::freeze}), DomainError);
  CHECK_THROWS_AS(build_lattice({{1, 1, 1, 1}, {2, 2, 2, 2}, 0.0, std::nullopt, CutoffPolicy::freeze}), DomainError);
}

TEST_CASE("index helpers are row-major with the last axis fastest") {
  const auto lat = build_lattice({{1.0, 2.0, 3.0}, {2, 4, 6}, 0.0, std::nullopt, CutoffPolicy::freeze});
  CHECK(lat.size() == 48);
  const int idx[3] = {1, 2, 3};
  const auto f = lat.flat_index(idx);
  CHECK(f == std::size_t(1 * 24 + 2 * 6 + 3));
  CHECK(lat.multi_index(f) == std::array<int, 3>{1, 2, 3});
  const int wrapped[3] = {-1, 6, 9};
  CHECK(lat.flat_index(wrapped) == f);
  CHECK(lat.volume() == doctest::Approx(6.0));
  CHECK(lat.cell_volume() == doctest::Approx(6.0 / 48));
}

TEST_CASE("cutoff flags and policies") {
  const LatticeSpec s{{kTwoPi}, {16}, 1.0, 3.5, CutoffPolicy::freeze};
  const auto lat = build_lattice(s);
  std::size_t excluded = 0;
  for (std::size_t f = 0; f < lat.size(); ++f) {
    CHECK(lat.excluded(f) == (std::abs(lat.wave_vector(f)[0]) > 3.5));
    excluded += lat.excluded(f);
  }
  CHECK(excluded == 9);  // |m| in 4..8: 4 positive, 5 negative

  auto field = make_field(lat, FieldSpace::momentum);
  for (auto& v : field.values) v = Complex(1.0, 0.5);
  const auto frozen = spectral_evolve(field, lat, 0.7);
  auto zs = s;
  zs.cutoff_policy = CutoffPolicy::zero;
  const auto zlat = build_lattice(zs);
  const auto zeroed = spectral_evolve(field, zlat, 0.7);
  for (std::size_t f = 0; f < lat.size(); ++f) {
    if (lat.excluded(f)) {
      CHECK(frozen.values[f] == field.values[f]);
      CHECK(zeroed.values[f] == Complex(0.0));
    } else {
      CHECK(std::abs(frozen.values[f] - field.values[f] * std::polar(1.0, -lat.omega(f) * 0.7)) < 1e-15);
    }
  }
}

TEST_CASE("spectral evolution identities") {
  const auto lat = build_lattice({{5.0, 7.0}, {8, 6}, 0.9, std::nullopt, CutoffPolicy::freeze});
  const auto f = random_field(lat, FieldSpace::momentum, 1);
  CHECK(max_abs_difference(spectral_evolve(f, lat, 0.0), f) == 0.0);
  const auto two = spectral_evolve(spectral_evolve(f, lat, 0.4), lat, 1.3);
  CHECK(max_abs_difference(two, spectral_evolve(f, lat, 1.7)) < 1e-12);
  CHECK(spectral_evolve(f, lat, 1.7).time == doctest::Approx(1.7));
  for (double t : {0.5, 10.0, 300.0})
    CHECK(norm_squared(spectral_evolve(f, lat, t)) == doctest::Approx(norm_squared(f)).epsilon(1e-12));
  // |b~| per mode is preserved exactly up to rounding
  const auto g = spectral_evolve(f, lat, 11.0);
  for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(g.values[i]) == doctest::Approx(std::abs(f.values[i])));
  CHECK_THROWS_AS(spectral_evolve(random_field(lat, FieldSpace::position, 2), lat, 1.0), DomainError);
}

TEST_CASE("single mode returns after one period") {
  const auto lat = build_lattice(spec1d(10.0, 16, 1.3));
  auto f = make_field(lat, FieldSpace::momentum);
  const std::size_t k0 = 3;
  f.values[k0] = Complex(0.3, -0.4);
  const auto back = spectral_evolve(f, lat, kTwoPi / lat.omega(k0));
  CHECK(max_abs_difference(back, f) < 1e-14);
}

TEST_CASE("transforms") {
  const auto lat = build_lattice({{4.0, 3.0}, {8, 4}, 0.0, std::nullopt, CutoffPolicy::freeze});
  auto delta = make_field(lat, FieldSpace::position);
  delta.values[0] = 1.0;
  const auto flat = to_momentum(delta, lat);
  for (const auto& v : flat.values) CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(32.0)));

  auto wave = make_field(lat, FieldSpace::position);
  const int peak[2] = {2, -1};
  const auto pf = lat.flat_index(peak);
  const auto kp = lat.wave_vector(pf);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto x = lat.position(i);
    wave.values[i] = std::polar(1.0, kp[0] * x[0] + kp[1] * x[1]);
  }
  const auto wk = to_momentum(wave, lat);
  for (std::size_t i = 0; i < lat.size(); ++i)
    CHECK(std::abs(wk.values[i]) == doctest::Approx(i == pf ? std::sqrt(32.0) : 0.0).epsilon(1e-12));

  const auto r = random_field(lat, FieldSpace::position, 5);
  const auto rk = to_momentum(r, lat);
  CHECK(norm_squared(rk) == doctest::Approx(norm_squared(r)).epsilon(1e-12));
  CHECK(max_abs_difference(to_position(rk, lat), r) < 1e-12);
  CHECK_THROWS_AS(to_position(r, lat), DomainError);
  CHECK_THROWS_AS(to_momentum(rk, lat), DomainError);

  const auto other = build_lattice(spec1d(1.0, 8, 0.0));
  CHECK_THROWS_AS(to_momentum(r, other), DomainError);
}

TEST_CASE("b(x) is generically complex") {
  const auto lat = build_lattice(spec1d(8.0, 16, 1.0));
  auto k = make_field(lat, FieldSpace::momentum);
  for (std::size_t i = 0; i < lat.size(); ++i) k.values[i] = std::polar(1.0, 0.7 * double(i * i));
  double imag = 0.0;
  for (const auto& v : to_position(k, lat).values) imag = std::max(imag, std::abs(v.imag()));
  CHECK(imag > 0.1);
}

TEST_CASE("transforms are bitwise reproducible") {
  const auto lat = build_lattice({{2.0, 2.0, 2.0}, {8, 8, 4}, 0.0, std::nullopt, CutoffPolicy::freeze});
  const auto r = random_field(lat, FieldSpace::position, 9);
  const auto a = to_momentum(r, lat);
  const auto b = to_momentum(r, lat);
  CHECK(a.values == b.values);
}

TEST_CASE("lattice dispersion table") {
  const auto lat = build_lattice(spec1d(4.0, 16, 0.5));
  const double dx = lat.spacing(0);
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const double s = 2.0 / dx * std::sin(0.5 * lat.wave_vector(f)[0] * dx);
    CHECK(lat.lattice_omega(f) == doctest::Approx(std::sqrt(s * s + 0.25)));
    CHECK(lat.lattice_omega(f) <= lat.max_lattice_omega() + 1e-12);
  }
}

}
