#include <doctest.h>

#include <sstream>

#include "ontic/vacuum_ensemble.hpp"

using namespace ontic;

namespace {

EnsembleSpec line_spec(int n, long samples, std::uint64_t seed) {
  return {{{double(n)}, {n}, 1.0, std::nullopt, CutoffPolicy::freeze}, samples, seed};
}

}  // namespace

TEST_SUITE("vacuum_ensemble") {

TEST_CASE("samples have unit modulus and are reproducible") {
  const auto spec = line_spec(16, 10, 42);
  const auto lat = build_lattice(spec.lattice);
  const auto a = sample_vacuum(spec, lat, 3);
  const auto b = sample_vacuum(spec, lat, 3);
  CHECK(a.space == FieldSpace::momentum);
  CHECK(a.values == b.values);
  for (const auto& v : a.values) CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sample_vacuum(spec, lat, 4).values != a.values);
  auto other = spec;
  other.seed = 43;
  CHECK(sample_vacuum(other, lat, 3).values != a.values);
  CHECK_THROWS_AS(sample_vacuum(spec, lat, 10), DomainError);
}

TEST_CASE("single-mode marginal mean is near zero") {
  const auto spec = line_spec(8, 10000, 7);
  const auto lat = build_lattice(spec.lattice);
  Complex mean = 0.0;
  for (long s = 0; s < spec.samples; ++s) mean += sample_vacuum(spec, lat, s).values[2];
  mean /= double(spec.samples);
  CHECK(std::abs(mean) < 4.0 / std::sqrt(10000.0));
}

TEST_CASE("correlator matches the delta prediction") {
  const auto spec = line_spec(16, 4000, 11);
  const auto c = ensemble_correlator(spec);
  CHECK(c.points == 16);
  CHECK(c.samples == 4000);
  const auto b = check_delta_correlator(c, 4.0);
  CHECK(b.passed());
  CHECK(c.degenerate.empty());
  for (std::size_t x = 0; x < 16; ++x) CHECK(c.at(x, x).imag() == doctest::Approx(0.0));
  // the trace is exactly the number of modes (Parseval, sample by sample)
  Complex trace = 0.0;
  for (std::size_t x = 0; x < 16; ++x) trace += c.at(x, x);
  CHECK(trace.real() == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("statistics are unchanged by spectral evolution") {
  const auto spec = line_spec(16, 4000, 12);
  for (double t : {0.5, 1.0, 7.3}) CHECK(check_delta_correlator(ensemble_correlator(spec, t), 4.0).passed());
}

TEST_CASE("thread count does not change the result") {
  const auto spec = line_spec(8, 1000, 99);
  const auto one = ensemble_correlator(spec, 0.4, 1);
  const auto three = ensemble_correlator(spec, 0.4, 3);
  CHECK(one.mean == three.mean);
  CHECK(one.stderr_ == three.stderr_);
}

TEST_CASE("correlator preconditions and degenerate variance") {
  CHECK_THROWS_AS(ensemble_correlator(line_spec(8, 99, 1)), DomainError);
  CHECK_THROWS_AS(validate(line_spec(8, 0, 1)), DomainError);
  // identical samples: zero variance everywhere
  const auto lat = build_lattice(line_spec(4, 10, 1).lattice);
  auto f = make_field(lat, FieldSpace::position);
  for (auto& v : f.values) v = Complex(0.5, 0.5);
  const auto c = correlator_from_samples(std::vector<ComplexField>(5, f));
  CHECK(c.degenerate.size() == 16);
}

TEST_CASE("correlator CSV") {
  const auto c = ensemble_correlator(line_spec(2, 100, 5));
  std::ostringstream out;
  write_correlator_csv(out, c);
  const auto s = out.str();
  CHECK(s.rfind("x,y,re,im,stderr\n0,0,", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}

}
