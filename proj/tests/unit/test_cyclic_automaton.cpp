#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ontic/cyclic_automaton.hpp"

using namespace ontic;

TEST_SUITE("cyclic_automaton") {

TEST_CASE("evolve_step shifts by one and wraps") {
  const CycleConfig c4(4, 1.0);
  CHECK(evolve_step(OntState(0, c4), c4).index() == 1);
  CHECK(evolve_step(OntState(3, c4), c4).index() == 0);

  const CycleConfig c7(7, 0.3);
  OntState s(5, c7);
  for (int i = 0; i < 7; ++i) s = evolve_step(s, c7);
  CHECK(s.index() == 5);
}

TEST_CASE("invalid configs and states are rejected") {
  CHECK_THROWS_AS(CycleConfig(0, 1.0), DomainError);
  CHECK_THROWS_AS(CycleConfig(3, 0.0), DomainError);
  CHECK_THROWS_AS(CycleConfig(3, -1.0), DomainError);
  const CycleConfig c(3, 1.0);
  CHECK_THROWS_AS(OntState(3, c), DomainError);
  CHECK_THROWS_AS(OntState(-1, c), DomainError);
  CHECK_THROWS_AS(evolution_matrix(c, -1), DomainError);
}

TEST_CASE("omega N delta_t is 2 pi") {
  for (int n : {1, 2, 7, 64, 1000}) {
    const CycleConfig c(n, 0.731);
    CHECK(c.omega() * n * c.delta_t() == doctest::Approx(kTwoPi).epsilon(1e-15));
  }
}

TEST_CASE("evolution_matrix examples") {
  const CycleConfig c2(2, 1.0);
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(evolution_matrix(c2, 1) == swap);

  const CycleConfig c4(4, 1.0);
  CHECK(evolution_matrix(c4, 4) == ComplexMatrix::Identity(4, 4));
  CHECK(evolution_matrix(c4, 0) == ComplexMatrix::Identity(4, 4));

  const CycleConfig c3(3, 1.0);
  const ComplexMatrix u = evolution_matrix(c3, 1);
  CHECK(evolution_matrix(c3, 2) == u * u);
}

TEST_CASE("evolution_matrix is a permutation with U(x+1, x) = 1") {
  const CycleConfig c(9, 1.0);
  const auto u = evolution_matrix(c, 1);
  for (int x = 0; x < 9; ++x) {
    CHECK(u((x + 1) % 9, x) == Complex(1.0));
    CHECK(u.col(x).cwiseAbs().sum() == 1.0);
    CHECK(u.row(x).cwiseAbs().sum() == 1.0);
  }
  CHECK(evolution_matrix(c, 9 * 5 + 2) == evolution_matrix(c, 2));
}

TEST_CASE("energy levels") {
  const auto e4 = energy_levels(CycleConfig(4, 1.0));
  REQUIRE(e4.size() == 4);
  CHECK(e4[0] == 0.0);
  CHECK(e4[1] == doctest::Approx(kPi / 2));
  CHECK(e4[2] == doctest::Approx(kPi));
  CHECK(e4[3] == doctest::Approx(3 * kPi / 2));

  const auto e1 = energy_levels(CycleConfig(1, 1.0));
  CHECK(e1 == std::vector<double>{0.0});

  const auto e8 = energy_levels(CycleConfig(8, 0.5));
  CHECK(e8[1] - e8[0] == doctest::Approx(kPi / 2).epsilon(1e-15));
  for (int n = 1; n < 8; ++n) CHECK(e8[n] - e8[n - 1] == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("basis change for N = 2 is the Hadamard matrix") {
  const auto b = basis_change(CycleConfig(2, 1.0), BasisDirection::energy_to_ont);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(b.matrix(0, 0) - r) < 1e-15);
  CHECK(std::abs(b.matrix(0, 1) - r) < 1e-15);
  CHECK(std::abs(b.matrix(1, 0) - r) < 1e-15);
  CHECK(std::abs(b.matrix(1, 1) + r) < 1e-15);
  CHECK(b.direction == BasisDirection::energy_to_ont);
}

TEST_CASE("basis change is unitary and the two directions are adjoint") {
  for (int n : {1, 2, 3, 16, 64, 256}) {
    const CycleConfig c(n, 1.0);
    const auto e2o = basis_change(c, BasisDirection::energy_to_ont).matrix;
    const auto o2e = basis_change(c, BasisDirection::ont_to_energy).matrix;
    CHECK((e2o * e2o.adjoint() - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((o2e - e2o.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  // relaxed tolerance at the largest sizes
  const auto big = basis_change(CycleConfig(1024, 1.0), BasisDirection::energy_to_ont).matrix;
  CHECK((big * big.adjoint() - ComplexMatrix::Identity(1024, 1024)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("N = 4: U is diagonalised with eigenvalues 1, -i, -1, i") {
  const CycleConfig c(4, 1.0);
  const auto b = basis_change(c, BasisDirection::energy_to_ont).matrix;
  const ComplexMatrix d = b.adjoint() * evolution_matrix(c, 1) * b;
  const Complex expected[4] = {1.0, Complex(0, -1), -1.0, Complex(0, 1)};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(d(i, j) - (i == j ? expected[i] : 0.0)) < 1e-14);

  // independent oracle: generic eigen-decomposition of the permutation matrix
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(evolution_matrix(c, 1));
  for (const Complex& want : expected) {
    double best = 1.0;
    for (int i = 0; i < 4; ++i) best = std::min(best, std::abs(solver.eigenvalues()[i] - want));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("diagonal entries are exp(-i E_n delta_t), consistent with exp(-i omega t) amplitudes") {
  for (int n : {3, 8, 33}) {
    const CycleConfig c(n, 0.2);
    const auto b = basis_change(c, BasisDirection::energy_to_ont).matrix;
    const ComplexMatrix d = b.adjoint() * evolution_matrix(c, 1) * b;
    const auto e = energy_levels(c);
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) diag = std::max(diag, std::abs(d(i, i) - std::polar(1.0, -e[i] * c.delta_t())));
        else off = std::max(off, std::abs(d(i, j)));
      }
    CHECK(off < 1e-12);
    CHECK(diag < 1e-12);
  }
}

TEST_CASE("basis change preserves norms") {
  const CycleConfig c(17, 1.0);
  const auto b = basis_change(c, BasisDirection::ont_to_energy).matrix;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(17);
  for (int i = 0; i < 17; ++i) v(i) = Complex(std::sin(i + 1.0), std::cos(3.0 * i));
  CHECK((b * v).norm() == doctest::Approx(v.norm()).epsilon(1e-12));
}

}
