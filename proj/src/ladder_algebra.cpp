#include "ontic/ladder_algebra.hpp"

#include <cmath>
#include <string>

namespace ontic {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ModeOperators build_mode(int levels, double omega) {
  if (levels < 2)
    throw DomainError("build_mode: need N >= 2 levels for a nontrivial cycle, got " +
                      std::to_string(levels));
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("build_mode: omega must be > 0");

  ModeOperators ops;
  ops.levels = levels;
  ops.omega = omega;
  const int n = levels;

  ops.a = ComplexMatrix::Zero(n, n);
  ops.b = ComplexMatrix::Zero(n, n);
  ops.number = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    ops.number(k, k) = static_cast<double>(k);
    if (k > 0) ops.a(k - 1, k) = std::sqrt(static_cast<double>(k));
    ops.b((k + n - 1) % n, k) = 1.0;
  }
  ops.a_dag = ops.a.adjoint();
  ops.b_dag = ops.b.adjoint();
  ops.hamiltonian = omega * ops.number;

  const Complex i{0.0, 1.0};
  ops.p = std::sqrt(omega / 2.0) * (ops.a + ops.a_dag);
  ops.q = (ops.a_dag - ops.a) / (i * std::sqrt(2.0 * omega));
  return ops;
}

TimedOperator timed_b(const ModeOperators& ops) { return {ops.b, ops.omega, PhaseLaw::lowering, 1}; }
TimedOperator timed_b_dag(const ModeOperators& ops) {
  return {ops.b_dag, ops.omega, PhaseLaw::raising, 1};
}
TimedOperator timed_a(const ModeOperators& ops) { return {ops.a, ops.omega, PhaseLaw::lowering, 1}; }
TimedOperator timed_a_dag(const ModeOperators& ops) {
  return {ops.a_dag, ops.omega, PhaseLaw::raising, 1};
}

TimedOperator timed_b_power(const ModeOperators& ops, int m) {
  if (m < 0) throw DomainError("timed_b_power: depth must be >= 0");
  ComplexMatrix power = ComplexMatrix::Identity(ops.levels, ops.levels);
  for (int k = 0; k < m; ++k) power = ops.b * power;
  return {std::move(power), ops.omega, PhaseLaw::lowering, m};
}

ComplexMatrix evolve_operator(const TimedOperator& op, double t) {
  const double sign = op.law == PhaseLaw::lowering ? -1.0 : 1.0;
  return std::polar(1.0, sign * op.omega * op.depth * t) * op.base;
}

ComplexMatrix truncate_from_a(const ModeOperators& ops) {
  // Row scaling by the diagonal (1 + n)^{-1/2}.
  ComplexMatrix out = ops.a;
  for (int row = 0; row < ops.levels; ++row) out.row(row) /= std::sqrt(1.0 + row);
  return out;
}

ComplexMatrix reconstruct_a(const ModeOperators& ops) {
  ComplexMatrix out = ops.b;
  for (int row = 0; row < ops.levels; ++row) out.row(row) *= std::sqrt(1.0 + row);
  return out;
}

ComplexMatrix reconstruct_a_right(const ModeOperators& ops) {
  ComplexMatrix out = ops.b;
  for (int col = 0; col < ops.levels; ++col) out.col(col) *= std::sqrt(static_cast<double>(col));
  return out;
}

BEigensystem b_eigensystem(const ModeOperators& ops) {
  const int n = ops.levels;
  BEigensystem sys;
  sys.eigenvalues.resize(n);
  sys.eigenvectors.resize(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    sys.eigenvalues[k] = std::polar(1.0, -kTwoPi * k / n);
    for (int level = 0; level < n; ++level) {
      const long r = (static_cast<long>(k) * level) % n;
      sys.eigenvectors(level, k) = std::polar(norm, -kTwoPi * static_cast<double>(r) / n);
    }
  }
  return sys;
}

namespace {

double max_abs_columns_from(const ComplexMatrix& m, int first_col) {
  return max_abs(m.rightCols(m.cols() - first_col));
}

}  // namespace

CommutatorReport commutator_defect(const ModeOperators& ops) {
  const int n = ops.levels;
  const Complex i{0.0, 1.0};
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  CommutatorReport r;
  r.levels = n;

  const ComplexMatrix bn = commutator(ops.b, ops.number) - ops.b;
  r.b_number_defect_interior = max_abs_columns_from(bn, 1);
  r.b_number_wrap_entry = bn(n - 1, 0) + ops.b(n - 1, 0);
  r.b_number_wrap_defect = std::abs(bn(n - 1, 0));

  const ComplexMatrix qp = commutator(ops.q, ops.p);
  r.qp_defect_interior = max_abs((qp - i * id).topLeftCorner(n - 1, n - 1));
  r.qp_top_entry = qp(n - 1, n - 1);

  r.a_adag_defect_interior =
      max_abs((commutator(ops.a, ops.a_dag) - id).topLeftCorner(n - 1, n - 1));
  r.b_bdag_commutator = max_abs(commutator(ops.b, ops.b_dag));
  r.b_unitarity = max_abs(ops.b * ops.b_dag - id);

  const ComplexMatrix trunc = truncate_from_a(ops);
  r.truncation_defect_interior = max_abs_columns_from(trunc - ops.b, 1);
  r.truncation_wrap_defect = std::abs(ops.b(n - 1, 0) - trunc(n - 1, 0));

  const ComplexMatrix recon = reconstruct_a(ops);
  r.reconstruction_defect_interior = max_abs_columns_from(recon - ops.a, 1);
  r.reconstruction_wrap_entry = std::abs(recon(n - 1, 0));
  return r;
}

}  // namespace ontic
