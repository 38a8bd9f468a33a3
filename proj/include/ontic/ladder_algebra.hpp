#pragma once

#include <vector>

#include "ontic/common.hpp"

namespace ontic {

/// Matrices of one N-level oscillator in the energy basis |0>..|N-1>, at t = 0.
///
/// H = omega * number, where number = a^dag a.  b is the cyclic lowering
/// matrix <(n-1) mod N| b |n> = 1; unlike a it also maps |0> to |N-1>.
struct ModeOperators {
  int levels = 0;
  double omega = 0.0;
  ComplexMatrix a, a_dag;
  ComplexMatrix p, q;
  ComplexMatrix number, hamiltonian;
  ComplexMatrix b, b_dag;
};

/// Throws DomainError unless levels >= 2 and omega > 0.
ModeOperators build_mode(int levels, double omega);

enum class PhaseLaw { lowering, raising };

/// An operator whose matrix elements rotate as exp(-/+ i omega m t), m the
/// ladder depth (m = 1 for a and b, m for b^m).
struct TimedOperator {
  ComplexMatrix base;
  double omega = 0.0;
  PhaseLaw law = PhaseLaw::lowering;
  int depth = 1;
};

TimedOperator timed_b(const ModeOperators& ops);
TimedOperator timed_b_dag(const ModeOperators& ops);
TimedOperator timed_a(const ModeOperators& ops);
TimedOperator timed_a_dag(const ModeOperators& ops);
/// b^m with depth m.
TimedOperator timed_b_power(const ModeOperators& ops, int m);

ComplexMatrix evolve_operator(const TimedOperator& op, double t);

/// (1 + a^dag a)^{-1/2} a, using the diagonal inverse square root.
/// Equals b except on column 0, where it lacks the wrap element.
ComplexMatrix truncate_from_a(const ModeOperators& ops);

/// (1 + a^dag a)^{1/2} b.  Equals a on columns 1..N-1; column 0 carries the
/// wrap entry sqrt(N) at row N-1.
ComplexMatrix reconstruct_a(const ModeOperators& ops);

/// b (a^dag a)^{1/2}: the right-ordered inverse.  The factor vanishes on |0>,
/// so this reproduces a on every column.
ComplexMatrix reconstruct_a_right(const ModeOperators& ops);

struct BEigensystem {
  std::vector<Complex> eigenvalues;  // exp(-2 pi i k/N)
  ComplexMatrix eigenvectors;        // column k: <n|b_k> = exp(-2 pi i k n/N)/sqrt(N)
};

BEigensystem b_eigensystem(const ModeOperators& ops);

/// Norms of the commutator identities and their finite-truncation defects.
struct CommutatorReport {
  int levels = 0;
  /// max |([b, number] - b)_{ij}| over columns 1..N-1 (expected 0).
  double b_number_defect_interior = 0.0;
  /// ([b, number])_{N-1,0}; equals -(N-1).
  Complex b_number_wrap_entry;
  /// |([b, number] - b)_{N-1,0}| = N.
  double b_number_wrap_defect = 0.0;
  /// max |([q,p] - i I)_{ij}| over i, j < N-1 (expected 0).
  double qp_defect_interior = 0.0;
  /// ([q,p])_{N-1,N-1}; equals i(1-N).
  Complex qp_top_entry;
  /// max |([a, a^dag] - I)_{ij}| over i, j < N-1.
  double a_adag_defect_interior = 0.0;
  /// max |[b, b^dag]| (exactly 0: b is unitary and cyclic).
  double b_bdag_commutator = 0.0;
  /// max |b b^dag - I|.
  double b_unitarity = 0.0;
  /// max |truncate_from_a - b| over columns 1..N-1.
  double truncation_defect_interior = 0.0;
  /// |b_{N-1,0} - truncate_from_a_{N-1,0}|: the wrap element, magnitude 1.
  double truncation_wrap_defect = 0.0;
  /// max |reconstruct_a - a| over columns 1..N-1.
  double reconstruction_defect_interior = 0.0;
  /// |reconstruct_a_{N-1,0}| = sqrt(N).
  double reconstruction_wrap_entry = 0.0;
};

CommutatorReport commutator_defect(const ModeOperators& ops);

/// Largest |m_ij| of a matrix.
double max_abs(const ComplexMatrix& m);

inline ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  return x * y - y * x;
}

}  // namespace ontic
