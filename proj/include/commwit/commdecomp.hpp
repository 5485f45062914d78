#pragma once

#include "commwit/matlinalg.hpp"

namespace commwit {

/// Location of a witness pair: SL = both factors have determinant 1 and the
/// commutator equals the target exactly; PslPair = factors are merely
/// invertible and the commutator equals zeta * target for an exact n-th root
/// of unity zeta.
enum class WitnessMode { SL, PslPair };

struct CommutatorWitness {
    RMatrix target, g1, g2;
    WitnessMode mode = WitnessMode::SL;
};

/// X * (g A g^{-1}) * Y = D with X lower unipotent, Y upper unipotent,
/// D = diag(targets).
struct DecompositionTrace {
    RMatrix g, X, Y, D;
    std::vector<RingElem> targets;
};

struct VerifyReport {
    bool ok = true;
    std::string reason; // first failed check
};

/// Re-checks a witness from scratch by exact multiplication (and the trace
/// identity when a trace is supplied).
VerifyReport verify_witness(const CommutatorWitness& w, const DecompositionTrace* trace = nullptr);

/// Conjugator X in SL_2(O) with (X A X^{-1})_{1,1} = alpha.
/// A must be invertible and non-scalar mod m.
RMatrix conjugate_entry_2x2(const RMatrix& A, const RingElem& alpha);

/// Conjugator g in SL_n(O), n >= 3, such that g A g^{-1} = [[a, w^T],[z, C]]
/// with aC - z w^T non-scalar mod m. A invertible, non-scalar mod m; a a unit.
RMatrix conjugate_first_entry(const RMatrix& A, const RingElem& a);

/// Units a_1..a_n with prod = 1 exactly, a_i = a_{n+1-i}^{-1} exactly, and
/// pairwise distinct residues; deterministic smallest choice. Needs p > n+1.
std::vector<RingElem> choose_balanced_targets(std::size_t n, const Ring& ring);

/// X * (g A g^{-1}) * Y = diag(targets) exactly. Requires prod(targets) = det(A).
DecompositionTrace diagonalize_via_unipotents(const RMatrix& A, const std::vector<RingElem>& targets);

/// h with h P h^{-1} = Q exactly and det(h) = 1 exactly, for P, Q sharing a
/// characteristic polynomial that splits over F_p with n distinct unit roots.
RMatrix cyclic_conjugator(const RMatrix& P, const RMatrix& Q);

/// Explicit witness [g1,g2] = A for non-scalar-mod-m A in SL_n(Z/p^k), p > n+1.
std::pair<CommutatorWitness, DecompositionTrace> commutator_witness(const RMatrix& A);

struct PslWitness {
    CommutatorWitness witness;
    RingElem zeta;          // exact scalar with [g1,g2] = zeta * target
    bool scalar_route = false;
};

/// Commutator witness for A regarded as a PSL_n(O) representative; requires n
/// to be a proper divisor of p-1. Scalar-mod-m inputs go through the
/// primitive-root route after an exact central adjustment.
PslWitness psl_commutator(const RMatrix& A);

} // namespace commwit
