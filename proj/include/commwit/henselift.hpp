#pragma once

#include <optional>

#include "commwit/commdecomp.hpp"

namespace commwit {

enum class DerivDomain { SL, GL };

/// Matrix of the derivative of the commutator map at (g1bar, g2bar) over F_p:
/// (X,Y) |-> [ (X^{g2} - X)^{g1^{-1}} + (Y^{g1^{-1}} - Y) ]^{g2^{-1}}, X^h = h^{-1} X h,
/// in the fixed sl_n (or gl_n) coordinates. The image always lies in sl_n.
struct CommutatorDerivative {
    RMatrix g1bar, g2bar;
    DerivDomain domain = DerivDomain::SL;
    LinearMapOverField map; // rows = sl_dim(n), cols = 2 * block_dim
};

CommutatorDerivative commutator_derivative(const RMatrix& g1, const RMatrix& g2,
                                           DerivDomain domain = DerivDomain::SL);

/// True iff the coadjoint actions of g1bar and g2bar on sl_n^*(F_p) share a
/// nonzero fixed vector (the obstruction to surjectivity of the derivative).
bool has_common_fixed_covector(const RMatrix& g1bar, const RMatrix& g2bar);

/// Level-by-level Hensel lifting: from [g1,g2] = A (mod p^j) to exact equality
/// in Z/p^k. Requires the derivative at the residues to be surjective onto sl_n.
/// Determinants of g1, g2 are preserved exactly.
std::pair<RMatrix, RMatrix> hensel_lift_commutator(const RMatrix& g1, const RMatrix& g2, const RMatrix& A,
                                                   u32 start_level, DerivDomain domain = DerivDomain::SL);

enum class ScalarRoute { PlainCycle, MuRescaled, TwistedAlgebra, PairSearch };

struct ScalarWitnessResult {
    CommutatorWitness witness;
    ScalarRoute route;
    RMatrix base_g1, base_g2; // residue base pair over F_p
};

/// Witness [g1,g2] = A for A congruent to lambda*I mod m with lambda a
/// primitive n-th root of unity in F_p and det(A) = 1.
ScalarWitnessResult scalar_commutator(const RingElem& lambda, const RMatrix& A);

struct ObstructionReport {
    std::size_t n = 0;
    u64 p = 0;
    RMatrix target;
    u64 pairs_with_commutator = 0;
    bool all_pairs_obstructed = true;
    std::optional<std::pair<RMatrix, RMatrix>> witness_pair; // first unobstructed pair
};

/// Enumerates all (g1, g2) in SL_n(F_p)^2 with [g1,g2] = gbar and checks each
/// for a common fixed covector. pair_budget caps |G|^2.
ObstructionReport obstruction_scan(const RMatrix& gbar, u64 pair_budget = 1'000'000, int jobs = 1);

struct NilpotentCheckReport {
    std::size_t n = 0;
    u64 p = 0;
    Ring ring;                    // the nilpotent extension K + sum e_x K, x in sl_n(K)
    u64 commuting_pairs = 0;      // pairs with [g1,g2] = I
    std::size_t sl_dimension = 0;
    std::size_t max_image_rank = 0; // max rank of (h1,h2) |-> (1-g2)h1 + (1-g1^{-1})h2
    bool certified = false;       // every commuting pair misses some x in sl_n(K)
    RMatrix element;              // I + sum_x x e_x, the certified non-commutator
};

/// Builds the square-zero extension indexed by sl_n(F_p) and certifies that
/// I + sum_x x e_x is not a commutator in SL_n(O), via the per-pair linear
/// criterion. Requires obstruction_scan(I) to report every pair obstructed.
NilpotentCheckReport nilpotent_noncommutator_check(std::size_t n, u64 p, u64 pair_budget = 1'000'000);

} // namespace commwit
