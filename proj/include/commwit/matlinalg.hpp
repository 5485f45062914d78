#pragma once

#include <optional>
#include <vector>

#include "commwit/localring.hpp"

namespace commwit {

/// Square matrix over a localring Ring. All entries share the descriptor;
/// equality is entry-wise canonical-representative equality.
class RMatrix {
public:
    RMatrix(Ring ring, std::size_t n); // zero matrix
    static RMatrix identity(const Ring& ring, std::size_t n);
    static RMatrix from_values(const Ring& ring, std::size_t n, const std::vector<i64>& rowmajor);
    static RMatrix diagonal(const std::vector<RingElem>& diag);
    static RMatrix scalar(const Ring& ring, std::size_t n, const RingElem& c);

    const Ring& ring() const { return ring_; }
    std::size_t n() const { return n_; }
    RingElem& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const RingElem& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    bool operator==(const RMatrix& o) const;
    bool operator!=(const RMatrix& o) const { return !(*this == o); }

    RMatrix operator*(const RMatrix& o) const;
    RMatrix operator+(const RMatrix& o) const;
    RMatrix operator-(const RMatrix& o) const;
    RMatrix scaled(const RingElem& c) const;
    RMatrix transpose() const;
    RMatrix pow(i64 e) const; // negative exponents via inverse

    bool is_identity() const;
    bool is_invertible() const { return det(*this).is_unit(); }
    bool is_in_sl() const { return det(*this).is_one(); }

    RMatrix reduce_to_field() const;
    RMatrix reduce_precision(u32 j) const;
    RMatrix lift_to(const Ring& target) const; // canonical entry-wise lift

    /// Row-major canonical values; doubles as the deterministic ordering key.
    std::vector<u64> canonical_key() const;
    bool lex_less(const RMatrix& o) const;
    std::string str() const;

    friend RingElem det(const RMatrix& A);
    friend RMatrix inverse(const RMatrix& A);

private:
    Ring ring_;
    std::size_t n_;
    std::vector<RingElem> e_;
};

/// Exact determinant (division-free expansion over column subsets).
RingElem det(const RMatrix& A);

/// Exact inverse via Gauss-Jordan with unit pivots; throws NotInvertible.
RMatrix inverse(const RMatrix& A);

/// g1 g2 g1^{-1} g2^{-1}.
RMatrix commutator(const RMatrix& g1, const RMatrix& g2);

/// g A g^{-1}.
RMatrix conjugate(const RMatrix& g, const RMatrix& A);

/// True iff the residue of A is c*I for some c in F_p.
bool is_scalar_mod_m(const RMatrix& A);

bool is_lower_unipotent(const RMatrix& A);
bool is_upper_unipotent(const RMatrix& A);

/// Coefficients of det(xI - A), constant term first (degree n, monic).
std::vector<RingElem> charpoly(const RMatrix& A);

// ---------------------------------------------------------------------------
// Linear algebra over F_p in fixed coordinates.
//
// gl_n basis: E_ij in row-major order (n^2 vectors).
// sl_n basis: off-diagonal E_ij in row-major order (n^2 - n vectors), then
//             H_i = E_ii - E_{i+1,i+1} for i = 0..n-2.
// These coordinates are fixed so derivative matrices reproduce bit-for-bit.

struct LinearMapOverField {
    u64 p = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<u64> a; // row-major, canonical residues

    u64& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    u64 at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    static LinearMapOverField zero(u64 p, std::size_t rows, std::size_t cols);
    static LinearMapOverField identity(u64 p, std::size_t n);
    LinearMapOverField transpose() const;
    std::vector<u64> apply(const std::vector<u64>& x) const;
    bool operator==(const LinearMapOverField& o) const = default;
};

struct FieldSolveResult {
    std::optional<std::vector<u64>> solution; // free variables pinned to 0
    std::size_t rank = 0;
    std::vector<std::vector<u64>> nullspace;
};

/// Gaussian elimination over F_p: one solution (or Absent), rank, nullspace basis.
FieldSolveResult solve_over_field(const LinearMapOverField& M, const std::vector<u64>& b);
std::size_t rank_over_field(const LinearMapOverField& M);

/// Stack maps vertically (same cols).
LinearMapOverField stack_maps(const LinearMapOverField& top, const LinearMapOverField& bottom);

/// Valuation-aware elimination over Z/p^k (Howell-style pivoting on minimal
/// valuation). Sound and complete: returns one exact solution or Absent.
std::optional<std::vector<RingElem>> solve_over_ring(const Ring& ring, std::size_t rows, std::size_t cols,
                                                     const std::vector<RingElem>& M,
                                                     const std::vector<RingElem>& b);

/// Kernel vector of an n x n matrix over Z/p^k whose reduction has rank n-1;
/// the free coordinate is pinned to 1 (used for eigenvector lifting).
std::vector<RingElem> kernel_vector_rank_deficient_one(const RMatrix& M);

// sl_n / gl_n coordinates over a residue field ring.
std::size_t sl_dim(std::size_t n);
RMatrix sl_basis_matrix(const Ring& field, std::size_t n, std::size_t idx);
RMatrix gl_basis_matrix(const Ring& field, std::size_t n, std::size_t idx);
std::vector<u64> sl_coords(const RMatrix& M); // requires trace 0
std::vector<u64> gl_coords(const RMatrix& M);
RMatrix sl_from_coords(const Ring& field, std::size_t n, const std::vector<u64>& c);
RMatrix gl_from_coords(const Ring& field, std::size_t n, const std::vector<u64>& c);

/// Matrix of X |-> g^{-1} X g on sl_n(F_p) in the fixed coordinates.
LinearMapOverField adjoint_on_sl(const RMatrix& g);

/// All of SL_n(F_p) in canonical (lexicographic row-major) order.
/// Scans p^(n^2) entry tuples; throws BudgetExceeded past scan_budget.
std::vector<RMatrix> enumerate_sl(std::size_t n, u64 p, u64 scan_budget = 5'000'000);

} // namespace commwit
