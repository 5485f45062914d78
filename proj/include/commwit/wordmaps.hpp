#pragma once

#include <functional>
#include <string>

#include "commwit/group_table.hpp"

namespace commwit {

struct WordLetter {
    u32 gen;  // 1-based generator index
    i64 exp;  // nonzero
};

/// Reduced word in the free group F_d: adjacent letters never share a
/// generator; zero exponents are elided on construction.
class Word {
public:
    Word() = default; // trivial word, arity 0
    static Word from_letters(u32 arity, std::vector<WordLetter> letters);

    /// Grammar: products of xN or xN^M (M possibly negative) joined by '*',
    /// plus the commutator shorthand [u,v]. Examples: "x1^2*x2^-3*x1", "[x1,x2]".
    static Word parse(const std::string& text);

    static Word commutator_xy(); // [x1,x2]

    u32 arity() const { return arity_; }
    const std::vector<WordLetter>& letters() const { return letters_; }
    bool is_trivial() const { return letters_.empty(); }

    Word inverse() const;
    Word concat(const Word& o) const;
    Word substitute_inverse_generators() const; // x_i -> x_i^{-1}

    std::string str() const;

private:
    u32 arity_ = 0;
    std::vector<WordLetter> letters_;
};

/// Exact product of powers; negative exponents via exact inversion.
RMatrix evaluate_word(const Word& w, const std::vector<RMatrix>& tuple);

/// Differential of the word map at a tuple over F_p, as a map gl_n^d -> gl_n
/// in the fixed coordinates, computed over the dual numbers R[eps]/(eps^2).
LinearMapOverField word_derivative(const Word& w, const std::vector<RMatrix>& tuple);

/// Same differential restricted to sl_n^d -> sl_n (the congruence-quotient
/// tangent directions used by lifting).
LinearMapOverField word_derivative_sl(const Word& w, const std::vector<RMatrix>& tuple);

/// Hensel lift of a word value: tuple' = tuple mod p with w(tuple') = target
/// exactly. Needs the sl-restricted derivative at the residues to cover sl_n,
/// and det(w(tuple)) = det(target) exactly.
std::vector<RMatrix> lift_word_value(const Word& w, const std::vector<RMatrix>& tuple, const RMatrix& target);

// ---------------------------------------------------------------------------
// Enumeration kernels. jobs <= 1 runs the serial reference implementation;
// jobs > 1 runs the OpenMP variant. Results are identical by construction.

struct ImageStats {
    DynBitset image;
    u64 tuples_scanned = 0;
    // first (in enumeration order) preimage of the identity and of the
    // smallest image element, as certificate samples
    std::vector<std::pair<u32, std::vector<u32>>> samples;
};

ImageStats image_of_word(const FiniteGroupTable& G, const Word& w, u64 tuple_budget, int jobs);

DynBitset product_set(const FiniteGroupTable& G, const DynBitset& A, const DynBitset& B, int jobs);

bool is_conjugation_closed(const FiniteGroupTable& G, const DynBitset& S, int jobs);

DynBitset inverse_set(const FiniteGroupTable& G, const DynBitset& S);

// ---------------------------------------------------------------------------
// Reports

struct WordImageReport {
    std::string word;
    std::size_t n = 0;
    u64 p = 0;
    u64 group_order = 0;
    u64 image_size = 0;
    bool conjugation_closed = false;
    bool inverse_closed = false;
    bool contains_identity = false;
    bool sampled = false; // always false: acceptance paths are exhaustive
    std::vector<std::pair<RMatrix, std::vector<RMatrix>>> samples;
};

WordImageReport word_image(const Word& w, std::size_t n, u64 p, u64 budget = 5'000'000, int jobs = 1);

struct CoverReport {
    std::vector<std::string> words;
    std::size_t n = 0;
    u64 p = 0;
    u64 group_order = 0;
    std::vector<u64> image_sizes;
    u64 product_size = 0;
    bool cover = false; // triple: product = G; double: product covers G minus center
    std::vector<RMatrix> center_covered, center_uncovered;
};

CoverReport check_triple_cover(const Word& w1, const Word& w2, const Word& w3, std::size_t n, u64 p,
                               u64 budget = 5'000'000, int jobs = 1);

CoverReport check_double_cover_noncentral(const Word& w1, const Word& w2, std::size_t n, u64 p,
                                          u64 budget = 5'000'000, int jobs = 1);

struct ClassProductReport {
    std::size_t n = 0;
    u64 p = 0;
    std::vector<u64> t1, t2; // diagonals
    u64 class1_size = 0, class2_size = 0;
    u64 product_size = 0;
    bool covers_noncentral = false;
};

/// Conjugacy-class product check for regular split torus elements.
ClassProductReport check_class_product(std::size_t n, u64 p, const std::vector<u64>& t1_diag,
                                       const std::vector<u64>& t2_diag, u64 budget = 5'000'000,
                                       int jobs = 1);

struct RegularSplitValue {
    std::vector<RMatrix> tuple;
    RMatrix value;
    RMatrix diagonalizer;             // S with S^{-1} value S = diag(eigenvalues)
    std::vector<RingElem> eigenvalues; // sorted, pairwise distinct in F_p
};

/// First tuple (in canonical order) outside `avoid` whose word value is
/// regular split semisimple; throws NotFound when the budget is exhausted.
RegularSplitValue find_regular_split_value(const Word& w, std::size_t n, u64 p,
                                           const std::function<bool(const std::vector<RMatrix>&)>& avoid,
                                           u64 budget = 5'000'000);

} // namespace commwit
