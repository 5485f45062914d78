#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "commwit/error.hpp"

namespace commwit {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Plain modular helpers (modulus must fit in 62 bits; products go through 128-bit).
u64 mod_add(u64 a, u64 b, u64 m);
u64 mod_sub(u64 a, u64 b, u64 m);
u64 mod_mul(u64 a, u64 b, u64 m);
u64 mod_pow(u64 a, u64 e, u64 m);
u64 mod_neg(u64 a, u64 m);
std::optional<u64> mod_inv(u64 a, u64 m); // nullopt when gcd(a, m) != 1
bool is_prime_u64(u64 n);
u64 canonical_mod(i64 v, u64 m);

enum class RingKind { TruncatedPAdic, NilpotentExtension };

/// Descriptor of a truncated local ring: Z/p^k, or the square-zero extension
/// F_p ⊕ ⊕_x e_x F_p with caller-supplied generator labels.
class Ring {
public:
    static Ring zmod(u64 p, u32 k);
    static Ring nilext(u64 p, std::vector<std::string> labels);

    RingKind kind() const { return kind_; }
    u64 p() const { return p_; }
    u32 k() const { return k_; }
    u64 modulus() const { return modulus_; } // p^k for TruncatedPAdic, p for NilpotentExtension constants
    bool is_field() const { return kind_ == RingKind::TruncatedPAdic && k_ == 1; }
    std::size_t generator_count() const { return labels_ ? labels_->size() : 0; }
    const std::vector<std::string>& labels() const;

    Ring residue_field() const { return zmod(p_, 1); }

    std::string token() const;
    static Ring parse_token(const std::string& tok);

    bool operator==(const Ring& o) const;
    bool operator!=(const Ring& o) const { return !(*this == o); }

private:
    Ring() = default;
    RingKind kind_ = RingKind::TruncatedPAdic;
    u64 p_ = 0;
    u32 k_ = 0;
    u64 modulus_ = 0;
    std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Element of a Ring, stored as the canonical representative.
/// TruncatedPAdic: value in [0, p^k).  NilpotentExtension: constant in [0, p)
/// plus one F_p coefficient per generator (e_x * e_y = 0).
class RingElem {
public:
    RingElem(Ring ring, u64 value);                             // canonical value, coeffs = 0
    RingElem(Ring ring, u64 constant, std::vector<u64> coeffs); // NilpotentExtension only

    static RingElem zero(const Ring& r) { return RingElem(r, 0); }
    static RingElem one(const Ring& r) { return RingElem(r, 1); }
    static RingElem from_int(const Ring& r, i64 v);

    const Ring& ring() const { return ring_; }
    u64 value() const { return a_; } // constant part for NilpotentExtension
    const std::vector<u64>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const; // residue nonzero
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator-() const;

    /// Multiplicative inverse; throws NotAUnit when the residue vanishes.
    RingElem invert() const;

    /// Image in the residue field F_p (ring homomorphism).
    RingElem reduce_to_field() const;

    /// p-adic valuation in {0,...,k}; valuation(0) = k. TruncatedPAdic only.
    u32 valuation() const;

    /// Canonical re-interpretation at lower precision j <= k (TruncatedPAdic).
    RingElem reduce_precision(u32 j) const;

    /// Canonical lift into a higher-precision ring with the same p (value unchanged).
    RingElem lift_to(const Ring& target) const;

    std::string str() const;

private:
    void check_same_ring(const RingElem& o) const;
    Ring ring_;
    u64 a_ = 0;
    std::vector<u64> coeffs_;
};

/// Smallest element of F_p of multiplicative order exactly n. Requires n | p-1.
RingElem primitive_root_of_unity(u64 n, u64 p);

/// Smallest mu in F_p^x with mu^n = c, if any.
std::optional<RingElem> solve_power(const RingElem& c, u64 n);

/// Multiplicative order of a unit of F_p.
u64 multiplicative_order(const RingElem& x);

/// Unique n-th root of 1 in Z/p^k with the given residue (requires residue^n = 1, p ∤ n).
RingElem lift_root_of_unity(const RingElem& residue, u64 n, const Ring& target);

} // namespace commwit
