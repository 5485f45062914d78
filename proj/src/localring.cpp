#include "commwit/localring.hpp"

#include <algorithm>
#include <sstream>

namespace commwit {

const char* err_name(Err e) {
    switch (e) {
    case Err::NotAUnit: return "NotAUnit";
    case Err::NoSuchRoot: return "NoSuchRoot";
    case Err::NotInvertible: return "NotInvertible";
    case Err::RingMismatch: return "RingMismatch";
    case Err::InvalidArgument: return "InvalidArgument";
    case Err::ScalarModM: return "ScalarModM";
    case Err::DeterminantMismatch: return "DeterminantMismatch";
    case Err::NotRegularSemisimple: return "NotRegularSemisimple";
    case Err::EigenvalueMismatch: return "EigenvalueMismatch";
    case Err::FieldTooSmall: return "FieldTooSmall";
    case Err::HypothesisViolated: return "HypothesisViolated";
    case Err::DerivativeNotSurjective: return "DerivativeNotSurjective";
    case Err::InconsistentCongruence: return "InconsistentCongruence";
    case Err::NoBasePairFound: return "NoBasePairFound";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::PreconditionUnverified: return "PreconditionUnverified";
    case Err::NotFound: return "NotFound";
    case Err::NotCovered: return "NotCovered";
    }
    return "Unknown";
}

u64 mod_add(u64 a, u64 b, u64 m) { return (a + b) % m; }
u64 mod_sub(u64 a, u64 b, u64 m) { return (a + m - b % m) % m; }
u64 mod_mul(u64 a, u64 b, u64 m) { return static_cast<u64>((__uint128_t)a * b % m); }
u64 mod_neg(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

u64 mod_pow(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mod_mul(r, a, m);
        a = mod_mul(a, a, m);
        e >>= 1;
    }
    return r;
}

std::optional<u64> mod_inv(u64 a, u64 m) {
    // extended Euclid on (a, m)
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) return std::nullopt;
    return canonical_mod(t, m);
}

u64 canonical_mod(i64 v, u64 m) {
    i64 mm = static_cast<i64>(m);
    i64 r = v % mm;
    if (r < 0) r += mm;
    return static_cast<u64>(r);
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mod_mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Ring

Ring Ring::zmod(u64 p, u32 k) {
    if (!is_prime_u64(p)) fail(Err::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
    if (k < 1) fail(Err::InvalidArgument, "precision k must be >= 1");
    // keep p^k within 62 bits so sums stay in-word and products fit __uint128_t
    u64 m = 1;
    for (u32 i = 0; i < k; ++i) {
        if (m > (u64(1) << 62) / p) fail(Err::InvalidArgument, "p^k exceeds supported word size");
        m *= p;
    }
    Ring r;
    r.kind_ = RingKind::TruncatedPAdic;
    r.p_ = p;
    r.k_ = k;
    r.modulus_ = m;
    return r;
}

Ring Ring::nilext(u64 p, std::vector<std::string> labels) {
    if (!is_prime_u64(p)) fail(Err::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
    if (labels.empty()) fail(Err::InvalidArgument, "NilpotentExtension needs at least one generator label");
    Ring r;
    r.kind_ = RingKind::NilpotentExtension;
    r.p_ = p;
    r.k_ = 2; // m != 0, m^2 = 0
    r.modulus_ = p;
    r.labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
    return r;
}

const std::vector<std::string>& Ring::labels() const {
    static const std::vector<std::string> empty;
    return labels_ ? *labels_ : empty;
}

std::string Ring::token() const {
    std::ostringstream os;
    if (kind_ == RingKind::TruncatedPAdic) {
        os << "Zmod(" << p_;
        if (k_ > 1) os << "^" << k_;
        os << ")";
    } else {
        os << "Nilext(" << p_ << "; " << labels_->size() << " gens)";
    }
    return os.str();
}

Ring Ring::parse_token(const std::string& tok) {
    auto bad = [&]() -> Ring { fail(Err::InvalidArgument, "bad ring token '" + tok + "'"); };
    if (tok.rfind("Zmod(", 0) == 0 && tok.back() == ')') {
        std::string body = tok.substr(5, tok.size() - 6);
        u64 p = 0;
        u32 k = 1;
        auto caret = body.find('^');
        try {
            if (caret == std::string::npos) {
                p = std::stoull(body);
            } else {
                p = std::stoull(body.substr(0, caret));
                k = static_cast<u32>(std::stoul(body.substr(caret + 1)));
            }
        } catch (const std::exception&) {
            return bad();
        }
        return zmod(p, k);
    }
    if (tok.rfind("Nilext(", 0) == 0 && tok.back() == ')') {
        std::string body = tok.substr(7, tok.size() - 8);
        auto semi = body.find(';');
        if (semi == std::string::npos) return bad();
        u64 p = 0;
        u64 count = 0;
        try {
            p = std::stoull(body.substr(0, semi));
            count = std::stoull(body.substr(semi + 1)); // leading space ok, " gens" trails
        } catch (const std::exception&) {
            return bad();
        }
        std::vector<std::string> labels;
        labels.reserve(count);
        for (u64 i = 0; i < count; ++i) labels.push_back("e" + std::to_string(i));
        return nilext(p, std::move(labels));
    }
    return bad();
}

bool Ring::operator==(const Ring& o) const {
    if (kind_ != o.kind_ || p_ != o.p_ || k_ != o.k_) return false;
    if (kind_ == RingKind::TruncatedPAdic) return true;
    if (labels_ == o.labels_) return true;
    return *labels_ == *o.labels_;
}

// ---------------------------------------------------------------------------
// RingElem

RingElem::RingElem(Ring ring, u64 value) : ring_(std::move(ring)) {
    a_ = value % ring_.modulus();
    if (ring_.kind() == RingKind::NilpotentExtension) coeffs_.assign(ring_.generator_count(), 0);
}

RingElem::RingElem(Ring ring, u64 constant, std::vector<u64> coeffs) : ring_(std::move(ring)) {
    if (ring_.kind() != RingKind::NilpotentExtension)
        fail(Err::InvalidArgument, "coefficient constructor is for NilpotentExtension rings");
    if (coeffs.size() != ring_.generator_count())
        fail(Err::InvalidArgument, "coefficient count does not match generator count");
    a_ = constant % ring_.p();
    coeffs_ = std::move(coeffs);
    for (auto& c : coeffs_) c %= ring_.p();
}

RingElem RingElem::from_int(const Ring& r, i64 v) { return RingElem(r, canonical_mod(v, r.modulus())); }

void RingElem::check_same_ring(const RingElem& o) const {
    if (ring_ != o.ring_)
        fail(Err::RingMismatch, "operands live in " + ring_.token() + " and " + o.ring_.token());
}

bool RingElem::is_zero() const {
    if (a_ != 0) return false;
    for (u64 c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool RingElem::is_one() const {
    if (a_ != 1) return false;
    for (u64 c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool RingElem::is_unit() const {
    if (ring_.kind() == RingKind::TruncatedPAdic) return a_ % ring_.p() != 0;
    return a_ != 0;
}

bool RingElem::operator==(const RingElem& o) const {
    return ring_ == o.ring_ && a_ == o.a_ && coeffs_ == o.coeffs_;
}

RingElem RingElem::operator+(const RingElem& o) const {
    check_same_ring(o);
    RingElem r(*this);
    u64 m = ring_.modulus();
    r.a_ = mod_add(a_, o.a_, m);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = mod_add(coeffs_[i], o.coeffs_[i], ring_.p());
    return r;
}

RingElem RingElem::operator-(const RingElem& o) const {
    check_same_ring(o);
    RingElem r(*this);
    u64 m = ring_.modulus();
    r.a_ = mod_sub(a_, o.a_, m);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = mod_sub(coeffs_[i], o.coeffs_[i], ring_.p());
    return r;
}

RingElem RingElem::operator*(const RingElem& o) const {
    check_same_ring(o);
    RingElem r(*this);
    if (ring_.kind() == RingKind::TruncatedPAdic) {
        r.a_ = mod_mul(a_, o.a_, ring_.modulus());
        return r;
    }
    // (c + n)(c' + n') = cc' + c n' + c' n   with n n' = 0
    u64 p = ring_.p();
    r.a_ = mod_mul(a_, o.a_, p);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        r.coeffs_[i] = mod_add(mod_mul(a_, o.coeffs_[i], p), mod_mul(o.a_, coeffs_[i], p), p);
    return r;
}

RingElem RingElem::operator-() const {
    RingElem r(*this);
    r.a_ = mod_neg(a_, ring_.modulus());
    for (auto& c : r.coeffs_) c = mod_neg(c, ring_.p());
    return r;
}

RingElem RingElem::invert() const {
    if (!is_unit()) fail(Err::NotAUnit, "residue of " + str() + " vanishes in " + ring_.token());
    if (ring_.kind() == RingKind::TruncatedPAdic) {
        auto inv = mod_inv(a_, ring_.modulus());
        return RingElem(ring_, *inv);
    }
    // (c + n)^{-1} = c^{-1} - c^{-2} n since n^2 = 0
    u64 p = ring_.p();
    u64 ci = *mod_inv(a_, p);
    u64 ci2 = mod_mul(ci, ci, p);
    RingElem r(*this);
    r.a_ = ci;
    for (auto& c : r.coeffs_) c = mod_neg(mod_mul(ci2, c, p), p);
    return r;
}

RingElem RingElem::reduce_to_field() const { return RingElem(ring_.residue_field(), a_ % ring_.p()); }

u32 RingElem::valuation() const {
    if (ring_.kind() != RingKind::TruncatedPAdic)
        fail(Err::InvalidArgument, "valuation is defined for TruncatedPAdic rings");
    if (a_ == 0) return ring_.k();
    u32 v = 0;
    u64 x = a_;
    while (x % ring_.p() == 0) {
        x /= ring_.p();
        ++v;
    }
    return v;
}

RingElem RingElem::reduce_precision(u32 j) const {
    if (ring_.kind() != RingKind::TruncatedPAdic || j < 1 || j > ring_.k())
        fail(Err::InvalidArgument, "bad precision reduction");
    Ring t = Ring::zmod(ring_.p(), j);
    return RingElem(t, a_ % t.modulus());
}

RingElem RingElem::lift_to(const Ring& target) const {
    if (ring_.kind() != RingKind::TruncatedPAdic || target.kind() != RingKind::TruncatedPAdic ||
        target.p() != ring_.p() || target.k() < ring_.k())
        fail(Err::InvalidArgument, "canonical lift needs a higher-precision ring over the same p");
    return RingElem(target, a_);
}

std::string RingElem::str() const {
    if (ring_.kind() == RingKind::TruncatedPAdic) return std::to_string(a_);
    std::ostringstream os;
    os << a_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) os << " + " << coeffs_[i] << "*" << ring_.labels()[i];
    return os.str();
}

// ---------------------------------------------------------------------------
// Field helpers

RingElem primitive_root_of_unity(u64 n, u64 p) {
    Ring f = Ring::zmod(p, 1);
    if (n == 0 || (p - 1) % n != 0)
        fail(Err::NoSuchRoot, std::to_string(n) + " does not divide p-1 = " + std::to_string(p - 1));
    for (u64 x = 1; x < p; ++x) {
        if (mod_pow(x, n, p) != 1) continue;
        RingElem cand(f, x);
        if (multiplicative_order(cand) == n) return cand;
    }
    fail(Err::NoSuchRoot, "no element of order " + std::to_string(n) + " in F_" + std::to_string(p));
}

std::optional<RingElem> solve_power(const RingElem& c, u64 n) {
    const Ring& f = c.ring();
    if (!f.is_field()) fail(Err::InvalidArgument, "solve_power works in the residue field");
    if (c.is_zero()) fail(Err::InvalidArgument, "solve_power needs c != 0");
    for (u64 x = 1; x < f.p(); ++x)
        if (mod_pow(x, n, f.p()) == c.value()) return RingElem(f, x);
    return std::nullopt;
}

u64 multiplicative_order(const RingElem& x) {
    if (!x.ring().is_field() || x.is_zero()) fail(Err::InvalidArgument, "order needs a unit of F_p");
    u64 p = x.ring().p();
    u64 acc = x.value();
    u64 ord = 1;
    while (acc != 1) {
        acc = mod_mul(acc, x.value(), p);
        ++ord;
    }
    return ord;
}

RingElem lift_root_of_unity(const RingElem& residue, u64 n, const Ring& target) {
    if (!residue.ring().is_field() || target.kind() != RingKind::TruncatedPAdic ||
        target.p() != residue.ring().p())
        fail(Err::InvalidArgument, "lift_root_of_unity: incompatible rings");
    if (n % target.p() == 0 || mod_pow(residue.value(), n, target.p()) != 1)
        fail(Err::HypothesisViolated, "residue is not a simple n-th root of unity");
    // Newton on f(x) = x^n - 1: the derivative n x^{n-1} stays a unit.
    u64 m = target.modulus();
    u64 x = residue.value();
    for (u32 it = 0; it < target.k() + 2; ++it) {
        u64 fx = mod_sub(mod_pow(x, n, m), 1, m);
        if (fx == 0) break;
        u64 dfx = mod_mul(n % m, mod_pow(x, n - 1, m), m);
        x = mod_sub(x, mod_mul(fx, *mod_inv(dfx, m), m), m);
    }
    if (mod_pow(x, n, m) != 1) fail(Err::HypothesisViolated, "root lifting failed to converge");
    return RingElem(target, x);
}

} // namespace commwit
