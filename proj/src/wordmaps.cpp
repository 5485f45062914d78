#include "commwit/wordmaps.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>

namespace commwit {

// ---------------------------------------------------------------------------
// Word

Word Word::from_letters(u32 arity, std::vector<WordLetter> letters) {
    Word w;
    w.arity_ = arity;
    for (const auto& l : letters) {
        if (l.gen < 1 || l.gen > arity) fail(Err::InvalidArgument, "generator index out of range");
        if (l.exp == 0) continue;
        if (!w.letters_.empty() && w.letters_.back().gen == l.gen) {
            w.letters_.back().exp += l.exp;
            if (w.letters_.back().exp == 0) w.letters_.pop_back();
        } else {
            w.letters_.push_back(l);
        }
    }
    return w;
}

namespace {

struct WordParser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void bail(const std::string& why) {
        fail(Err::InvalidArgument, "word parse error at offset " + std::to_string(pos) + ": " + why);
    }
    i64 parse_int() {
        skip_ws();
        bool neg = eat('-');
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) bail("expected integer");
        i64 v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }
    // factor := xN (^M)? | [expr, expr] (^M)?
    std::vector<WordLetter> parse_factor(u32& max_gen) {
        skip_ws();
        std::vector<WordLetter> base;
        if (eat('x')) {
            i64 g = parse_int();
            if (g < 1) bail("generator index must be positive");
            max_gen = std::max<u32>(max_gen, static_cast<u32>(g));
            base.push_back({static_cast<u32>(g), 1});
        } else if (eat('[')) {
            auto u = parse_expr(max_gen);
            if (!eat(',')) bail("expected ',' in commutator");
            auto v = parse_expr(max_gen);
            if (!eat(']')) bail("expected ']'");
            auto inv = [](std::vector<WordLetter> ls) {
                std::reverse(ls.begin(), ls.end());
                for (auto& l : ls) l.exp = -l.exp;
                return ls;
            };
            base = u;
            base.insert(base.end(), v.begin(), v.end());
            auto ui = inv(u), vi = inv(v);
            base.insert(base.end(), ui.begin(), ui.end());
            base.insert(base.end(), vi.begin(), vi.end());
        } else {
            bail("expected 'x<N>' or '['");
        }
        if (eat('^')) {
            i64 e = parse_int();
            if (e == 0) return {};
            if (base.size() == 1) { // plain generator power: keep it as one letter
                base[0].exp *= e;
                return base;
            }
            if (e > 4096 || e < -4096) bail("bracket exponent out of range");
            std::vector<WordLetter> powed;
            std::vector<WordLetter> unit = base;
            if (e < 0) {
                std::reverse(unit.begin(), unit.end());
                for (auto& l : unit) l.exp = -l.exp;
                e = -e;
            }
            for (i64 i = 0; i < e; ++i) powed.insert(powed.end(), unit.begin(), unit.end());
            return powed;
        }
        return base;
    }
    std::vector<WordLetter> parse_expr(u32& max_gen) {
        std::vector<WordLetter> out = parse_factor(max_gen);
        for (;;) {
            skip_ws();
            if (eat('*')) {
                auto f = parse_factor(max_gen);
                out.insert(out.end(), f.begin(), f.end());
            } else {
                return out;
            }
        }
    }
};

} // namespace

Word Word::parse(const std::string& text) {
    std::string trimmed = text;
    // "1" denotes the trivial word
    if (trimmed.find_first_not_of(" \t1") == std::string::npos) return Word();
    WordParser p{text};
    u32 max_gen = 0;
    auto letters = p.parse_expr(max_gen);
    p.skip_ws();
    if (p.pos != text.size()) p.bail("trailing input");
    return from_letters(max_gen, std::move(letters));
}

Word Word::commutator_xy() { return parse("[x1,x2]"); }

Word Word::inverse() const {
    std::vector<WordLetter> ls(letters_.rbegin(), letters_.rend());
    for (auto& l : ls) l.exp = -l.exp;
    return from_letters(arity_, std::move(ls));
}

Word Word::concat(const Word& o) const {
    std::vector<WordLetter> ls = letters_;
    ls.insert(ls.end(), o.letters_.begin(), o.letters_.end());
    return from_letters(std::max(arity_, o.arity_), std::move(ls));
}

Word Word::substitute_inverse_generators() const {
    std::vector<WordLetter> ls = letters_;
    for (auto& l : ls) l.exp = -l.exp;
    return from_letters(arity_, std::move(ls));
}

std::string Word::str() const {
    if (letters_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += "*";
        out += "x" + std::to_string(letters_[i].gen);
        if (letters_[i].exp != 1) out += "^" + std::to_string(letters_[i].exp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation and the dual-number differential

RMatrix evaluate_word(const Word& w, const std::vector<RMatrix>& tuple) {
    if (tuple.empty()) fail(Err::InvalidArgument, "evaluate_word needs at least one matrix");
    if (tuple.size() < w.arity()) fail(Err::InvalidArgument, "tuple shorter than word arity");
    const Ring& ring = tuple[0].ring();
    std::size_t n = tuple[0].n();
    for (const auto& g : tuple) {
        if (g.ring() != ring || g.n() != n) fail(Err::RingMismatch, "tuple matrices must match");
        if (!det(g).is_unit()) fail(Err::NotInvertible, "tuple matrices must be invertible");
    }
    RMatrix acc = RMatrix::identity(ring, n);
    for (const auto& l : w.letters()) acc = acc * tuple[l.gen - 1].pow(l.exp);
    return acc;
}

namespace {

// matrices over R[eps]/(eps^2)
struct DualMat {
    RMatrix a, b; // a + eps b

    DualMat(RMatrix a_, RMatrix b_) : a(std::move(a_)), b(std::move(b_)) {}
    DualMat operator*(const DualMat& o) const { return DualMat(a * o.a, a * o.b + b * o.a); }
    DualMat inv() const {
        RMatrix ai = inverse(a);
        return DualMat(ai, (ai * b * ai).scaled(-RingElem::one(a.ring())));
    }
    DualMat pow(i64 e) const {
        DualMat base = e < 0 ? inv() : *this;
        u64 exp = e < 0 ? static_cast<u64>(-e) : static_cast<u64>(e);
        DualMat acc(RMatrix::identity(a.ring(), a.n()), RMatrix(a.ring(), a.n()));
        while (exp) {
            if (exp & 1) acc = acc * base;
            base = base * base;
            exp >>= 1;
        }
        return acc;
    }
};

RMatrix dual_direction(const Word& w, const std::vector<RMatrix>& tuple, std::size_t slot,
                       const RMatrix& B) {
    const Ring& ring = tuple[0].ring();
    std::size_t n = tuple[0].n();
    RMatrix zero(ring, n);
    DualMat acc(RMatrix::identity(ring, n), zero);
    for (const auto& l : w.letters()) {
        const RMatrix& g = tuple[l.gen - 1];
        DualMat factor(g, l.gen - 1 == slot ? g * B : zero);
        acc = acc * factor.pow(l.exp);
    }
    // acc = W (1 + eps Z): extract Z
    return inverse(acc.a) * acc.b;
}

LinearMapOverField word_derivative_impl(const Word& w, const std::vector<RMatrix>& tuple, bool sl_domain) {
    if (tuple.empty() || !tuple[0].ring().is_field())
        fail(Err::InvalidArgument, "word derivative is taken over F_p");
    if (tuple.size() < std::max<std::size_t>(w.arity(), 1))
        fail(Err::InvalidArgument, "tuple shorter than word arity");
    const Ring& f = tuple[0].ring();
    std::size_t n = tuple[0].n();
    std::size_t d = std::max<std::size_t>(w.arity(), 1);
    std::size_t bd = sl_domain ? sl_dim(n) : n * n;
    std::size_t rows = sl_domain ? sl_dim(n) : n * n;
    auto M = LinearMapOverField::zero(f.p(), rows, d * bd);
    for (std::size_t slot = 0; slot < d; ++slot)
        for (std::size_t j = 0; j < bd; ++j) {
            RMatrix B = sl_domain ? sl_basis_matrix(f, n, j) : gl_basis_matrix(f, n, j);
            RMatrix Z = dual_direction(w, tuple, slot, B);
            auto col = sl_domain ? sl_coords(Z) : gl_coords(Z);
            for (std::size_t i = 0; i < rows; ++i) M.at(i, slot * bd + j) = col[i];
        }
    return M;
}

} // namespace

LinearMapOverField word_derivative(const Word& w, const std::vector<RMatrix>& tuple) {
    return word_derivative_impl(w, tuple, false);
}

LinearMapOverField word_derivative_sl(const Word& w, const std::vector<RMatrix>& tuple) {
    return word_derivative_impl(w, tuple, true);
}

std::vector<RMatrix> lift_word_value(const Word& w, const std::vector<RMatrix>& tuple,
                                     const RMatrix& target) {
    const Ring& ring = target.ring();
    if (ring.kind() != RingKind::TruncatedPAdic) fail(Err::InvalidArgument, "lifting works over Z/p^k");
    std::size_t n = target.n();
    u64 p = ring.p();
    u32 k = ring.k();
    std::size_t d = std::max<std::size_t>(w.arity(), 1);
    if (tuple.size() < d) fail(Err::InvalidArgument, "tuple shorter than word arity");
    for (const auto& g : tuple)
        if (g.ring() != ring || g.n() != n) fail(Err::RingMismatch, "tuple/target mismatch");

    RMatrix value = evaluate_word(w, tuple);
    if (det(value) != det(target))
        fail(Err::InconsistentCongruence, "det(w(tuple)) != det(target): no sl-direction lift exists");
    if (value.reduce_to_field() != target.reduce_to_field())
        fail(Err::InconsistentCongruence, "w(tuple) != target mod p");

    std::vector<RMatrix> bars;
    bars.reserve(d);
    for (std::size_t i = 0; i < d; ++i) bars.push_back(tuple[i].reduce_to_field());
    auto dsl = word_derivative_sl(w, bars);
    if (rank_over_field(dsl) != sl_dim(n))
        fail(Err::DerivativeNotSurjective, "word derivative is not onto sl_n at the residue tuple");

    Ring field = ring.residue_field();
    RMatrix Tbar = target.reduce_to_field(), TbarInv = inverse(Tbar), Tinv = inverse(target);
    std::vector<RMatrix> cur = tuple;
    u64 pt = p;
    for (u32 t = 1; t < k; ++t, pt *= p) {
        RMatrix errm = evaluate_word(w, cur) * Tinv - RMatrix::identity(ring, n);
        RMatrix Fbar(field, n);
        bool zero_err = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                u64 v = errm.at(i, j).value();
                if (v % pt != 0) fail(Err::InconsistentCongruence, "nonzero residue below the current level");
                u64 fv = (v / pt) % p;
                if (fv != 0) zero_err = false;
                Fbar.at(i, j) = RingElem(field, fv);
            }
        if (zero_err) continue;
        RMatrix E = (TbarInv * Fbar * Tbar).scaled(RingElem(field, p - 1));
        auto sol = solve_over_field(dsl, sl_coords(E));
        if (!sol.solution) fail(Err::DerivativeNotSurjective, "level system unsolvable");
        std::size_t bd = sl_dim(n);
        for (std::size_t slot = 0; slot < d; ++slot) {
            std::vector<u64> coords(sol.solution->begin() + slot * bd,
                                    sol.solution->begin() + (slot + 1) * bd);
            RMatrix X = sl_from_coords(field, n, coords);
            RMatrix u = RMatrix::identity(ring, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    u.at(i, j) = u.at(i, j) + RingElem(ring, mod_mul(X.at(i, j).value(), pt, ring.modulus()));
            RingElem dd = det(u); // = 1 mod p^{t+1}; pin to exactly 1
            for (std::size_t i = 0; i < n; ++i) u.at(i, 0) = u.at(i, 0) * dd.invert();
            cur[slot] = cur[slot] * u;
        }
    }
    if (evaluate_word(w, cur) != target) fail(Err::InconsistentCongruence, "lifting failed to converge");
    return cur;
}

// ---------------------------------------------------------------------------
// Enumeration kernels

namespace {

std::vector<std::vector<u32>> letter_power_maps(const FiniteGroupTable& G, const Word& w) {
    std::vector<std::vector<u32>> maps;
    maps.reserve(w.letters().size());
    for (const auto& l : w.letters()) {
        std::vector<u32> m(G.size());
        for (u32 i = 0; i < G.size(); ++i) m[i] = G.pow(i, l.exp);
        maps.push_back(std::move(m));
    }
    return maps;
}

u32 fold_value(const FiniteGroupTable& G, const Word& w, const std::vector<std::vector<u32>>& maps,
               const u32* tuple) {
    u32 acc = G.identity_index();
    const auto& ls = w.letters();
    for (std::size_t li = 0; li < ls.size(); ++li) acc = G.mul(acc, maps[li][tuple[ls[li].gen - 1]]);
    return acc;
}

} // namespace

ImageStats image_of_word(const FiniteGroupTable& G, const Word& w, u64 tuple_budget, int jobs) {
    std::size_t d = std::max<std::size_t>(w.arity(), 1);
    u64 order = G.size();
    u64 total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > tuple_budget / order + 1) fail(Err::BudgetExceeded, "|G|^d exceeds the tuple budget");
        total *= order;
    }
    if (total > tuple_budget) fail(Err::BudgetExceeded, "|G|^d exceeds the tuple budget");
    auto maps = letter_power_maps(G, w);

    ImageStats out;
    out.image = DynBitset(order);
    out.tuples_scanned = total;
    u64 id_rank = total; // enumeration rank of the first identity preimage

    int threads = jobs < 1 ? 1 : jobs;
    u64 outer = order, inner = total / order;
    if (threads <= 1) {
        std::vector<u32> tuple(d, 0);
        for (u64 rank = 0; rank < total; ++rank) {
            u64 c = rank;
            for (std::size_t i = d; i-- > 0;) {
                tuple[i] = static_cast<u32>(c % order);
                c /= order;
            }
            u32 v = fold_value(G, w, maps, tuple.data());
            out.image.set(v);
            if (v == G.identity_index() && id_rank == total) id_rank = rank;
        }
    } else {
#pragma omp parallel num_threads(threads)
        {
            DynBitset local(order);
            u64 local_id_rank = total;
            std::vector<u32> tuple(d, 0);
#pragma omp for schedule(static)
            for (u64 hi = 0; hi < outer; ++hi) {
                for (u64 lo = 0; lo < inner; ++lo) {
                    u64 rank = hi * inner + lo;
                    u64 c = rank;
                    for (std::size_t i = d; i-- > 0;) {
                        tuple[i] = static_cast<u32>(c % order);
                        c /= order;
                    }
                    u32 v = fold_value(G, w, maps, tuple.data());
                    local.set(v);
                    if (v == G.identity_index() && local_id_rank == total) local_id_rank = rank;
                }
            }
#pragma omp critical
            {
                out.image.or_with(local);
                id_rank = std::min(id_rank, local_id_rank);
            }
        }
    }
    // certificate samples: the first scanned tuple, and the first identity preimage
    auto tuple_of_rank = [&](u64 rank) {
        std::vector<u32> tuple(d, 0);
        u64 c = rank;
        for (std::size_t i = d; i-- > 0;) {
            tuple[i] = static_cast<u32>(c % order);
            c /= order;
        }
        return tuple;
    };
    {
        auto t0 = tuple_of_rank(0);
        out.samples.emplace_back(fold_value(G, w, maps, t0.data()), t0);
        if (id_rank < total) {
            auto ti = tuple_of_rank(id_rank);
            out.samples.emplace_back(G.identity_index(), ti);
        }
    }
    return out;
}

DynBitset product_set(const FiniteGroupTable& G, const DynBitset& A, const DynBitset& B, int jobs) {
    u64 order = G.size();
    DynBitset out(order);
    std::vector<u32> bs;
    for (u32 b = 0; b < order; ++b)
        if (B.test(b)) bs.push_back(b);
    int threads = jobs < 1 ? 1 : jobs;
    if (threads <= 1) {
        for (u32 a = 0; a < order; ++a) {
            if (!A.test(a)) continue;
            for (u32 b : bs) out.set(G.mul(a, b));
        }
        return out;
    }
#pragma omp parallel num_threads(threads)
    {
        DynBitset local(order);
#pragma omp for schedule(static)
        for (u32 a = 0; a < order; ++a) {
            if (!A.test(a)) continue;
            for (u32 b : bs) local.set(G.mul(a, b));
        }
#pragma omp critical
        out.or_with(local);
    }
    return out;
}

bool is_conjugation_closed(const FiniteGroupTable& G, const DynBitset& S, int jobs) {
    u64 order = G.size();
    int threads = jobs < 1 ? 1 : jobs;
    bool closed = true;
    if (threads <= 1) {
        for (u32 s = 0; s < order && closed; ++s) {
            if (!S.test(s)) continue;
            for (u32 g = 0; g < order; ++g)
                if (!S.test(G.conj(g, s))) {
                    closed = false;
                    break;
                }
        }
        return closed;
    }
#pragma omp parallel for schedule(static) num_threads(threads) reduction(&& : closed)
    for (u32 s = 0; s < order; ++s) {
        bool ok = true;
        if (S.test(s))
            for (u32 g = 0; g < order; ++g)
                if (!S.test(G.conj(g, s))) {
                    ok = false;
                    break;
                }
        closed = closed && ok;
    }
    return closed;
}

DynBitset inverse_set(const FiniteGroupTable& G, const DynBitset& S) {
    DynBitset out(G.size());
    for (u32 s = 0; s < G.size(); ++s)
        if (S.test(s)) out.set(G.inv(s));
    return out;
}

// ---------------------------------------------------------------------------
// Reports

WordImageReport word_image(const Word& w, std::size_t n, u64 p, u64 budget, int jobs) {
    auto G = FiniteGroupTable::build(n, p, budget);
    auto stats = image_of_word(G, w, budget, jobs);
    WordImageReport rep;
    rep.word = w.str();
    rep.n = n;
    rep.p = p;
    rep.group_order = G.size();
    rep.image_size = stats.image.count();
    rep.conjugation_closed = is_conjugation_closed(G, stats.image, jobs);
    rep.inverse_closed = inverse_set(G, stats.image) == stats.image;
    rep.contains_identity = stats.image.test(G.identity_index());
    for (const auto& [vidx, tuple] : stats.samples) {
        std::vector<RMatrix> tmats;
        for (u32 t : tuple) tmats.push_back(G.elem(t));
        rep.samples.emplace_back(G.elem(vidx), std::move(tmats));
    }
    return rep;
}

CoverReport check_triple_cover(const Word& w1, const Word& w2, const Word& w3, std::size_t n, u64 p,
                               u64 budget, int jobs) {
    auto G = FiniteGroupTable::build(n, p, budget);
    auto i1 = image_of_word(G, w1, budget, jobs).image;
    auto i2 = image_of_word(G, w2, budget, jobs).image;
    auto i3 = image_of_word(G, w3, budget, jobs).image;
    auto prod = product_set(G, product_set(G, i1, i2, jobs), i3, jobs);
    CoverReport rep;
    rep.words = {w1.str(), w2.str(), w3.str()};
    rep.n = n;
    rep.p = p;
    rep.group_order = G.size();
    rep.image_sizes = {i1.count(), i2.count(), i3.count()};
    rep.product_size = prod.count();
    rep.cover = prod.all();
    return rep;
}

CoverReport check_double_cover_noncentral(const Word& w1, const Word& w2, std::size_t n, u64 p,
                                          u64 budget, int jobs) {
    auto G = FiniteGroupTable::build(n, p, budget);
    auto i1 = image_of_word(G, w1, budget, jobs).image;
    auto i2 = image_of_word(G, w2, budget, jobs).image;
    auto prod = product_set(G, i1, i2, jobs);
    CoverReport rep;
    rep.words = {w1.str(), w2.str()};
    rep.n = n;
    rep.p = p;
    rep.group_order = G.size();
    rep.image_sizes = {i1.count(), i2.count()};
    rep.product_size = prod.count();
    auto center = G.center();
    std::vector<bool> central(G.size(), false);
    for (u32 c : center) central[c] = true;
    bool cover = true;
    for (u32 i = 0; i < G.size(); ++i)
        if (!central[i] && !prod.test(i)) {
            cover = false;
            break;
        }
    rep.cover = cover;
    for (u32 c : center)
        (prod.test(c) ? rep.center_covered : rep.center_uncovered).push_back(G.elem(c));
    return rep;
}

ClassProductReport check_class_product(std::size_t n, u64 p, const std::vector<u64>& t1_diag,
                                       const std::vector<u64>& t2_diag, u64 budget, int jobs) {
    if (p <= 4) fail(Err::HypothesisViolated, "the class product check needs a field with more than 4 elements");
    if (t1_diag.size() != n || t2_diag.size() != n) fail(Err::InvalidArgument, "diagonal size mismatch");
    Ring f = Ring::zmod(p, 1);
    auto make_torus = [&](const std::vector<u64>& dg) {
        std::vector<RingElem> d;
        RingElem prod = RingElem::one(f);
        for (u64 v : dg) {
            RingElem e(f, v);
            if (!e.is_unit()) fail(Err::HypothesisViolated, "torus entries must be units");
            prod = prod * e;
            d.push_back(e);
        }
        if (!prod.is_one()) fail(Err::HypothesisViolated, "torus element must have det 1");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (d[i] == d[j]) fail(Err::HypothesisViolated, "torus element must be regular");
        return RMatrix::diagonal(d);
    };
    auto G = FiniteGroupTable::build(n, p, budget);
    auto cls = [&](const RMatrix& t) {
        DynBitset c(G.size());
        u32 ti = G.index_of(t);
        for (u32 g = 0; g < G.size(); ++g) c.set(G.conj(g, ti));
        return c;
    };
    DynBitset c1 = cls(make_torus(t1_diag)), c2 = cls(make_torus(t2_diag));
    auto prod = product_set(G, c1, c2, jobs);
    auto center = G.center();
    std::vector<bool> central(G.size(), false);
    for (u32 c : center) central[c] = true;
    bool cover = true;
    for (u32 i = 0; i < G.size(); ++i)
        if (!central[i] && !prod.test(i)) {
            cover = false;
            break;
        }
    ClassProductReport rep;
    rep.n = n;
    rep.p = p;
    rep.t1 = t1_diag;
    rep.t2 = t2_diag;
    rep.class1_size = c1.count();
    rep.class2_size = c2.count();
    rep.product_size = prod.count();
    rep.covers_noncentral = cover;
    return rep;
}

RegularSplitValue find_regular_split_value(const Word& w, std::size_t n, u64 p,
                                           const std::function<bool(const std::vector<RMatrix>&)>& avoid,
                                           u64 budget) {
    auto G = FiniteGroupTable::build(n, p, budget);
    std::size_t d = std::max<std::size_t>(w.arity(), 1);
    u64 order = G.size();
    u64 total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > budget / order + 1) fail(Err::BudgetExceeded, "tuple space exceeds budget");
        total *= order;
    }
    if (total > budget) fail(Err::BudgetExceeded, "tuple space exceeds budget");
    auto maps = letter_power_maps(G, w);
    Ring f = Ring::zmod(p, 1);
    std::vector<u32> tuple(d, 0);
    for (u64 rank = 0; rank < total; ++rank) {
        u64 c = rank;
        for (std::size_t i = d; i-- > 0;) {
            tuple[i] = static_cast<u32>(c % order);
            c /= order;
        }
        std::vector<RMatrix> tmats;
        tmats.reserve(d);
        for (u32 t : tuple) tmats.push_back(G.elem(t));
        if (avoid && avoid(tmats)) continue;
        u32 vidx = fold_value(G, w, maps, tuple.data());
        const RMatrix& value = G.elem(vidx);
        auto fpoly = charpoly(value);
        std::vector<RingElem> roots;
        for (u64 r = 0; r < p; ++r) {
            u64 acc = 0, pw = 1;
            for (const auto& coef : fpoly) {
                acc = mod_add(acc, mod_mul(coef.value(), pw, p), p);
                pw = mod_mul(pw, r, p);
            }
            if (acc == 0) roots.emplace_back(f, r);
        }
        if (roots.size() != n) continue;
        RMatrix S(f, n);
        for (std::size_t cidx = 0; cidx < n; ++cidx) {
            auto v = kernel_vector_rank_deficient_one(value - RMatrix::scalar(f, n, roots[cidx]));
            for (std::size_t i = 0; i < n; ++i) S.at(i, cidx) = v[i];
        }
        return RegularSplitValue{std::move(tmats), value, S, roots};
    }
    fail(Err::NotFound, "no regular split word value within budget");
}

} // namespace commwit
