#include "commwit/henselift.hpp"

#include <omp.h>

#include <algorithm>

namespace commwit {

namespace {

RMatrix conj_right(const RMatrix& h, const RMatrix& X) { return inverse(h) * X * h; } // X^h

std::size_t block_dim(DerivDomain d, std::size_t n) { return d == DerivDomain::SL ? sl_dim(n) : n * n; }

RMatrix domain_basis(DerivDomain d, const Ring& f, std::size_t n, std::size_t idx) {
    return d == DerivDomain::SL ? sl_basis_matrix(f, n, idx) : gl_basis_matrix(f, n, idx);
}

} // namespace

CommutatorDerivative commutator_derivative(const RMatrix& g1, const RMatrix& g2, DerivDomain domain) {
    if (!g1.ring().is_field() || g1.ring() != g2.ring() || g1.n() != g2.n())
        fail(Err::InvalidArgument, "derivative is taken over F_p with matching inputs");
    if (!det(g1).is_unit() || !det(g2).is_unit()) fail(Err::NotInvertible, "derivative needs invertible inputs");
    const Ring& f = g1.ring();
    std::size_t n = g1.n();
    RMatrix g1i = inverse(g1), g2i = inverse(g2);
    auto D = [&](const RMatrix& X, const RMatrix& Y) {
        // [(X^{g2} - X)^{g1^{-1}} + (Y^{g1^{-1}} - Y)]^{g2^{-1}}
        RMatrix inner = conj_right(g1i, conj_right(g2, X) - X) + (conj_right(g1i, Y) - Y);
        return conj_right(g2i, inner);
    };
    std::size_t bd = block_dim(domain, n);
    auto map = LinearMapOverField::zero(f.p(), sl_dim(n), 2 * bd);
    RMatrix zero(f, n);
    for (std::size_t j = 0; j < bd; ++j) {
        auto colX = sl_coords(D(domain_basis(domain, f, n, j), zero));
        auto colY = sl_coords(D(zero, domain_basis(domain, f, n, j)));
        for (std::size_t i = 0; i < sl_dim(n); ++i) {
            map.at(i, j) = colX[i];
            map.at(i, bd + j) = colY[i];
        }
    }
    return CommutatorDerivative{g1, g2, domain, std::move(map)};
}

bool has_common_fixed_covector(const RMatrix& g1bar, const RMatrix& g2bar) {
    if (!g1bar.ring().is_field() || g1bar.ring() != g2bar.ring() || g1bar.n() != g2bar.n())
        fail(Err::InvalidArgument, "covector check runs over F_p");
    if (!det(g1bar).is_unit() || !det(g2bar).is_unit()) fail(Err::NotInvertible, "inputs must be invertible");
    std::size_t d = sl_dim(g1bar.n());
    u64 p = g1bar.ring().p();
    auto fixed_part = [&](const RMatrix& g) {
        auto M = adjoint_on_sl(g).transpose();
        for (std::size_t i = 0; i < d; ++i) M.at(i, i) = mod_sub(M.at(i, i), 1, p);
        return M;
    };
    auto stacked = stack_maps(fixed_part(g1bar), fixed_part(g2bar));
    return rank_over_field(stacked) < d;
}

std::pair<RMatrix, RMatrix> hensel_lift_commutator(const RMatrix& g1, const RMatrix& g2, const RMatrix& A,
                                                   u32 start_level, DerivDomain domain) {
    const Ring& ring = A.ring();
    if (ring.kind() != RingKind::TruncatedPAdic) fail(Err::InvalidArgument, "lifting works over Z/p^k");
    if (g1.ring() != ring || g2.ring() != ring || g1.n() != A.n() || g2.n() != A.n())
        fail(Err::RingMismatch, "lifting inputs must share the target's ring and size");
    if (start_level < 1) fail(Err::InvalidArgument, "start level must be >= 1");
    if (!det(A).is_one()) fail(Err::InconsistentCongruence, "target is not in SL_n");
    std::size_t n = A.n();
    u64 p = ring.p();
    u32 k = ring.k();

    if (start_level < k) {
        u32 j = start_level;
        if (commutator(g1, g2).reduce_precision(j) != A.reduce_precision(j))
            fail(Err::InconsistentCongruence, "commutator(g1,g2) != A mod p^j");
    } else if (commutator(g1, g2) != A) {
        fail(Err::InconsistentCongruence, "start level at full precision but the identity is not exact");
    }

    CommutatorDerivative der = commutator_derivative(g1.reduce_to_field(), g2.reduce_to_field(), domain);
    if (rank_over_field(der.map) != sl_dim(n))
        fail(Err::DerivativeNotSurjective, "commutator derivative is not onto sl_n");

    Ring field = ring.residue_field();
    RMatrix Abar = A.reduce_to_field(), AbarInv = inverse(Abar), Ainv = inverse(A);
    RMatrix h1 = g1, h2 = g2;

    u64 pt = 1;
    for (u32 t = 0; t < start_level; ++t) pt *= p;
    for (u32 t = start_level; t < k; ++t, pt *= p) {
        RMatrix errm = commutator(h1, h2) * Ainv - RMatrix::identity(ring, n);
        RMatrix Fbar(field, n);
        bool zero_err = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                u64 v = errm.at(i, j).value();
                if (v % pt != 0)
                    fail(Err::InconsistentCongruence, "nonzero residue below the current level");
                u64 f = (v / pt) % p;
                if (f != 0) zero_err = false;
                Fbar.at(i, j) = RingElem(field, f);
            }
        if (zero_err) continue;
        RMatrix E = (AbarInv * Fbar * Abar).scaled(RingElem(field, p - 1)); // -(Abar^{-1} F Abar)
        auto sol = solve_over_field(der.map, sl_coords(E));
        if (!sol.solution) fail(Err::DerivativeNotSurjective, "level system unsolvable");
        std::size_t bd = block_dim(domain, n);
        std::vector<u64> cx(sol.solution->begin(), sol.solution->begin() + bd);
        std::vector<u64> cy(sol.solution->begin() + bd, sol.solution->end());
        auto update = [&](const RMatrix& h, const std::vector<u64>& coords) {
            RMatrix X = domain == DerivDomain::SL ? sl_from_coords(field, n, coords)
                                                  : gl_from_coords(field, n, coords);
            RMatrix u = RMatrix::identity(ring, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    u.at(i, j) = u.at(i, j) + RingElem(ring, mod_mul(X.at(i, j).value(), pt, ring.modulus()));
            if (domain == DerivDomain::SL) {
                // pin det(u) back to exactly 1; the fix is = I mod p^{t+1} since tr X = 0 mod p
                RingElem dd = det(u);
                for (std::size_t i = 0; i < n; ++i) u.at(i, 0) = u.at(i, 0) * dd.invert();
            }
            return h * u;
        };
        h1 = update(h1, cx);
        h2 = update(h2, cy);
    }
    if (commutator(h1, h2) != A) fail(Err::InconsistentCongruence, "lifting failed to converge");
    return {h1, h2};
}

// ---------------------------------------------------------------------------
// scalar-target construction via clock-and-shift base pairs

namespace {

// negacyclic / cyclic algebra F_p[x]/(x^n - t): multiplication matrix of u
RMatrix multiplication_matrix(const Ring& f, const std::vector<u64>& u, u64 t) {
    std::size_t n = u.size();
    u64 p = f.p();
    RMatrix M(f, n);
    // column j = u * x^j reduced by x^n = t
    std::vector<u64> cur = u;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) M.at(i, j) = RingElem(f, cur[i]);
        std::vector<u64> next(n, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] = cur[i];
        next[0] = mod_mul(cur[n - 1], t, p);
        cur = next;
    }
    return M;
}

} // namespace

ScalarWitnessResult scalar_commutator(const RingElem& lambda, const RMatrix& A) {
    const Ring& ring = A.ring();
    std::size_t n = A.n();
    u64 p = ring.p();
    if (n < 2) fail(Err::InvalidArgument, "n >= 2 required");
    if (ring.kind() != RingKind::TruncatedPAdic) fail(Err::InvalidArgument, "scalar route works over Z/p^k");
    if (!lambda.ring().is_field() || lambda.ring().p() != p)
        fail(Err::InvalidArgument, "lambda must live in the residue field");
    if (lambda.is_zero() || multiplicative_order(lambda) != n)
        fail(Err::HypothesisViolated, "lambda must have multiplicative order exactly n");
    Ring field = ring.residue_field();
    if (A.reduce_to_field() != RMatrix::scalar(field, n, lambda))
        fail(Err::HypothesisViolated, "A must reduce to lambda*I");
    if (!det(A).is_one()) fail(Err::HypothesisViolated, "A must have determinant 1");

    RMatrix clock(field, n);
    {
        RingElem pw = RingElem::one(field);
        for (std::size_t i = 0; i < n; ++i) {
            clock.at(i, i) = pw;
            pw = pw * lambda;
        }
    }
    RMatrix cycle(field, n);
    for (std::size_t i = 0; i < n; ++i) cycle.at((i + 1) % n, i) = RingElem::one(field);

    RMatrix g1bar = clock, g2bar = cycle;
    ScalarRoute route = ScalarRoute::PlainCycle;
    if (n % 2 == 0) {
        // the n-cycle (and the clock) have determinant (-1)^{n-1} = -1
        RingElem minus_one(field, p - 1);
        auto mu = solve_power(minus_one, n);
        if (mu) {
            g2bar = cycle.scaled(*mu);
            route = ScalarRoute::MuRescaled;
        } else {
            // SL_n(F_p) pair from the algebra F_p[x]/(x^n + 1): the companion C is
            // mult-by-x, the clock acts as x |-> lambda x, and a norm-(-1) unit u
            // fixes the clock's determinant without touching the commutator.
            u64 t = p - 1; // x^n = -1
            RMatrix C = multiplication_matrix(field, [&] {
                std::vector<u64> x(n, 0);
                x[1] = 1;
                return x;
            }(), t);
            std::vector<u64> u(n, 0);
            bool found = false;
            u64 total = 1;
            for (std::size_t i = 0; i < n; ++i) total *= p;
            for (u64 code = 1; code < total && !found; ++code) {
                u64 c = code;
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = c % p;
                    c /= p;
                }
                RMatrix Mu = multiplication_matrix(field, u, t);
                if (det(Mu) == RingElem(field, p - 1)) {
                    g1bar = clock * Mu;
                    g2bar = C;
                    route = ScalarRoute::TwistedAlgebra;
                    found = true;
                }
            }
            if (!found) fail(Err::NoBasePairFound, "no norm-(-1) unit in the twisting algebra");
        }
    }

    RMatrix lambdaI = RMatrix::scalar(field, n, lambda);
    if (commutator(g1bar, g2bar) != lambdaI || has_common_fixed_covector(g1bar, g2bar)) {
        // bounded exhaustive fallback over SL_n(F_p) pairs
        bool found = false;
        try {
            auto elems = enumerate_sl(n, p);
            for (std::size_t i = 0; i < elems.size() && !found; ++i)
                for (std::size_t j = 0; j < elems.size() && !found; ++j)
                    if (commutator(elems[i], elems[j]) == lambdaI &&
                        !has_common_fixed_covector(elems[i], elems[j])) {
                        g1bar = elems[i];
                        g2bar = elems[j];
                        route = ScalarRoute::PairSearch;
                        found = true;
                    }
        } catch (const Error&) {
            found = false;
        }
        if (!found) fail(Err::NoBasePairFound, "search for an unobstructed base pair exhausted");
    }

    bool in_sl = det(g1bar).is_one() && det(g2bar).is_one();
    DerivDomain domain = in_sl ? DerivDomain::SL : DerivDomain::GL;
    auto lift_elem = [&](const RMatrix& m) {
        RMatrix out(ring, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.at(i, j) = RingElem(ring, m.at(i, j).value());
        if (in_sl) {
            // the canonical lift has det = 1 mod p only; rescale the last
            // column (a 1 mod p unit) to land exactly in SL_n(Z/p^k)
            RingElem dd = det(out);
            RingElem fix = dd.invert();
            for (std::size_t i = 0; i < n; ++i) out.at(i, n - 1) = out.at(i, n - 1) * fix;
        }
        return out;
    };
    auto [h1, h2] = hensel_lift_commutator(lift_elem(g1bar), lift_elem(g2bar), A, 1, domain);
    CommutatorWitness w{A, h1, h2, in_sl ? WitnessMode::SL : WitnessMode::PslPair};
    auto check = verify_witness(w);
    if (!check.ok) fail(Err::InvalidArgument, "scalar witness verification failed: " + check.reason);
    return ScalarWitnessResult{w, route, g1bar, g2bar};
}

// ---------------------------------------------------------------------------
// obstruction machinery over the residue field

ObstructionReport obstruction_scan(const RMatrix& gbar, u64 pair_budget, int jobs) {
    if (!gbar.ring().is_field()) fail(Err::InvalidArgument, "obstruction scan runs over F_p");
    std::size_t n = gbar.n();
    u64 p = gbar.ring().p();
    auto elems = enumerate_sl(n, p, pair_budget);
    u64 order = elems.size();
    if (order * order > pair_budget)
        fail(Err::BudgetExceeded, "|SL_n(F_p)|^2 = " + std::to_string(order * order) + " exceeds budget");

    std::vector<RMatrix> invs;
    invs.reserve(order);
    for (const auto& e : elems) invs.push_back(inverse(e));

    u64 pair_count = 0;
    long long best = -1; // packed i*order+j of the first unobstructed pair
    int threads = jobs < 1 ? 1 : jobs;
#pragma omp parallel for schedule(dynamic) num_threads(threads) reduction(+ : pair_count) if (threads > 1)
    for (std::size_t i = 0; i < elems.size(); ++i) {
        RMatrix left = elems[i]; // [g1, g2] = g1 g2 g1^{-1} g2^{-1}
        for (std::size_t j = 0; j < elems.size(); ++j) {
            RMatrix c = left * elems[j] * invs[i] * invs[j];
            if (c != gbar) continue;
            ++pair_count;
            if (!has_common_fixed_covector(elems[i], elems[j])) {
                long long packed = static_cast<long long>(i * order + j);
#pragma omp critical
                {
                    if (best < 0 || packed < best) best = packed;
                }
            }
        }
    }
    ObstructionReport rep{n, p, gbar, pair_count, best < 0, std::nullopt};
    if (best >= 0)
        rep.witness_pair = std::make_pair(elems[static_cast<std::size_t>(best) / order],
                                          elems[static_cast<std::size_t>(best) % order]);
    return rep;
}

NilpotentCheckReport nilpotent_noncommutator_check(std::size_t n, u64 p, u64 pair_budget) {
    Ring field = Ring::zmod(p, 1);
    RMatrix I = RMatrix::identity(field, n);
    ObstructionReport scan = obstruction_scan(I, pair_budget);
    if (!scan.all_pairs_obstructed)
        fail(Err::PreconditionUnverified, "an unobstructed commuting pair exists for the identity "
                                          "target in SL_" +
                                              std::to_string(n) + "(F_" + std::to_string(p) + ")");

    std::size_t d = sl_dim(n);
    // enumerate sl_n(F_p) in coordinate order; these index the extension's generators
    u64 count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    std::vector<RMatrix> sl_elems;
    sl_elems.reserve(count);
    std::vector<std::string> labels;
    labels.reserve(count);
    for (u64 code = 0; code < count; ++code) {
        std::vector<u64> coords(d, 0);
        u64 c = code;
        for (std::size_t i = 0; i < d; ++i) {
            coords[i] = c % p;
            c /= p;
        }
        sl_elems.push_back(sl_from_coords(field, n, coords));
        labels.push_back("e" + std::to_string(code));
    }
    Ring O = Ring::nilext(p, labels);

    // g = I + sum_x x e_x
    RMatrix g(O, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<u64> coeffs(count, 0);
            for (u64 x = 0; x < count; ++x) coeffs[x] = sl_elems[x].at(i, j).value();
            g.at(i, j) = RingElem(O, i == j ? 1 : 0, std::move(coeffs));
        }
    if (!det(g).is_one()) fail(Err::InvalidArgument, "constructed element left SL_n(O)");

    NilpotentCheckReport rep{n, p, O, 0, d, 0, true, g};
    auto elems = enumerate_sl(n, p, pair_budget);
    std::vector<RMatrix> invs;
    invs.reserve(elems.size());
    for (const auto& e : elems) invs.push_back(inverse(e));
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j) {
            if (elems[i] * elems[j] * invs[i] * invs[j] != I) continue;
            ++rep.commuting_pairs;
            // image of (h1,h2) |-> (1 - g2) h1 + (1 - g1^{-1}) h2 on sl x sl
            auto L = LinearMapOverField::zero(p, d, 2 * d);
            for (std::size_t b = 0; b < d; ++b) {
                RMatrix basis = sl_basis_matrix(field, n, b);
                auto c1 = sl_coords(basis - elems[j] * basis * invs[j]);
                auto c2 = sl_coords(basis - invs[i] * basis * elems[i]);
                for (std::size_t r = 0; r < d; ++r) {
                    L.at(r, b) = c1[r];
                    L.at(r, d + b) = c2[r];
                }
            }
            std::size_t rk = rank_over_field(L);
            rep.max_image_rank = std::max(rep.max_image_rank, rk);
            if (rk == d) rep.certified = false; // some pair reaches every x
        }
    return rep;
}

} // namespace commwit
