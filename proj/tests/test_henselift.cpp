#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "commwit/henselift.hpp"
#include "commwit/wordmaps.hpp"

using namespace commwit;

namespace {

RMatrix random_invertible(const Ring& r, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        RMatrix m(r, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m.at(i, j) = RingElem(r, rng() % r.modulus());
        if (det(m).is_unit()) return m;
    }
}

RMatrix random_sl(const Ring& r, std::size_t n, std::mt19937_64& rng) {
    RMatrix m = random_invertible(r, n, rng);
    RingElem fix = det(m).invert();
    for (std::size_t i = 0; i < n; ++i) m.at(i, n - 1) = m.at(i, n - 1) * fix;
    return m;
}

const RMatrix& base_g1() {
    static RMatrix m = RMatrix::from_values(Ring::zmod(5, 1), 2, {1, 0, 0, 4});
    return m;
}
const RMatrix& base_g2() {
    static RMatrix m = RMatrix::from_values(Ring::zmod(5, 1), 2, {0, 2, 2, 0});
    return m;
}

} // namespace

TEST_CASE("commutator_derivative basics") {
    Ring f = Ring::zmod(5, 1);
    RMatrix I = RMatrix::identity(f, 2);
    auto d0 = commutator_derivative(I, I);
    CHECK(rank_over_field(d0.map) == 0);
    auto d1 = commutator_derivative(base_g1(), base_g2());
    CHECK(d1.map.rows == 3);
    CHECK(d1.map.cols == 6);
    CHECK(rank_over_field(d1.map) == 3); // full rank = dim sl_2
}

TEST_CASE("commutator_derivative equals the dual-number jacobian of [x1,x2]") {
    // independent route: word_derivative evaluates over R[eps]/(eps^2)
    std::mt19937_64 rng(61);
    Word comm = Word::commutator_xy();
    for (u64 p : {5ull, 7ull}) {
        Ring f = Ring::zmod(p, 1);
        for (std::size_t n : {2ull, 3ull}) {
            for (int t = 0; t < 8; ++t) {
                RMatrix g1 = random_invertible(f, n, rng), g2 = random_invertible(f, n, rng);
                auto direct = commutator_derivative(g1, g2, DerivDomain::SL);
                auto dual = word_derivative_sl(comm, {g1, g2});
                CHECK(direct.map == dual);
                // GL-domain matrix agrees column-by-column with the gl jacobian
                auto directGL = commutator_derivative(g1, g2, DerivDomain::GL);
                auto dualGL = word_derivative(comm, {g1, g2});
                for (std::size_t col = 0; col < 2 * n * n; ++col) {
                    std::vector<u64> glc(n * n, 0);
                    for (std::size_t row = 0; row < n * n; ++row) glc[row] = dualGL.at(row, col);
                    auto slc = sl_coords(gl_from_coords(f, n, glc));
                    for (std::size_t row = 0; row < sl_dim(n); ++row)
                        CHECK(directGL.map.at(row, col) == slc[row]);
                }
            }
        }
    }
}

TEST_CASE("has_common_fixed_covector") {
    Ring f5 = Ring::zmod(5, 1);
    RMatrix I = RMatrix::identity(f5, 2);
    CHECK(has_common_fixed_covector(I, I));
    CHECK(!has_common_fixed_covector(base_g1(), base_g2()));
    // over F_2: every commuting pair is obstructed (exhaustive, 36 pairs)
    auto elems = enumerate_sl(2, 2);
    REQUIRE(elems.size() == 6);
    std::size_t commuting = 0;
    for (const auto& a : elems)
        for (const auto& b : elems) {
            if (a * b != b * a) continue;
            ++commuting;
            CHECK(has_common_fixed_covector(a, b));
        }
    CHECK(commuting == 18);
}

TEST_CASE("surjectivity criterion: full rank iff no common fixed covector") {
    // exhaustive over SL_2(F_3) pairs
    auto elems = enumerate_sl(2, 3);
    for (const auto& a : elems)
        for (const auto& b : elems) {
            bool full = rank_over_field(commutator_derivative(a, b).map) == 3;
            CHECK(full == !has_common_fixed_covector(a, b));
        }
    // random samples over SL_2(F_5) and SL_3(F_5)
    std::mt19937_64 rng(67);
    Ring f5 = Ring::zmod(5, 1);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = t % 2 == 0 ? 2 : 3;
        RMatrix a = random_sl(f5, n, rng), b = random_sl(f5, n, rng);
        bool full = rank_over_field(commutator_derivative(a, b).map) == sl_dim(n);
        CHECK(full == !has_common_fixed_covector(a, b));
    }
}

TEST_CASE("image of Z -> Z^g - Z is the trace-form complement of the centralizer") {
    std::mt19937_64 rng(71);
    for (auto [n, p] : std::vector<std::pair<std::size_t, u64>>{{2, 5}, {2, 7}, {3, 5}}) {
        Ring f = Ring::zmod(p, 1);
        for (int t = 0; t < 15; ++t) {
            RMatrix g = random_sl(f, n, rng);
            auto ad = adjoint_on_sl(g);
            std::size_t d = sl_dim(n);
            auto m = ad;
            for (std::size_t i = 0; i < d; ++i) m.at(i, i) = mod_sub(m.at(i, i), 1, p);
            std::size_t rk = rank_over_field(m);
            // rank + centralizer dimension = dim sl (the complement has that rank)
            auto ker = solve_over_field(m, std::vector<u64>(d, 0)).nullspace;
            CHECK(rk + ker.size() == d);
            // containment by explicit pairing: trace((Z^g - Z) W) = 0 for W in Z(g)
            RMatrix gi = inverse(g);
            for (std::size_t bi = 0; bi < d; ++bi) {
                RMatrix img = gi * sl_basis_matrix(f, n, bi) * g - sl_basis_matrix(f, n, bi);
                for (const auto& kc : ker) {
                    RMatrix W = sl_from_coords(f, n, kc);
                    RMatrix prod = img * W;
                    RingElem tr = RingElem::zero(f);
                    for (std::size_t i = 0; i < n; ++i) tr = tr + prod.at(i, i);
                    CHECK(tr.is_zero());
                }
            }
        }
    }
}

TEST_CASE("hensel_lift_commutator") {
    Ring r = Ring::zmod(5, 2);
    auto lift2 = [&](const RMatrix& m) {
        RMatrix out(r, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) out.at(i, j) = RingElem(r, m.at(i, j).value());
        return out;
    };
    RMatrix g1 = lift2(base_g1()), g2 = lift2(base_g2());

    SUBCASE("already-exact input is returned unchanged") {
        RMatrix A = commutator(g1, g2);
        auto [h1, h2] = hensel_lift_commutator(g1, g2, A, 1, DerivDomain::GL);
        CHECK(h1 == g1);
        CHECK(h2 == g2);
    }
    SUBCASE("lift to 24I") {
        RMatrix A = RMatrix::scalar(r, 2, RingElem(r, 24));
        auto [h1, h2] = hensel_lift_commutator(g1, g2, A, 1, DerivDomain::GL);
        CHECK(commutator(h1, h2) == A);
        CHECK(h1.reduce_to_field() == base_g1());
        CHECK(h2.reduce_to_field() == base_g2());
    }
    SUBCASE("lift to a non-scalar congruent target") {
        RMatrix A = RMatrix::from_values(r, 2, {24, 5, 0, 24}); // det 576 = 1 mod 25
        REQUIRE(det(A).is_one());
        auto [h1, h2] = hensel_lift_commutator(g1, g2, A, 1, DerivDomain::GL);
        CHECK(commutator(h1, h2) == A);
    }
    SUBCASE("SL-domain lifting preserves determinants exactly") {
        std::mt19937_64 rng(73);
        Ring r3 = Ring::zmod(7, 3);
        for (int t = 0; t < 10; ++t) {
            RMatrix a1 = random_sl(r3, 2, rng), a2 = random_sl(r3, 2, rng);
            RMatrix A0 = commutator(a1, a2);
            if (rank_over_field(
                    commutator_derivative(a1.reduce_to_field(), a2.reduce_to_field()).map) != 3)
                continue;
            // perturb the target within its mod-p class, keeping det = 1
            RMatrix A = A0;
            A.at(0, 1) = A.at(0, 1) + RingElem(r3, 7);
            RingElem fix = det(A);
            if (!fix.is_unit()) continue;
            for (std::size_t i = 0; i < 2; ++i) A.at(i, 1) = A.at(i, 1) * fix.invert();
            if (A.reduce_to_field() != A0.reduce_to_field()) continue;
            auto [h1, h2] = hensel_lift_commutator(a1, a2, A, 1, DerivDomain::SL);
            CHECK(commutator(h1, h2) == A);
            CHECK(det(h1).is_one());
            CHECK(det(h2).is_one());
            CHECK(h1.reduce_to_field() == a1.reduce_to_field());
        }
    }
    SUBCASE("lifting from a higher start level") {
        Ring r3 = Ring::zmod(5, 3);
        auto lift3 = [&](const RMatrix& m) {
            RMatrix out(r3, 2);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) out.at(i, j) = RingElem(r3, m.at(i, j).value());
            return out;
        };
        RMatrix a1 = lift3(base_g1()), a2 = lift3(base_g2());
        RMatrix C = commutator(a1, a2);
        // perturb the exact commutator above level 2, keeping det = 1
        RMatrix A = C;
        A.at(1, 0) = A.at(1, 0) + RingElem(r3, 25);
        RingElem fix = det(A).invert();
        for (std::size_t i = 0; i < 2; ++i) A.at(i, 1) = A.at(i, 1) * fix;
        REQUIRE(A.reduce_precision(2) == C.reduce_precision(2));
        REQUIRE(det(A).is_one());
        auto [h1, h2] = hensel_lift_commutator(a1, a2, A, 2, DerivDomain::GL);
        CHECK(commutator(h1, h2) == A);
        // the mod-p^2 residues of the inputs are untouched
        CHECK(h1.reduce_precision(2) == a1.reduce_precision(2));
        CHECK(h2.reduce_precision(2) == a2.reduce_precision(2));
    }
    SUBCASE("congruence violations are reported") {
        RMatrix A = RMatrix::from_values(r, 2, {2, 1, 1, 13}); // not congruent mod 5
        CHECK_THROWS_AS(hensel_lift_commutator(g1, g2, A, 1), Error);
    }
    SUBCASE("non-surjective derivative is reported") {
        RMatrix I = RMatrix::identity(r, 2);
        RMatrix A = RMatrix::from_values(r, 2, {6, 5, 0, 21}); // = I mod 5, det = 126 = 1 mod 25
        REQUIRE(det(A).is_one());
        CHECK_THROWS_AS(hensel_lift_commutator(I, I, A, 1), Error);
    }
}

TEST_CASE("scalar_commutator") {
    SUBCASE("p=5, n=2, k=1: the mu-rescaled base pair is returned itself") {
        Ring f = Ring::zmod(5, 1);
        RingElem lambda(f, 4);
        RMatrix A = RMatrix::scalar(f, 2, lambda);
        auto res = scalar_commutator(lambda, A);
        CHECK(res.route == ScalarRoute::MuRescaled);
        CHECK(res.base_g1 == base_g1());
        CHECK(res.base_g2 == base_g2());
        CHECK(res.witness.g1 == base_g1());
        CHECK(res.witness.g2 == base_g2());
        CHECK(commutator(res.witness.g1, res.witness.g2) == A);
    }
    SUBCASE("p=5, k=2: exact witness for a congruent lift") {
        Ring r = Ring::zmod(5, 2);
        RMatrix A = RMatrix::from_values(r, 2, {24, 5, 0, 24});
        auto res = scalar_commutator(RingElem(Ring::zmod(5, 1), 4), A);
        CHECK(commutator(res.witness.g1, res.witness.g2) == A);
        CHECK(verify_witness(res.witness).ok);
    }
    SUBCASE("p=7, n=2: mu is unsolvable, the twisted-algebra pair lands in SL") {
        Ring f = Ring::zmod(7, 1);
        RingElem lambda(f, 6);
        CHECK(!solve_power(RingElem(f, 6), 2).has_value()); // -1 is a non-square mod 7
        RMatrix A = RMatrix::scalar(f, 2, lambda);
        auto res = scalar_commutator(lambda, A);
        CHECK(res.route == ScalarRoute::TwistedAlgebra);
        CHECK(det(res.witness.g1).is_one());
        CHECK(det(res.witness.g2).is_one());
        CHECK(res.witness.mode == WitnessMode::SL);
        CHECK(commutator(res.witness.g1, res.witness.g2) == A);
        CHECK(!has_common_fixed_covector(res.base_g1, res.base_g2));
        // oracle: exhaustive search over SL_2(F_7) pairs confirms such a pair exists
        auto G = FiniteGroupTable::build(2, 7);
        u32 target = G.index_of(A);
        bool exists = false;
        for (u32 i = 0; i < G.size() && !exists; ++i)
            for (u32 j = 0; j < G.size() && !exists; ++j) {
                u32 c = G.mul(G.mul(G.mul(i, j), G.inv(i)), G.inv(j));
                if (c == target && !has_common_fixed_covector(G.elem(i), G.elem(j))) exists = true;
            }
        CHECK(exists);
    }
    SUBCASE("n=4, p=13: twisted algebra route at higher rank") {
        Ring f = Ring::zmod(13, 1);
        RingElem lambda = primitive_root_of_unity(4, 13);
        CHECK(lambda.value() == 5);
        CHECK(!solve_power(RingElem(f, 12), 4).has_value()); // mu^4 = -1 unsolvable mod 13
        RMatrix A = RMatrix::scalar(f, 4, lambda);
        REQUIRE(det(A).is_one()); // 5^4 = 625 = 1 mod 13
        auto res = scalar_commutator(lambda, A);
        CHECK(res.route == ScalarRoute::TwistedAlgebra);
        CHECK(res.witness.mode == WitnessMode::SL);
        CHECK(commutator(res.witness.g1, res.witness.g2) == A);
    }
    SUBCASE("k up to 3 with n = 3, p = 7 (plain cycle route)") {
        Ring r = Ring::zmod(7, 3);
        RingElem lambda = primitive_root_of_unity(3, 7);
        std::mt19937_64 rng(79);
        int done = 0;
        for (int t = 0; t < 20 && done < 8; ++t) {
            RMatrix A(r, 3);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    A.at(i, j) = RingElem(r, (i == j ? lambda.value() : 0) + 7 * (rng() % 49));
            RingElem d = det(A);
            if (!d.is_unit()) continue;
            RingElem fix = d.invert();
            for (std::size_t i = 0; i < 3; ++i) A.at(i, 2) = A.at(i, 2) * fix;
            if (A.reduce_to_field() != RMatrix::scalar(Ring::zmod(7, 1), 3, lambda)) continue;
            auto res = scalar_commutator(lambda, A);
            CHECK(res.route == ScalarRoute::PlainCycle);
            CHECK(res.witness.mode == WitnessMode::SL);
            CHECK(commutator(res.witness.g1, res.witness.g2) == A);
            ++done;
        }
        CHECK(done > 0);
    }
    SUBCASE("hypothesis violations") {
        Ring f = Ring::zmod(5, 1);
        CHECK_THROWS_AS(scalar_commutator(RingElem(f, 1), RMatrix::identity(f, 2)), Error);
        CHECK_THROWS_AS(scalar_commutator(RingElem(f, 4), RMatrix::identity(f, 2)), Error);
    }
}

TEST_CASE("obstruction_scan") {
    SUBCASE("identity over F_2 and F_3: every pair is obstructed") {
        Ring f2 = Ring::zmod(2, 1);
        auto r2 = obstruction_scan(RMatrix::identity(f2, 2));
        CHECK(r2.all_pairs_obstructed);
        CHECK(r2.pairs_with_commutator == 18);
        CHECK(!r2.witness_pair.has_value());
        Ring f3 = Ring::zmod(3, 1);
        auto r3 = obstruction_scan(RMatrix::identity(f3, 2));
        CHECK(r3.all_pairs_obstructed);
        CHECK(r3.pairs_with_commutator == 168);
    }
    SUBCASE("4I over F_5 is unobstructed") {
        Ring f5 = Ring::zmod(5, 1);
        auto rep = obstruction_scan(RMatrix::scalar(f5, 2, RingElem(f5, 4)), 1000000);
        CHECK(!rep.all_pairs_obstructed);
        CHECK(rep.pairs_with_commutator == 120);
        REQUIRE(rep.witness_pair.has_value());
        CHECK(commutator(rep.witness_pair->first, rep.witness_pair->second) ==
              RMatrix::scalar(f5, 2, RingElem(f5, 4)));
        CHECK(!has_common_fixed_covector(rep.witness_pair->first, rep.witness_pair->second));
        // the scalar base pair itself is unobstructed
        CHECK(!has_common_fixed_covector(base_g1(), base_g2()));
    }
    SUBCASE("budget is enforced") {
        Ring f = Ring::zmod(5, 1);
        CHECK_THROWS_AS(obstruction_scan(RMatrix::identity(f, 2), 100), Error);
    }
}

TEST_CASE("nilpotent_noncommutator_check") {
    SUBCASE("n=2, p=2: certified over the 2^9-element extension") {
        auto rep = nilpotent_noncommutator_check(2, 2);
        CHECK(rep.certified);
        CHECK(rep.ring.token() == "Nilext(2; 8 gens)");
        CHECK(rep.ring.generator_count() == 8); // |O| = 2^(1+8) = 2^9
        CHECK(rep.commuting_pairs == 18);
        CHECK(rep.sl_dimension == 3);
        CHECK(rep.max_image_rank < 3);
        CHECK(det(rep.element).is_one());
        CHECK(is_scalar_mod_m(rep.element));
    }
    SUBCASE("n=2, p=3: certified") {
        auto rep = nilpotent_noncommutator_check(2, 3);
        CHECK(rep.certified);
        CHECK(rep.ring.generator_count() == 27);
        CHECK(rep.max_image_rank < 3);
    }
    SUBCASE("n=2, p=5: every commuting pair is obstructed here too, so the check certifies") {
        // exhaustive computation: all 1080 commuting pairs of SL_2(F_5) are
        // obstructed (abelian subgroups are cyclic, and a cyclic subgroup always
        // fixes a covector), so the construction goes through at p = 5 as well
        auto rep = nilpotent_noncommutator_check(2, 5);
        CHECK(rep.certified);
        CHECK(rep.commuting_pairs == 1080);
        CHECK(rep.ring.generator_count() == 125);
    }
}
