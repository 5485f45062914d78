#include "commwit/commdecomp.hpp"

#include <algorithm>

#include "commwit/henselift.hpp"

namespace commwit {

namespace {

void require_group_input(const RMatrix& A, const char* who) {
    if (A.n() < 2) fail(Err::InvalidArgument, std::string(who) + ": SL_1 is trivial, n >= 2 required");
    if (!det(A).is_unit()) fail(Err::NotInvertible, std::string(who) + ": input is not invertible");
}

RingElem entry11_of_conjugate(const RMatrix& X, const RMatrix& A) { return conjugate(X, A).at(0, 0); }

} // namespace

RMatrix conjugate_entry_2x2(const RMatrix& A, const RingElem& alpha) {
    require_group_input(A, "conjugate_entry_2x2");
    if (A.n() != 2) fail(Err::InvalidArgument, "conjugate_entry_2x2 needs a 2x2 matrix");
    if (is_scalar_mod_m(A)) fail(Err::ScalarModM, "matrix is central modulo m");
    const Ring& ring = A.ring();
    const RingElem a = A.at(0, 0), b = A.at(0, 1), c = A.at(1, 0), d = A.at(1, 1);
    RMatrix X = RMatrix::identity(ring, 2);
    if (b.is_unit()) {
        // X = [[1,0],[z,1]]: top-left of X A X^{-1} is a - b z
        RingElem z = (a - alpha) * b.invert();
        X.at(1, 0) = z;
    } else if (c.is_unit()) {
        // X = [[1,y],[0,1]]: top-left is a + c y
        RingElem y = (alpha - a) * c.invert();
        X.at(0, 1) = y;
    } else {
        // b, c in m, so a - d is a unit. Solve a*beta - d*gamma = alpha, beta - gamma = 1
        // with x w = beta, y z = gamma realized as w = z = 1, x = beta, y = gamma.
        // Both equations are then linear in (x, y) and solve exactly:
        //   (a-b) x + (c-d) y = alpha,  x - y = 1.
        RingElem den = a + c - b - d; // = (a-d) + (c-b), a unit
        if (!den.is_unit()) fail(Err::ScalarModM, "a - d is not a unit");
        RingElem y = (alpha - a + b) * den.invert();
        RingElem x = y + RingElem::one(ring);
        X.at(0, 0) = x;
        X.at(0, 1) = y;
        X.at(1, 0) = RingElem::one(ring);
        X.at(1, 1) = RingElem::one(ring);
    }
    if (!det(X).is_one() || entry11_of_conjugate(X, A) != alpha)
        fail(Err::InvalidArgument, "conjugate_entry_2x2 postcondition failed");
    return X;
}

namespace {

// Permutation matrix in SL_n sending basis vector t to sigma(t), with one row
// negated when the permutation is odd.
RMatrix sl_permutation(const Ring& ring, const std::vector<std::size_t>& sigma) {
    std::size_t n = sigma.size();
    RMatrix P(ring, n);
    for (std::size_t t = 0; t < n; ++t) P.at(sigma[t], t) = RingElem::one(ring);
    // parity
    std::vector<bool> seen(n, false);
    bool odd = false;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::size_t len = 0, cur = s;
        while (!seen[cur]) {
            seen[cur] = true;
            cur = sigma[cur];
            ++len;
        }
        if (len % 2 == 0) odd = !odd;
    }
    if (odd)
        for (std::size_t j = 0; j < n; ++j) P.at(0, j) = -P.at(0, j);
    return P;
}

} // namespace

RMatrix conjugate_first_entry(const RMatrix& A, const RingElem& a) {
    require_group_input(A, "conjugate_first_entry");
    std::size_t n = A.n();
    if (n < 3) fail(Err::InvalidArgument, "conjugate_first_entry needs n >= 3");
    if (!a.is_unit()) fail(Err::NotAUnit, "target entry must be a unit");
    if (is_scalar_mod_m(A)) fail(Err::ScalarModM, "matrix is scalar modulo m");
    const Ring& ring = A.ring();
    RMatrix g = RMatrix::identity(ring, n);
    RMatrix B = A;

    auto tail_has_unit = [&](const RMatrix& M) {
        for (std::size_t i = 1; i < n; ++i)
            if (M.at(i, 0).is_unit()) return true;
        return false;
    };

    if (!tail_has_unit(B)) {
        RMatrix Bbar = B.reduce_to_field();
        std::size_t oi = n, oj = n;
        for (std::size_t i = 0; i < n && oi == n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && !Bbar.at(i, j).is_zero()) {
                    oi = i;
                    oj = j;
                    break;
                }
        if (oi != n) {
            // monomial conjugation sending entry (oi, oj) into the first-column tail
            std::vector<std::size_t> sigma(n, n);
            sigma[oj] = 0;
            sigma[oi] = 1;
            std::size_t next = 2;
            for (std::size_t t = 0; t < n; ++t)
                if (sigma[t] == n) sigma[t] = next++;
            RMatrix P = sl_permutation(ring, sigma);
            B = conjugate(P, B);
            g = P * g;
        } else {
            // residue is diagonal non-scalar: I + E_{j,0} produces entry (j,0) = A_00 - A_jj
            std::size_t j = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (Bbar.at(i, i) != Bbar.at(0, 0)) {
                    j = i;
                    break;
                }
            RMatrix E = RMatrix::identity(ring, n);
            E.at(j, 0) = RingElem::one(ring);
            B = conjugate(E, B);
            g = E * g;
        }
        if (!tail_has_unit(B)) fail(Err::ScalarModM, "failed to expose a unit below the corner");
    }

    auto conj_upper = [&](const std::vector<RingElem>& xrow) {
        RMatrix U = RMatrix::identity(ring, n);
        for (std::size_t j = 0; j + 1 < n; ++j) U.at(0, j + 1) = xrow[j];
        B = conjugate(U, B);
        g = U * g;
    };

    // steer the corner to a: x = ((a - alpha)/v_r) e_r
    std::size_t r = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (B.at(i, 0).is_unit()) {
            r = i;
            break;
        }
    {
        std::vector<RingElem> x(n - 1, RingElem::zero(ring));
        x[r - 1] = (a - B.at(0, 0)) * B.at(r, 0).invert();
        conj_upper(x);
    }

    auto side_matrix = [&]() {
        // a*C - v u^T for B = [[a, u^T],[v, C]]
        RMatrix M(ring, n - 1);
        for (std::size_t i = 0; i < n - 1; ++i)
            for (std::size_t j = 0; j < n - 1; ++j)
                M.at(i, j) = a * B.at(i + 1, j + 1) - B.at(i + 1, 0) * B.at(0, j + 1);
        return M;
    };

    if (is_scalar_mod_m(side_matrix())) {
        RMatrix Mbar = side_matrix().reduce_to_field();
        if (Mbar.at(0, 0).is_zero())
            fail(Err::NotInvertible, "aC - v u^T vanishes mod m; input was not invertible");
        // x = v_r e_s - v_s e_r kills x^T v exactly and adds a rank-one piece
        r = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (B.at(i, 0).is_unit()) {
                r = i;
                break;
            }
        std::size_t s = (r == 1) ? 2 : 1;
        std::vector<RingElem> x(n - 1, RingElem::zero(ring));
        x[s - 1] = B.at(r, 0);
        x[r - 1] = -B.at(s, 0);
        conj_upper(x);
    }

    if (B.at(0, 0) != a || is_scalar_mod_m(side_matrix()))
        fail(Err::InvalidArgument, "conjugate_first_entry postcondition failed");
    if (!det(g).is_one()) fail(Err::InvalidArgument, "conjugator left SL_n");
    return g;
}

std::vector<RingElem> choose_balanced_targets(std::size_t n, const Ring& ring) {
    if (n < 2) fail(Err::InvalidArgument, "n >= 2 required");
    u64 p = ring.p();
    if (p <= n + 1) fail(Err::FieldTooSmall, "residue field needs more than n+1 elements");
    std::size_t pairs = n / 2;
    std::vector<bool> used(p, false);
    used[1] = true; // reserved: the middle entry for odd n, and 1 is never a valid t
    std::vector<u64> ts;
    u64 t = 2;
    while (ts.size() < pairs) {
        if (t >= p) fail(Err::FieldTooSmall, "not enough distinct residues");
        u64 ti = *mod_inv(t, p);
        if (!used[t] && !used[ti] && ti != t) {
            used[t] = used[ti] = true;
            ts.push_back(t);
        }
        ++t;
    }
    std::vector<RingElem> out(n, RingElem::one(ring));
    for (std::size_t i = 0; i < pairs; ++i) {
        out[i] = RingElem(ring, ts[i]);
        out[n - 1 - i] = out[i].invert();
    }
    return out;
}

DecompositionTrace diagonalize_via_unipotents(const RMatrix& A, const std::vector<RingElem>& targets) {
    require_group_input(A, "diagonalize_via_unipotents");
    std::size_t n = A.n();
    const Ring& ring = A.ring();
    if (targets.size() != n) fail(Err::InvalidArgument, "need one target per row");
    RingElem prod = RingElem::one(ring);
    for (const auto& t : targets) {
        if (t.ring() != ring) fail(Err::RingMismatch, "target ring mismatch");
        if (!t.is_unit()) fail(Err::NotAUnit, "targets must be units");
        prod = prod * t;
    }
    if (prod != det(A)) fail(Err::DeterminantMismatch, "prod(targets) != det(A)");
    if (is_scalar_mod_m(A)) fail(Err::ScalarModM, "matrix is scalar modulo m");

    if (n == 2) {
        RMatrix g = conjugate_entry_2x2(A, targets[0]);
        RMatrix B = conjugate(g, A);
        RingElem ai = targets[0].invert();
        RMatrix X = RMatrix::identity(ring, 2);
        X.at(1, 0) = -(B.at(1, 0) * ai);
        RMatrix Y = RMatrix::identity(ring, 2);
        Y.at(0, 1) = -(B.at(0, 1) * ai);
        RMatrix D = X * B * Y;
        if (D != RMatrix::diagonal(targets))
            fail(Err::DeterminantMismatch, "2x2 diagonalization mismatch");
        return DecompositionTrace{g, X, Y, D, targets};
    }

    RMatrix g1 = conjugate_first_entry(A, targets[0]);
    RMatrix B = conjugate(g1, A);
    RingElem ai = targets[0].invert();
    RMatrix X1 = RMatrix::identity(ring, n);
    for (std::size_t i = 1; i < n; ++i) X1.at(i, 0) = -(B.at(i, 0) * ai);
    RMatrix Y1 = RMatrix::identity(ring, n);
    for (std::size_t j = 1; j < n; ++j) Y1.at(0, j) = -(B.at(0, j) * ai);
    RMatrix B1 = X1 * B * Y1;

    RMatrix C(ring, n - 1);
    for (std::size_t i = 0; i < n - 1; ++i)
        for (std::size_t j = 0; j < n - 1; ++j) C.at(i, j) = B1.at(i + 1, j + 1);
    std::vector<RingElem> rest(targets.begin() + 1, targets.end());
    DecompositionTrace sub = diagonalize_via_unipotents(C, rest);

    auto embed = [&](const RMatrix& S) {
        RMatrix E = RMatrix::identity(ring, n);
        for (std::size_t i = 0; i < n - 1; ++i)
            for (std::size_t j = 0; j < n - 1; ++j) E.at(i + 1, j + 1) = S.at(i, j);
        return E;
    };
    RMatrix G2 = embed(sub.g), X2 = embed(sub.X), Y2 = embed(sub.Y);
    RMatrix G2i = inverse(G2);

    DecompositionTrace tr{G2 * g1, X2 * (G2 * X1 * G2i), (G2 * Y1 * G2i) * Y2,
                          RMatrix::diagonal(targets), targets};
    if (!is_lower_unipotent(tr.X) || !is_upper_unipotent(tr.Y) ||
        tr.X * conjugate(tr.g, A) * tr.Y != tr.D)
        fail(Err::InvalidArgument, "diagonalization postcondition failed");
    return tr;
}

namespace {

// Exact roots in Z/p^k of a monic polynomial whose reduction splits with
// distinct simple roots; Newton lifting from the residue roots.
std::vector<RingElem> split_simple_roots(const std::vector<RingElem>& f, const Ring& ring, std::size_t n) {
    u64 p = ring.p();
    std::vector<u64> residue_roots;
    for (u64 r = 0; r < p; ++r) {
        u64 acc = 0, pw = 1;
        for (const auto& c : f) {
            acc = mod_add(acc, mod_mul(c.value() % p, pw, p), p);
            pw = mod_mul(pw, r, p);
        }
        if (acc == 0) residue_roots.push_back(r);
    }
    if (residue_roots.size() != n)
        fail(Err::NotRegularSemisimple,
             "characteristic polynomial does not split with n distinct roots mod p");
    std::vector<RingElem> roots;
    for (u64 r0 : residue_roots) {
        RingElem x(ring, r0);
        for (u32 it = 0; it <= ring.k() + 2; ++it) {
            RingElem fx = RingElem::zero(ring), dfx = RingElem::zero(ring), pw = RingElem::one(ring);
            for (std::size_t i = 0; i < f.size(); ++i) {
                fx = fx + f[i] * pw;
                if (i + 1 < f.size()) {
                    RingElem ip1 = RingElem(ring, static_cast<u64>(i + 1) % ring.modulus());
                    dfx = dfx + ip1 * f[i + 1] * pw;
                }
                pw = pw * x;
            }
            if (fx.is_zero()) break;
            x = x - fx * dfx.invert();
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end(),
              [](const RingElem& a, const RingElem& b) { return a.value() < b.value(); });
    return roots;
}

} // namespace

RMatrix cyclic_conjugator(const RMatrix& P, const RMatrix& Q) {
    require_group_input(P, "cyclic_conjugator");
    if (P.ring() != Q.ring() || P.n() != Q.n()) fail(Err::RingMismatch, "P and Q must match");
    if (P.ring().kind() != RingKind::TruncatedPAdic)
        fail(Err::InvalidArgument, "cyclic_conjugator works over Z/p^k");
    std::size_t n = P.n();
    const Ring& ring = P.ring();
    auto fP = charpoly(P), fQ = charpoly(Q);
    if (fP != fQ) fail(Err::EigenvalueMismatch, "characteristic polynomials differ");
    std::vector<RingElem> roots = split_simple_roots(fP, ring, n);
    for (const auto& r : roots)
        if (!r.is_unit()) fail(Err::NotRegularSemisimple, "eigenvalues must be units");

    auto eigenbasis = [&](const RMatrix& M) {
        RMatrix S(ring, n);
        for (std::size_t c = 0; c < n; ++c) {
            RMatrix shifted = M - RMatrix::scalar(ring, n, roots[c]);
            auto v = kernel_vector_rank_deficient_one(shifted);
            for (std::size_t i = 0; i < n; ++i) S.at(i, c) = v[i];
        }
        return S;
    };
    RMatrix SP = eigenbasis(P), SQ = eigenbasis(Q);
    RingElem delta = det(SQ) * det(SP).invert();
    // rescaling one eigencolumn sweeps out every unit determinant
    RingElem fix = delta.invert();
    for (std::size_t i = 0; i < n; ++i) SQ.at(i, 0) = SQ.at(i, 0) * fix;
    RMatrix h = SQ * inverse(SP);
    if (!det(h).is_one() || conjugate(h, P) != Q)
        fail(Err::EigenvalueMismatch, "conjugation verification failed");
    return h;
}

std::pair<CommutatorWitness, DecompositionTrace> commutator_witness(const RMatrix& A) {
    require_group_input(A, "commutator_witness");
    const Ring& ring = A.ring();
    std::size_t n = A.n();
    if (!det(A).is_one()) fail(Err::InvalidArgument, "target must lie in SL_n (det = 1)");
    if (is_scalar_mod_m(A)) fail(Err::ScalarModM, "target is scalar modulo m");
    if (ring.p() <= n + 1) fail(Err::FieldTooSmall, "residue field needs more than n+1 elements");

    std::vector<RingElem> bal = choose_balanced_targets(n, ring);
    std::vector<RingElem> squares;
    squares.reserve(n);
    for (const auto& a : bal) squares.push_back(a * a);

    DecompositionTrace tr = diagonalize_via_unipotents(A, squares);
    RMatrix D = RMatrix::diagonal(bal);
    RMatrix Pfac = inverse(tr.X) * D;      // lower triangular, diagonal a_i
    RMatrix Qfac = tr.Y * inverse(D);      // upper triangular, diagonal a_i^{-1}
    RMatrix h = cyclic_conjugator(Pfac, Qfac);

    RMatrix gi = inverse(tr.g);
    CommutatorWitness w{A, gi * Pfac * tr.g, gi * h * tr.g, WitnessMode::SL};
    auto check = verify_witness(w, &tr);
    if (!check.ok) fail(Err::InvalidArgument, "witness verification failed: " + check.reason);
    return {w, tr};
}

PslWitness psl_commutator(const RMatrix& A) {
    require_group_input(A, "psl_commutator");
    const Ring& ring = A.ring();
    std::size_t n = A.n();
    u64 p = ring.p();
    if ((p - 1) % n != 0 || n == p - 1)
        fail(Err::HypothesisViolated, "n must be a proper divisor of p-1");
    if (!det(A).is_one()) fail(Err::InvalidArgument, "PSL representative must have det = 1");

    if (!is_scalar_mod_m(A)) {
        auto [w, tr] = commutator_witness(A);
        (void)tr;
        return PslWitness{w, RingElem::one(ring), false};
    }
    RingElem cbar = A.reduce_to_field().at(0, 0);
    RingElem lambda = primitive_root_of_unity(n, p);
    RingElem zbar = lambda * cbar.invert();
    RingElem zeta = lift_root_of_unity(zbar, n, ring);
    RMatrix h = A.scaled(zeta); // det = zeta^n det(A) = 1, residue lambda*I
    ScalarWitnessResult sw = scalar_commutator(lambda, h);
    CommutatorWitness w{A, sw.witness.g1, sw.witness.g2, WitnessMode::PslPair};
    auto check = verify_witness(w);
    if (!check.ok) fail(Err::InvalidArgument, "PSL witness verification failed: " + check.reason);
    return PslWitness{w, zeta, true};
}

VerifyReport verify_witness(const CommutatorWitness& w, const DecompositionTrace* trace) {
    auto bad = [](const std::string& r) { return VerifyReport{false, r}; };
    const Ring& ring = w.target.ring();
    std::size_t n = w.target.n();
    if (n < 2) return bad("n must be at least 2");
    if (w.g1.ring() != ring || w.g2.ring() != ring || w.g1.n() != n || w.g2.n() != n)
        return bad("ring/dimension mismatch between witness matrices");
    if (!det(w.g1).is_unit() || !det(w.g2).is_unit()) return bad("witness factors are not invertible");
    RMatrix c = commutator(w.g1, w.g2);
    if (w.mode == WitnessMode::SL) {
        if (!det(w.g1).is_one() || !det(w.g2).is_one()) return bad("SL witness factors must have det 1");
        if (c != w.target) return bad("commutator does not equal the target");
    } else {
        if (!det(w.target).is_unit()) return bad("target is not invertible");
        RMatrix Z = c * inverse(w.target);
        RingElem z = Z.at(0, 0);
        if (Z != RMatrix::scalar(ring, n, z)) return bad("commutator/target quotient is not scalar");
        RingElem zn = RingElem::one(ring);
        for (std::size_t i = 0; i < n; ++i) zn = zn * z;
        if (!zn.is_one()) return bad("scalar quotient is not an exact n-th root of unity");
    }
    if (trace) {
        if (!is_lower_unipotent(trace->X)) return bad("trace X is not lower unipotent");
        if (!is_upper_unipotent(trace->Y)) return bad("trace Y is not upper unipotent");
        if (trace->D != RMatrix::diagonal(trace->targets)) return bad("trace D != diag(targets)");
        if (trace->X * conjugate(trace->g, w.target) * trace->Y != trace->D)
            return bad("trace identity X (g A g^-1) Y = D failed");
    }
    return VerifyReport{};
}

} // namespace commwit
