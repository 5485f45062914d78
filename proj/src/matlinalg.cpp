#include "commwit/matlinalg.hpp"

#include <algorithm>
#include <sstream>

namespace commwit {

RMatrix::RMatrix(Ring ring, std::size_t n) : ring_(std::move(ring)), n_(n) {
    if (n < 1) fail(Err::InvalidArgument, "matrix dimension must be positive");
    e_.assign(n * n, RingElem::zero(ring_));
}

RMatrix RMatrix::identity(const Ring& ring, std::size_t n) {
    RMatrix m(ring, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = RingElem::one(ring);
    return m;
}

RMatrix RMatrix::from_values(const Ring& ring, std::size_t n, const std::vector<i64>& rowmajor) {
    if (rowmajor.size() != n * n) fail(Err::InvalidArgument, "entry count != n^2");
    RMatrix m(ring, n);
    for (std::size_t i = 0; i < n * n; ++i) m.e_[i] = RingElem::from_int(ring, rowmajor[i]);
    return m;
}

RMatrix RMatrix::diagonal(const std::vector<RingElem>& diag) {
    if (diag.empty()) fail(Err::InvalidArgument, "empty diagonal");
    RMatrix m(diag[0].ring(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
    return m;
}

RMatrix RMatrix::scalar(const Ring& ring, std::size_t n, const RingElem& c) {
    RMatrix m(ring, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c;
    return m;
}

bool RMatrix::operator==(const RMatrix& o) const { return ring_ == o.ring_ && n_ == o.n_ && e_ == o.e_; }

RMatrix RMatrix::operator*(const RMatrix& o) const {
    if (ring_ != o.ring_ || n_ != o.n_) fail(Err::RingMismatch, "matrix product needs matching rings/sizes");
    RMatrix r(ring_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const RingElem& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < n_; ++j) r.at(i, j) = r.at(i, j) + aik * o.at(k, j);
        }
    return r;
}

RMatrix RMatrix::operator+(const RMatrix& o) const {
    if (ring_ != o.ring_ || n_ != o.n_) fail(Err::RingMismatch, "matrix sum needs matching rings/sizes");
    RMatrix r(*this);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.e_[i] = r.e_[i] + o.e_[i];
    return r;
}

RMatrix RMatrix::operator-(const RMatrix& o) const {
    if (ring_ != o.ring_ || n_ != o.n_) fail(Err::RingMismatch, "matrix difference needs matching rings/sizes");
    RMatrix r(*this);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.e_[i] = r.e_[i] - o.e_[i];
    return r;
}

RMatrix RMatrix::scaled(const RingElem& c) const {
    RMatrix r(*this);
    for (auto& x : r.e_) x = x * c;
    return r;
}

RMatrix RMatrix::transpose() const {
    RMatrix r(ring_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
    return r;
}

RMatrix RMatrix::pow(i64 e) const {
    RMatrix base = e < 0 ? inverse(*this) : *this;
    u64 exp = e < 0 ? static_cast<u64>(-e) : static_cast<u64>(e);
    RMatrix acc = identity(ring_, n_);
    while (exp) {
        if (exp & 1) acc = acc * base;
        base = base * base;
        exp >>= 1;
    }
    return acc;
}

bool RMatrix::is_identity() const { return *this == identity(ring_, n_); }

RMatrix RMatrix::reduce_to_field() const {
    RMatrix r(ring_.residue_field(), n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.e_[i] = e_[i].reduce_to_field();
    return r;
}

RMatrix RMatrix::reduce_precision(u32 j) const {
    RMatrix r(Ring::zmod(ring_.p(), j), n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.e_[i] = e_[i].reduce_precision(j);
    return r;
}

RMatrix RMatrix::lift_to(const Ring& target) const {
    RMatrix r(target, n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.e_[i] = e_[i].lift_to(target);
    return r;
}

std::vector<u64> RMatrix::canonical_key() const {
    std::vector<u64> k;
    k.reserve(n_ * n_);
    for (const auto& x : e_) k.push_back(x.value());
    return k;
}

bool RMatrix::lex_less(const RMatrix& o) const { return canonical_key() < o.canonical_key(); }

std::string RMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < n_; ++i) {
        os << "[";
        for (std::size_t j = 0; j < n_; ++j) os << at(i, j).str() << (j + 1 < n_ ? "," : "");
        os << "]" << (i + 1 < n_ ? "," : "");
    }
    os << "]";
    return os.str();
}

RingElem det(const RMatrix& A) {
    // subset DP over column sets: exact in any commutative ring, no division
    std::size_t n = A.n_;
    if (n > 20) fail(Err::InvalidArgument, "determinant dimension out of scope");
    std::vector<RingElem> dp(std::size_t(1) << n, RingElem::zero(A.ring_));
    dp[0] = RingElem::one(A.ring_);
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
        bool neg = (row & 1) != 0; // cofactor sign (-1)^{row + position}
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (std::size_t(1) << j))) continue;
            const RingElem& a = A.at(row, j);
            if (!a.is_zero()) {
                RingElem term = a * dp[mask ^ (std::size_t(1) << j)];
                dp[mask] = neg ? dp[mask] - term : dp[mask] + term;
            }
            neg = !neg;
        }
    }
    return dp.back();
}

RMatrix inverse(const RMatrix& A) {
    // Gauss-Jordan with unit pivots; valid over local rings
    std::size_t n = A.n_;
    RMatrix work(A), inv = RMatrix::identity(A.ring_, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t r = col; r < n; ++r)
            if (work.at(r, col).is_unit()) {
                piv = r;
                break;
            }
        if (piv == n) fail(Err::NotInvertible, "no unit pivot in column " + std::to_string(col));
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        RingElem s = work.at(col, col).invert();
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) = work.at(col, j) * s;
            inv.at(col, j) = inv.at(col, j) * s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || work.at(r, col).is_zero()) continue;
            RingElem f = work.at(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                work.at(r, j) = work.at(r, j) - f * work.at(col, j);
                inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

RMatrix commutator(const RMatrix& g1, const RMatrix& g2) { return g1 * g2 * inverse(g1) * inverse(g2); }

RMatrix conjugate(const RMatrix& g, const RMatrix& A) { return g * A * inverse(g); }

bool is_scalar_mod_m(const RMatrix& A) {
    RMatrix r = A.reduce_to_field();
    const RingElem c = r.at(0, 0);
    return r == RMatrix::scalar(r.ring(), r.n(), c);
}

bool is_lower_unipotent(const RMatrix& A) {
    for (std::size_t i = 0; i < A.n(); ++i)
        for (std::size_t j = 0; j < A.n(); ++j) {
            if (i == j && !A.at(i, j).is_one()) return false;
            if (i < j && !A.at(i, j).is_zero()) return false;
        }
    return true;
}

bool is_upper_unipotent(const RMatrix& A) {
    for (std::size_t i = 0; i < A.n(); ++i)
        for (std::size_t j = 0; j < A.n(); ++j) {
            if (i == j && !A.at(i, j).is_one()) return false;
            if (i > j && !A.at(i, j).is_zero()) return false;
        }
    return true;
}

namespace {

// dense polynomials over a Ring, constant term first
using Poly = std::vector<RingElem>;

Poly poly_mul(const Poly& f, const Poly& g, const Ring& ring) {
    Poly h(f.size() + g.size() - 1, RingElem::zero(ring));
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = h[i + j] + f[i] * g[j];
    return h;
}

Poly poly_add(const Poly& f, const Poly& g, const Ring& ring) {
    Poly h(std::max(f.size(), g.size()), RingElem::zero(ring));
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = h[i] + f[i];
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = h[i] + g[i];
    return h;
}

} // namespace

std::vector<RingElem> charpoly(const RMatrix& A) {
    // det(xI - A) by the same subset DP, with degree-<=1 polynomial entries
    std::size_t n = A.n();
    const Ring& ring = A.ring();
    if (n > 8) fail(Err::InvalidArgument, "charpoly dimension out of scope");
    auto entry = [&](std::size_t i, std::size_t j) -> Poly {
        Poly e{-A.at(i, j)};
        if (i == j) e.push_back(RingElem::one(ring));
        return e;
    };
    std::vector<Poly> dp(std::size_t(1) << n, Poly{RingElem::zero(ring)});
    dp[0] = Poly{RingElem::one(ring)};
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
        Poly acc{RingElem::zero(ring)};
        bool neg = (row & 1) != 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (std::size_t(1) << j))) continue;
            Poly term = poly_mul(entry(row, j), dp[mask ^ (std::size_t(1) << j)], ring);
            if (neg)
                for (auto& c : term) c = -c;
            acc = poly_add(acc, term, ring);
            neg = !neg;
        }
        dp[mask] = std::move(acc);
    }
    Poly out = dp.back();
    out.resize(n + 1, RingElem::zero(ring));
    return out;
}

// ---------------------------------------------------------------------------
// Field linear algebra

LinearMapOverField LinearMapOverField::zero(u64 p, std::size_t rows, std::size_t cols) {
    return LinearMapOverField{p, rows, cols, std::vector<u64>(rows * cols, 0)};
}

LinearMapOverField LinearMapOverField::identity(u64 p, std::size_t n) {
    auto m = zero(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

LinearMapOverField LinearMapOverField::transpose() const {
    auto t = zero(p, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

std::vector<u64> LinearMapOverField::apply(const std::vector<u64>& x) const {
    std::vector<u64> y(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < cols; ++j) acc = mod_add(acc, mod_mul(at(i, j), x[j] % p, p), p);
        y[i] = acc;
    }
    return y;
}

FieldSolveResult solve_over_field(const LinearMapOverField& M, const std::vector<u64>& b) {
    if (b.size() != M.rows) fail(Err::InvalidArgument, "rhs size mismatch");
    u64 p = M.p;
    std::size_t rows = M.rows, cols = M.cols;
    std::vector<std::vector<u64>> a(rows, std::vector<u64>(cols + 1, 0));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = M.at(i, j) % p;
        a[i][cols] = b[i] % p;
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(a[r], a[sel]);
        u64 inv = *mod_inv(a[r][c], p);
        for (std::size_t j = c; j <= cols; ++j) a[r][j] = mod_mul(a[r][j], inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            u64 f = a[i][c];
            for (std::size_t j = c; j <= cols; ++j) a[i][j] = mod_sub(a[i][j], mod_mul(f, a[r][j], p), p);
        }
        pivot_col.push_back(c);
        ++r;
    }
    FieldSolveResult res;
    res.rank = r;
    bool consistent = true;
    for (std::size_t i = r; i < rows; ++i)
        if (a[i][cols] != 0) consistent = false;
    if (consistent) {
        std::vector<u64> x(cols, 0);
        for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = a[i][cols];
        res.solution = std::move(x);
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<u64> v(cols, 0);
        v[fc] = 1;
        for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = mod_neg(a[i][fc], p);
        res.nullspace.push_back(std::move(v));
    }
    return res;
}

std::size_t rank_over_field(const LinearMapOverField& M) {
    return solve_over_field(M, std::vector<u64>(M.rows, 0)).rank;
}

LinearMapOverField stack_maps(const LinearMapOverField& top, const LinearMapOverField& bottom) {
    if (top.cols != bottom.cols || top.p != bottom.p) fail(Err::InvalidArgument, "stack shape mismatch");
    LinearMapOverField m = LinearMapOverField::zero(top.p, top.rows + bottom.rows, top.cols);
    std::copy(top.a.begin(), top.a.end(), m.a.begin());
    std::copy(bottom.a.begin(), bottom.a.end(), m.a.begin() + static_cast<std::ptrdiff_t>(top.a.size()));
    return m;
}

// ---------------------------------------------------------------------------
// Valuation-aware elimination over Z/p^k

std::optional<std::vector<RingElem>> solve_over_ring(const Ring& ring, std::size_t rows, std::size_t cols,
                                                     const std::vector<RingElem>& M,
                                                     const std::vector<RingElem>& b) {
    if (ring.kind() != RingKind::TruncatedPAdic) fail(Err::InvalidArgument, "solve_over_ring needs Z/p^k");
    if (M.size() != rows * cols || b.size() != rows) fail(Err::InvalidArgument, "system shape mismatch");
    u32 k = ring.k();
    u64 p = ring.p();
    std::vector<std::vector<RingElem>> a(rows, std::vector<RingElem>(cols + 1, RingElem::zero(ring)));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = M[i * cols + j];
        a[i][cols] = b[i];
    }
    std::vector<bool> row_used(rows, false), col_used(cols, false);
    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col), pivot = p^v after normalization
    for (;;) {
        // global minimal-valuation pivot among unused rows/cols; ties -> smallest (row, col)
        u32 best_v = k;
        std::size_t br = rows, bc = cols;
        for (std::size_t i = 0; i < rows; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                if (col_used[j] || a[i][j].is_zero()) continue;
                u32 v = a[i][j].valuation();
                if (v < best_v) {
                    best_v = v;
                    br = i;
                    bc = j;
                }
            }
        }
        if (br == rows) break;
        // normalize pivot row so the pivot becomes exactly p^v
        u64 unit = a[br][bc].value();
        for (u32 t = 0; t < best_v; ++t) unit /= p;
        RingElem uinv = RingElem(ring, unit).invert();
        for (std::size_t j = 0; j <= cols; ++j) a[br][j] = a[br][j] * uinv;
        u64 pv = 1;
        for (u32 t = 0; t < best_v; ++t) pv *= p;
        // eliminate the pivot column everywhere else: entries have valuation >= v
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == br || a[i][bc].is_zero()) continue;
            RingElem f(ring, a[i][bc].value() / pv);
            for (std::size_t j = 0; j <= cols; ++j) a[i][j] = a[i][j] - f * a[br][j];
        }
        row_used[br] = true;
        col_used[bc] = true;
        pivots.emplace_back(br, bc);
    }
    // consistency: untouched rows must have zero rhs
    for (std::size_t i = 0; i < rows; ++i)
        if (!row_used[i] && !a[i][cols].is_zero()) return std::nullopt;
    // back-substitute in reverse pivot order; free variables = 0
    std::vector<RingElem> x(cols, RingElem::zero(ring));
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        auto [r, c] = *it;
        RingElem rhs = a[r][cols];
        for (std::size_t j = 0; j < cols; ++j)
            if (j != c && !x[j].is_zero()) rhs = rhs - a[r][j] * x[j];
        u32 v = a[r][c].is_zero() ? k : a[r][c].valuation();
        if (v == 0) {
            x[c] = rhs * a[r][c].invert();
            continue;
        }
        if (rhs.is_zero()) continue; // x[c] = 0 works
        if (rhs.valuation() < v) return std::nullopt;
        u64 pv = 1;
        for (u32 t = 0; t < v; ++t) pv *= p;
        x[c] = RingElem(ring, rhs.value() / pv);
    }
    // final exact check of the candidate solution
    for (std::size_t i = 0; i < rows; ++i) {
        RingElem acc = RingElem::zero(ring);
        for (std::size_t j = 0; j < cols; ++j) acc = acc + M[i * cols + j] * x[j];
        if (acc != b[i]) return std::nullopt;
    }
    return x;
}

std::vector<RingElem> kernel_vector_rank_deficient_one(const RMatrix& M) {
    std::size_t n = M.n();
    const Ring& ring = M.ring();
    // unit-pivot Gauss-Jordan; exactly one column must remain free
    std::vector<std::vector<RingElem>> a(n, std::vector<RingElem>(n, RingElem::zero(ring)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = M.at(i, j);
    std::vector<std::size_t> pivot_of_col(n, n);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = r; i < n; ++i)
            if (a[i][c].is_unit()) {
                sel = i;
                break;
            }
        if (sel == n) continue;
        std::swap(a[r], a[sel]);
        RingElem inv = a[r][c].invert();
        for (std::size_t j = 0; j < n; ++j) a[r][j] = a[r][j] * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r) continue;
            RingElem f = a[i][c];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) a[i][j] = a[i][j] - f * a[r][j];
        }
        pivot_of_col[c] = r;
        ++r;
    }
    if (r != n - 1) fail(Err::NotRegularSemisimple, "kernel is not free of rank one");
    std::size_t free_col = n;
    for (std::size_t c = 0; c < n; ++c)
        if (pivot_of_col[c] == n) free_col = c;
    std::vector<RingElem> x(n, RingElem::zero(ring));
    x[free_col] = RingElem::one(ring);
    for (std::size_t c = 0; c < n; ++c)
        if (pivot_of_col[c] != n) x[c] = -a[pivot_of_col[c]][free_col];
    // the dropped row must vanish on x
    for (std::size_t i = 0; i < n; ++i) {
        RingElem acc = RingElem::zero(ring);
        for (std::size_t j = 0; j < n; ++j) acc = acc + M.at(i, j) * x[j];
        if (!acc.is_zero()) fail(Err::NotRegularSemisimple, "kernel vector verification failed");
    }
    return x;
}

// ---------------------------------------------------------------------------
// sl/gl coordinates

std::size_t sl_dim(std::size_t n) { return n * n - 1; }

RMatrix sl_basis_matrix(const Ring& field, std::size_t n, std::size_t idx) {
    RMatrix m(field, n);
    std::size_t offdiag = n * n - n;
    if (idx < offdiag) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                if (pos == idx) {
                    m.at(i, j) = RingElem::one(field);
                    return m;
                }
                ++pos;
            }
    }
    std::size_t i = idx - offdiag; // H_i = E_ii - E_{i+1,i+1}
    m.at(i, i) = RingElem::one(field);
    m.at(i + 1, i + 1) = -RingElem::one(field);
    return m;
}

RMatrix gl_basis_matrix(const Ring& field, std::size_t n, std::size_t idx) {
    RMatrix m(field, n);
    m.at(idx / n, idx % n) = RingElem::one(field);
    return m;
}

std::vector<u64> sl_coords(const RMatrix& M) {
    std::size_t n = M.n();
    u64 p = M.ring().p();
    // trace must vanish
    u64 tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr = mod_add(tr, M.at(i, i).value(), p);
    if (tr % p != 0) fail(Err::InvalidArgument, "sl coordinates of a non-traceless matrix");
    std::vector<u64> c;
    c.reserve(sl_dim(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) c.push_back(M.at(i, j).value());
    // diagonal (d_0..d_{n-1}) with sum 0: coefficient of H_i is d_0 + ... + d_i
    u64 acc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        acc = mod_add(acc, M.at(i, i).value(), p);
        c.push_back(acc);
    }
    return c;
}

std::vector<u64> gl_coords(const RMatrix& M) {
    std::vector<u64> c;
    c.reserve(M.n() * M.n());
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = 0; j < M.n(); ++j) c.push_back(M.at(i, j).value());
    return c;
}

RMatrix sl_from_coords(const Ring& field, std::size_t n, const std::vector<u64>& c) {
    if (c.size() != sl_dim(n)) fail(Err::InvalidArgument, "sl coordinate size mismatch");
    RMatrix m(field, n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) m.at(i, j) = RingElem(field, c[pos++]);
    u64 p = field.p();
    u64 prev = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        u64 h = c[pos++] % p;
        m.at(i, i) = RingElem(field, mod_sub(h, prev, p));
        prev = h;
    }
    m.at(n - 1, n - 1) = RingElem(field, mod_neg(prev, p));
    return m;
}

RMatrix gl_from_coords(const Ring& field, std::size_t n, const std::vector<u64>& c) {
    if (c.size() != n * n) fail(Err::InvalidArgument, "gl coordinate size mismatch");
    RMatrix m(field, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = RingElem(field, c[i * n + j]);
    return m;
}

LinearMapOverField adjoint_on_sl(const RMatrix& g) {
    if (!g.ring().is_field()) fail(Err::InvalidArgument, "adjoint_on_sl expects a matrix over F_p");
    std::size_t n = g.n(), d = sl_dim(n);
    RMatrix gi = inverse(g);
    auto M = LinearMapOverField::zero(g.ring().p(), d, d);
    for (std::size_t j = 0; j < d; ++j) {
        RMatrix img = gi * sl_basis_matrix(g.ring(), n, j) * g;
        auto col = sl_coords(img);
        for (std::size_t i = 0; i < d; ++i) M.at(i, j) = col[i];
    }
    return M;
}

std::vector<RMatrix> enumerate_sl(std::size_t n, u64 p, u64 scan_budget) {
    if (n < 2) fail(Err::InvalidArgument, "SL_n needs n >= 2");
    Ring f = Ring::zmod(p, 1);
    u64 total = 1;
    for (std::size_t i = 0; i < n * n; ++i) {
        if (total > scan_budget / p + 1) fail(Err::BudgetExceeded, "p^(n^2) exceeds enumeration budget");
        total *= p;
    }
    if (total > scan_budget) fail(Err::BudgetExceeded, "p^(n^2) exceeds enumeration budget");
    std::vector<RMatrix> out;
    std::vector<i64> entries(n * n, 0);
    for (u64 code = 0; code < total; ++code) {
        u64 c = code;
        for (std::size_t i = n * n; i-- > 0;) {
            entries[i] = static_cast<i64>(c % p);
            c /= p;
        }
        RMatrix m = RMatrix::from_values(f, n, entries);
        if (det(m).is_one()) out.push_back(std::move(m));
    }
    return out;
}

} // namespace commwit
