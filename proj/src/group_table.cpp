#include "commwit/group_table.hpp"

namespace commwit {

std::size_t DynBitset::count() const {
    std::size_t c = 0;
    for (u64 x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
    return c;
}

bool DynBitset::all() const { return count() == nbits; }

FiniteGroupTable FiniteGroupTable::build(std::size_t n, u64 p, u64 scan_budget,
                                         std::size_t mul_table_threshold) {
    FiniteGroupTable t;
    t.n_ = n;
    t.p_ = p;
    t.elems_ = enumerate_sl(n, p, scan_budget);
    t.packed_.reserve(t.elems_.size());
    for (u32 i = 0; i < t.elems_.size(); ++i) {
        auto key = t.elems_[i].canonical_key();
        u64 packed = t.pack(key.data());
        t.packed_.push_back(packed);
        t.index_.emplace(packed, i);
    }
    t.id_ = t.index_of(RMatrix::identity(t.elems_[0].ring(), n));
    t.inv_.resize(t.elems_.size());
    for (u32 i = 0; i < t.elems_.size(); ++i) t.inv_[i] = t.index_of(inverse(t.elems_[i]));
    if (t.elems_.size() <= mul_table_threshold) {
        u64 sz = static_cast<u64>(t.elems_.size());
        t.mul_.assign(sz * sz, 0);
        for (u32 a = 0; a < sz; ++a)
            for (u32 b = 0; b < sz; ++b) t.mul_[a * sz + b] = t.index_of(t.elems_[a] * t.elems_[b]);
        t.has_mul_table_ = true;
    }
    return t;
}

u64 FiniteGroupTable::pack(const u64* vals) const {
    u64 key = 0;
    for (std::size_t i = 0; i < n_ * n_; ++i) key = key * p_ + vals[i];
    return key;
}

u32 FiniteGroupTable::index_of(const RMatrix& m) const {
    auto key = m.canonical_key();
    auto it = index_.find(pack(key.data()));
    if (it == index_.end()) fail(Err::InvalidArgument, "matrix is not in the enumerated group");
    return it->second;
}

u32 FiniteGroupTable::mul(u32 a, u32 b) const {
    if (has_mul_table_) return mul_[static_cast<u64>(a) * elems_.size() + b];
    return index_of(elems_[a] * elems_[b]);
}

u32 FiniteGroupTable::pow(u32 a, i64 e) const {
    u32 base = e < 0 ? inv_[a] : a;
    u64 exp = e < 0 ? static_cast<u64>(-e) : static_cast<u64>(e);
    u32 acc = id_;
    while (exp) {
        if (exp & 1) acc = mul(acc, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return acc;
}

std::vector<u32> FiniteGroupTable::center() const {
    std::vector<u32> out;
    const Ring& f = elems_[0].ring();
    for (u64 c = 1; c < p_; ++c) {
        RMatrix s = RMatrix::scalar(f, n_, RingElem(f, c));
        if (det(s).is_one()) out.push_back(index_of(s));
    }
    return out;
}

std::string FiniteGroupTable::group_name() const {
    return "SL(" + std::to_string(n_) + ", F_" + std::to_string(p_) + ")";
}

} // namespace commwit
