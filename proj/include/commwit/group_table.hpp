#pragma once

#include <unordered_map>

#include "commwit/matlinalg.hpp"

namespace commwit {

/// Bitset sized to a finite group; merge by OR is the kernels' reduction.
struct DynBitset {
    std::vector<u64> w;
    std::size_t nbits = 0;

    explicit DynBitset(std::size_t bits = 0) : w((bits + 63) / 64, 0), nbits(bits) {}
    void set(std::size_t i) { w[i >> 6] |= u64(1) << (i & 63); }
    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void or_with(const DynBitset& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
    }
    std::size_t count() const;
    bool all() const;
    bool operator==(const DynBitset& o) const { return nbits == o.nbits && w == o.w; }
};

/// SL_n(F_p) as an indexed element list in canonical order, with inverse and
/// (for small groups) a dense multiplication table.
class FiniteGroupTable {
public:
    static FiniteGroupTable build(std::size_t n, u64 p, u64 scan_budget = 5'000'000,
                                  std::size_t mul_table_threshold = 3000);

    std::size_t n() const { return n_; }
    u64 p() const { return p_; }
    u32 size() const { return static_cast<u32>(elems_.size()); }
    const RMatrix& elem(u32 i) const { return elems_[i]; }
    const std::vector<RMatrix>& elements() const { return elems_; }

    u32 index_of(const RMatrix& m) const;
    u32 mul(u32 a, u32 b) const;
    u32 inv(u32 a) const { return inv_[a]; }
    u32 conj(u32 g, u32 x) const { return mul(mul(g, x), inv_[g]); }
    u32 pow(u32 a, i64 e) const;
    u32 identity_index() const { return id_; }

    /// Indices of the center (scalar matrices with det 1).
    std::vector<u32> center() const;

    std::string group_name() const;

private:
    u64 pack(const u64* vals) const;
    std::size_t n_ = 0;
    u64 p_ = 0;
    u32 id_ = 0;
    std::vector<RMatrix> elems_;
    std::vector<u64> packed_;
    std::vector<u32> inv_;
    std::vector<u32> mul_; // dense |G|^2 table when small enough
    bool has_mul_table_ = false;
    std::unordered_map<u64, u32> index_;
};

} // namespace commwit
