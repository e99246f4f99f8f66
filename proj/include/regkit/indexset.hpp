#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace regkit {

/// Index subsets are uint64 bitmasks throughout the cut/graph layers, which
/// caps those layers at 64 indices. Lexicographic comparison of sets is
/// plain integer comparison of masks.
using IndexMask = std::uint64_t;

inline int popcount(IndexMask m) { return std::popcount(m); }

inline IndexMask full_mask(int n) {
    return (n >= 64) ? ~IndexMask{0} : ((IndexMask{1} << n) - 1);
}

inline std::vector<int> mask_to_indices(IndexMask m) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(popcount(m)));
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

inline IndexMask indices_to_mask(const std::vector<int>& idx) {
    IndexMask m = 0;
    for (int i : idx) m |= IndexMask{1} << i;
    return m;
}

template <class Fn>
inline void for_each_bit(IndexMask m, Fn&& fn) {
    while (m) {
        fn(std::countr_zero(m));
        m &= m - 1;
    }
}

} // namespace regkit
