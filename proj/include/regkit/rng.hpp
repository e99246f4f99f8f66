#pragma once

#include <cstdint>
#include <vector>

namespace regkit {

/// splitmix64 step. Small, portable, and identical on every platform, which
/// is what the byte-identical-report requirement actually needs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless combine for deriving per-call substreams from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (salt << 6) + (salt >> 2));
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially close seeds
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double next_signed() { return 2.0 * next_double() - 1.0; }

    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    /// Nonempty random subset of {0, ..., n-1} as a bitmask, n <= 64.
    std::uint64_t next_nonempty_mask(int n) {
        const std::uint64_t full = (n >= 64) ? ~0ULL : ((1ULL << n) - 1);
        for (;;) {
            std::uint64_t m = next_u64() & full;
            if (m != 0) return m;
        }
    }

private:
    std::uint64_t state_;
};

/// Random vector with entries in [-1, 1), rejected until comfortably nonzero,
/// then scaled to unit Euclidean norm.
std::vector<double> random_unit_vector(int n, std::uint64_t seed);

} // namespace regkit
