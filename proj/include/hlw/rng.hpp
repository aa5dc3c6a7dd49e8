#pragma once

#include <cstdint>

namespace hlw {

/// splitmix64 step; used both as a generator and to derive independent
/// streams from (seed, index) pairs so that parallel sweeps produce the
/// same bytes regardless of thread count.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** seeded via splitmix64. All draws below are fully specified
/// arithmetic (no library distributions), keeping reports byte-stable
/// across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    /// Independent stream for work item `index` under a base seed.
    static Rng for_item(uint64_t seed, uint64_t index) {
        uint64_t sm = seed ^ (0xa0761d6478bd642fULL * (index + 1));
        return Rng(splitmix64(sm));
    }

    uint64_t next() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, n) by 128-bit multiply-shift.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; never zero, so sampled functions stay
    /// strictly positive where positivity is assumed.
    double uniform_pos() { return 1.0 - uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    uint64_t s_[4];
};

}  // namespace hlw
