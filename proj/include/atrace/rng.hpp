#pragma once

#include <cstdint>
#include <random>

namespace atrace {

// All randomness flows through std::mt19937_64, whose output sequence is
// fully pinned by the standard. Distributions are hand-rolled below because
// std::uniform_int_distribution is not reproducible across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double prob) {
    if (prob <= 0.0) return false;
    if (prob >= 1.0) return true;
    return uniform01(rng) < prob;
}

// Without-replacement sampler over [1, p-1]: a seeded 4-round Feistel
// permutation of the index space, cycle-walked down to the domain and
// consumed sequentially. O(1) state per marker; no value repeats until all
// p-1 values have been issued, after which the sampler re-keys and restarts.
class XSampler {
public:
    XSampler(std::uint64_t p, std::uint64_t seed);

    std::uint64_t next();

    std::uint64_t issued() const { return issued_; }
    std::uint64_t domain_size() const { return n_; }
    std::uint64_t resets() const { return resets_; }

private:
    std::uint64_t permute(std::uint64_t v) const;
    void rekey();

    std::uint64_t n_;         // p - 1 values: 1..p-1
    std::uint64_t seed_;
    std::uint64_t keys_[4];
    unsigned half_bits_;
    std::uint64_t half_mask_;
    std::uint64_t index_ = 0;
    std::uint64_t issued_ = 0;
    std::uint64_t resets_ = 0;
};

} // namespace atrace
