#include "atrace/rng.hpp"

#include <bit>

namespace atrace {

XSampler::XSampler(std::uint64_t p, std::uint64_t seed) : n_(p - 1), seed_(seed) {
    // smallest even bit width covering the domain
    unsigned bits = std::bit_width(n_ - 1 > 0 ? n_ - 1 : 1);
    if (bits < 2) bits = 2;
    if (bits & 1) ++bits;
    half_bits_ = bits / 2;
    half_mask_ = (1ull << half_bits_) - 1;
    rekey();
}

void XSampler::rekey() {
    std::uint64_t s = seed_ + resets_ * 0x9e3779b97f4a7c15ull;
    for (auto& k : keys_) k = splitmix64(s);
}

std::uint64_t XSampler::permute(std::uint64_t v) const {
    std::uint64_t left = v >> half_bits_;
    std::uint64_t right = v & half_mask_;
    for (int round = 0; round < 4; ++round) {
        std::uint64_t mix = right ^ keys_[round];
        mix = (mix ^ (mix >> 30)) * 0xbf58476d1ce4e5b9ull;
        mix = (mix ^ (mix >> 27)) * 0x94d049bb133111ebull;
        std::uint64_t next_right = (left ^ mix) & half_mask_;
        left = right;
        right = next_right;
    }
    return (left << half_bits_) | right;
}

std::uint64_t XSampler::next() {
    if (issued_ == n_) {
        // the record is full: restart with a fresh permutation
        issued_ = 0;
        index_ = 0;
        ++resets_;
        rekey();
    }
    const std::uint64_t space = 1ull << (2 * half_bits_);
    std::uint64_t out;
    do {
        out = permute(index_++ % space);
    } while (out >= n_);
    ++issued_;
    return out + 1; // domain is GF(p) \ {0}
}

} // namespace atrace
