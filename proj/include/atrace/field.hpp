#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "atrace/errors.hpp"

namespace atrace {

// A residue in [0, p). All node IDs and mark values live here.
using fe = std::uint64_t;

// Prime field GF(p) for p < 2^32. Products of two reduced residues fit in
// a uint64_t, so no widening tricks are needed.
//
// The multiplication counter exists so tests can assert the decoder's
// operation budget; it is not thread-safe when one ctx is shared across
// threads (give each worker its own copy).
class FieldCtx {
public:
    explicit FieldCtx(std::uint64_t p = 65537);

    std::uint64_t modulus() const { return p_; }

    fe reduce(std::uint64_t v) const { return v % p_; }

    fe add(fe a, fe b) const {
        fe s = a + b;
        return s >= p_ ? s - p_ : s;
    }

    fe sub(fe a, fe b) const { return a >= b ? a - b : a + p_ - b; }

    fe neg(fe a) const { return a == 0 ? 0 : p_ - a; }

    fe mul(fe a, fe b) const {
        ++mul_count_;
        return (a * b) % p_;
    }

    fe pow(fe base, std::uint64_t e) const;

    // Extended Euclid; exact, never probabilistic. Throws ZeroInverse on a = 0.
    fe inv(fe a) const;

    std::uint64_t mul_count() const { return mul_count_; }
    void reset_mul_count() const { mul_count_ = 0; }

private:
    std::uint64_t p_;
    mutable std::uint64_t mul_count_ = 0;
};

// Value of the polynomial with the given coefficients (highest degree first)
// at x, by left-to-right Horner folding. Identical to the chain of per-hop
// mark updates y <- y*x + r.
fe poly_eval_horner(std::span<const fe> coeffs, fe x, const FieldCtx& ctx);

} // namespace atrace
