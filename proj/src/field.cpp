#include "atrace/field.hpp"

#include <string>

namespace atrace {

namespace {

bool is_prime_u32(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t f = 3; f * f <= n; f += 2) {
        if (n % f == 0) return false;
    }
    return true;
}

} // namespace

FieldCtx::FieldCtx(std::uint64_t p) : p_(p) {
    if (p >= (1ull << 32))
        throw NotPrime("modulus " + std::to_string(p) + " exceeds 2^32");
    if (p <= 2)
        throw NotPrime("modulus must exceed 2: the field needs distinct x values");
    if (!is_prime_u32(p))
        throw NotPrime("modulus " + std::to_string(p) + " is not prime");
}

fe FieldCtx::pow(fe base, std::uint64_t e) const {
    fe acc = 1;
    fe b = base % p_;
    while (e) {
        if (e & 1) acc = mul(acc, b);
        b = mul(b, b);
        e >>= 1;
    }
    return acc;
}

fe FieldCtx::inv(fe a) const {
    if (a == 0) throw ZeroInverse();
    // extended Euclid over signed 64-bit; p < 2^32 keeps everything in range
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p_);
    return static_cast<fe>(t);
}

fe poly_eval_horner(std::span<const fe> coeffs, fe x, const FieldCtx& ctx) {
    fe y = 0;
    for (fe c : coeffs) y = ctx.add(ctx.mul(y, x), c);
    return y;
}

} // namespace atrace
