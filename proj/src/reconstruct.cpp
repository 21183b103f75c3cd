#include "atrace/reconstruct.hpp"

#include <string>
#include <unordered_set>

#include "atrace/errors.hpp"

namespace atrace {

std::map<std::uint32_t, EvaluationSet> segregate_by_hopcount(const std::vector<Packet>& packets) {
    std::map<std::uint32_t, EvaluationSet> buckets;
    std::map<std::uint32_t, std::unordered_set<fe>> seen;
    for (const Packet& pkt : packets) {
        if (!pkt.marked()) continue;
        EvaluationSet& set = buckets[pkt.hop];
        set.hop = pkt.hop;
        if (!seen[pkt.hop].insert(pkt.x).second) {
            ++set.duplicates_dropped;
            continue;
        }
        set.pairs.emplace_back(pkt.x, pkt.y);
    }
    return buckets;
}

Path interpolate_path(const EvaluationSet& set, std::size_t d, const FieldCtx& ctx) {
    if (d < 1) throw InsufficientPairs("path length must be at least 1");
    if (set.pairs.size() < d)
        throw InsufficientPairs("need " + std::to_string(d) + " pairs, have " +
                                std::to_string(set.pairs.size()));

    std::vector<fe> xs(d), diffs(d);
    for (std::size_t i = 0; i < d; ++i) {
        xs[i] = set.pairs[i].first;
        diffs[i] = set.pairs[i].second;
        for (std::size_t j = 0; j < i; ++j)
            if (xs[j] == xs[i]) throw DuplicateX();
    }

    // Newton divided differences: after pass j, diffs[i] holds
    // [y_{i-j} .. y_i], so diffs[i] ends up as the coefficient of the
    // Newton basis term prod_{t<i} (x - x_t).
    for (std::size_t j = 1; j < d; ++j) {
        for (std::size_t i = d - 1; i >= j; --i) {
            const fe num = ctx.sub(diffs[i], diffs[i - 1]);
            const fe den = ctx.sub(xs[i], xs[i - j]);
            diffs[i] = ctx.mul(num, ctx.inv(den));
        }
    }

    // expand the Newton form into monomial coefficients, lowest degree first
    std::vector<fe> coeffs(d, 0);
    for (std::size_t i = d; i-- > 0;) {
        // coeffs(x) <- coeffs(x) * (x - x_i) + diffs[i]
        for (std::size_t t = d - 1; t >= 1; --t)
            coeffs[t] = ctx.sub(coeffs[t - 1], ctx.mul(coeffs[t], xs[i]));
        coeffs[0] = ctx.sub(diffs[i], ctx.mul(coeffs[0], xs[i]));
    }

    // y(x) = sum_i r_{d-i} x^i: the degree-(d-1) coefficient is r_1
    Path path;
    path.nodes.assign(coeffs.rbegin(), coeffs.rend());

    // extra pairs double as an integrity check
    for (std::size_t i = d; i < set.pairs.size(); ++i) {
        const auto& [x, y] = set.pairs[i];
        if (poly_eval_horner(path.nodes, x, ctx) != y)
            throw InconsistentEvidence("pair " + std::to_string(i) +
                                       " violates the recovered polynomial");
    }
    return path;
}

Path reconstruct_randomized(const std::vector<Packet>& packets, const FieldCtx& ctx) {
    auto buckets = segregate_by_hopcount(packets);
    if (buckets.empty()) throw InsufficientPairs("no marked packets");

    const std::uint32_t d = buckets.rbegin()->first;
    const EvaluationSet& full = buckets.rbegin()->second;
    if (full.pairs.size() < d)
        throw InsufficientPairs("hop-" + std::to_string(d) + " bucket holds " +
                                std::to_string(full.pairs.size()) + " pairs, need " +
                                std::to_string(d));
    Path path = interpolate_path(full, d, ctx);

    // every lower bucket must agree with the corresponding suffix
    for (const auto& [hop, set] : buckets) {
        if (hop == d) continue;
        const std::span<const fe> suffix(path.nodes.data() + (d - hop), hop);
        for (const auto& [x, y] : set.pairs) {
            if (poly_eval_horner(suffix, x, ctx) != y)
                throw InconsistentEvidence("hop-" + std::to_string(hop) +
                                           " pair violates the recovered suffix");
        }
    }
    return path;
}

} // namespace atrace
