#include "atrace/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "atrace/errors.hpp"

namespace atrace {

KnownPath::KnownPath(Path path, const FieldCtx& ctx) : path_(std::move(path)), ctx_(&ctx) {}

fe KnownPath::poly_a(std::size_t k, fe x) const {
    const std::size_t dd = d();
    if (k < 1 || k > dd + 1)
        throw KOutOfRange("a_k: k = " + std::to_string(k) + " outside 1.." + std::to_string(dd + 1));
    if (k == dd + 1) return 0;
    // coefficients r_k .. r_d, highest degree first
    return poly_eval_horner(std::span<const fe>(path_.nodes.data() + (k - 1), dd - k + 1), x,
                            *ctx_);
}

fe KnownPath::poly_b(std::size_t k, fe x) const {
    const std::size_t dd = d();
    if (k < 1 || k > dd + 1)
        throw KOutOfRange("b_k: k = " + std::to_string(k) + " outside 1.." + std::to_string(dd + 1));
    // coefficients r_1 .. r_{k-1}, highest degree first; empty at k = 1
    return poly_eval_horner(std::span<const fe>(path_.nodes.data(), k - 1), x, *ctx_);
}

fe KnownPath::poly_b_h(std::size_t k, std::size_t h, fe x) const {
    const std::size_t dd = d();
    if (h < 1 || h > dd + 1)
        throw KOutOfRange("b_{k,h}: h = " + std::to_string(h) + " outside 1.." +
                          std::to_string(dd + 1));
    if (k > dd + 1 || k + h < dd + 2)
        throw KOutOfRange("b_{k,h}: k = " + std::to_string(k) + " outside " +
                          std::to_string(dd - h + 2) + ".." + std::to_string(dd + 1));
    // coefficients r_{d-h+2} .. r_{k-1}, highest degree first
    const std::size_t lo = dd - h + 2;
    return poly_eval_horner(std::span<const fe>(path_.nodes.data() + (lo - 1), k - lo), x, *ctx_);
}

std::size_t required_l(std::size_t d, const FieldCtx& ctx, std::uint32_t delta) {
    // ceil(log_p d) without floating point: smallest t with p^t >= d
    std::size_t t = 0;
    unsigned __int128 acc = 1;
    while (acc < d) {
        acc *= ctx.modulus();
        ++t;
    }
    return t + delta;
}

namespace {

struct ColumnSweep {
    std::vector<fe> a;   // a[k], 1-based, k = 1..d+1
    std::vector<fe> b;   // b_{k,h}[k]; only k >= lo meaningful
    std::size_t lo;      // first k with a defined truncated prefix
};

// One O(d) pass per column: running suffix sums for a_k and the Horner
// recurrence b_{k,h} = r_{k-1} + x * b_{k-1,h}.
ColumnSweep sweep_column(const KnownPath& kp, fe x, std::size_t h) {
    const std::size_t d = kp.d();
    const FieldCtx& ctx = kp.ctx();
    const auto& r = kp.path().nodes;

    ColumnSweep s;
    s.a.assign(d + 2, 0);
    s.b.assign(d + 2, 0);
    s.lo = d - h + 2;

    fe pw = 1;
    for (std::size_t k = d; k >= 1; --k) {
        s.a[k] = ctx.add(s.a[k + 1], ctx.mul(r[k - 1], pw));
        pw = ctx.mul(pw, x);
    }
    for (std::size_t k = s.lo + 1; k <= d + 1; ++k)
        s.b[k] = ctx.add(r[k - 2], ctx.mul(x, s.b[k - 1]));
    return s;
}

} // namespace

CandidateMatrix build_S(const KnownPath& kp, const std::vector<MarkPair>& pairs,
                        bool hop_limited) {
    const std::size_t d = kp.d();
    const FieldCtx& ctx = kp.ctx();
    const std::size_t l = pairs.size();

    CandidateMatrix m{CandidateMatrix::Kind::S_hat, d + 1, l,
                      std::vector<fe>((d + 1) * l, 0),
                      std::vector<std::uint8_t>((d + 1) * l, 0)};

    for (std::size_t j = 0; j < l; ++j) {
        const MarkPair& pair = pairs[j];
        if (pair.x == 0) throw ZeroX();
        const std::size_t h =
            hop_limited ? std::min<std::size_t>(pair.hop, d + 1) : d + 1;
        ColumnSweep s = sweep_column(kp, pair.x, h);

        const fe invx = ctx.inv(pair.x);
        // k walks lo..d+1 while x^{-(d-k+1)} walks invx^{h-1}..invx^0
        fe ipw = ctx.pow(invx, h - 1);
        for (std::size_t k = s.lo; k <= d + 1; ++k) {
            const fe lhs = ctx.mul(ctx.sub(pair.value, s.a[k]), ipw);
            const fe entry = ctx.sub(lhs, ctx.mul(pair.x, s.b[k]));
            m.entries[(k - 1) * l + j] = entry;
            m.valid[(k - 1) * l + j] = 1;
            ipw = ctx.mul(ipw, pair.x);
        }
    }
    return m;
}

CandidateMatrix build_R(const KnownPath& kp, const std::vector<MarkPair>& pairs,
                        bool hop_limited) {
    const std::size_t d = kp.d();
    const FieldCtx& ctx = kp.ctx();
    const std::size_t l = pairs.size();

    CandidateMatrix m{CandidateMatrix::Kind::R_hat, d, l,
                      std::vector<fe>(d * l, 0),
                      std::vector<std::uint8_t>(d * l, 0)};

    for (std::size_t j = 0; j < l; ++j) {
        const MarkPair& pair = pairs[j];
        if (pair.x == 0) throw ZeroX();
        // the deletion test reads the mark as if it had traversed two more
        // nodes: the deleted one and the hypothesis row's predecessor
        const std::size_t h_eff =
            hop_limited ? std::min<std::size_t>(pair.hop + 2, d + 1) : d + 1;
        // position hypotheses a hop-h mark can witness: k >= d - h + 1,
        // extended by one (to k = d - h) only for full-length marks so a
        // deletion of the source itself stays visible. For shorter marks
        // that extra row is poison: it always evaluates to the constant
        // r_{d-h} no matter what the mark actually saw.
        std::size_t k_min = 1;
        if (hop_limited && pair.hop < d)
            k_min = pair.hop + 1 == d ? d - pair.hop : d - pair.hop + 1;
        ColumnSweep s = sweep_column(kp, pair.x, h_eff);

        const fe invx = ctx.inv(pair.x);
        fe ipw = ctx.pow(invx, d - k_min);
        for (std::size_t k = k_min; k <= d; ++k) {
            const fe rhs = ctx.mul(ctx.sub(pair.value, s.a[k]), ipw);
            const fe entry = ctx.sub(s.b[k], rhs);
            m.entries[(k - 1) * l + j] = entry;
            m.valid[(k - 1) * l + j] = 1;
            ipw = ctx.mul(ipw, pair.x);
        }
    }
    return m;
}

namespace {

struct RowMatch {
    std::size_t k = 0;
    fe value = 0;
    std::size_t support = 0;
};

// Rows whose valid entries are all equal, with at least min_support of them.
std::vector<RowMatch> matched_rows(const CandidateMatrix& m, std::size_t min_support) {
    std::vector<RowMatch> out;
    for (std::size_t k = 1; k <= m.rows; ++k) {
        fe value = 0;
        std::size_t support = 0;
        bool equal = true;
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (!m.is_valid(k, j)) continue;
            if (support == 0)
                value = m.at(k, j);
            else if (m.at(k, j) != value)
                equal = false;
            ++support;
        }
        if (equal && support >= min_support) out.push_back({k, value, support});
    }
    return out;
}

bool all_same_value(const std::vector<RowMatch>& matches) {
    for (const RowMatch& m : matches)
        if (m.value != matches.front().value) return false;
    return true;
}

std::vector<std::size_t> row_indices(const std::vector<RowMatch>& matches) {
    std::vector<std::size_t> out;
    out.reserve(matches.size());
    for (const RowMatch& m : matches) out.push_back(m.k);
    return out;
}

// An addition hypothesis that duplicates its neighbor in the known path is
// observationally confusable with no change at all; the randomized decoder
// demotes such rows.
bool duplicates_neighbor(const KnownPath& kp, std::size_t k, fe value) {
    if (k >= 2 && kp.path().at(k - 1) == value) return true;
    if (k <= kp.d() && kp.path().at(k) == value) return true;
    return false;
}

DetectionResult detect_windowed(const KnownPath& kp, const PairSource& stream,
                                const DecoderParams& params, bool deletion) {
    std::deque<MarkPair> window;
    std::size_t consumed = 0;
    auto pull = [&](std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            auto pair = stream();
            if (!pair) throw StreamExhausted();
            window.push_back(*pair);
            ++consumed;
        }
    };
    pull(params.l);

    for (std::uint32_t attempt = 0; attempt <= params.retry_cap; ++attempt) {
        const std::vector<MarkPair> pairs(window.begin(), window.end());
        const CandidateMatrix m = deletion ? build_R(kp, pairs) : build_S(kp, pairs);
        std::vector<RowMatch> matches = matched_rows(m, params.l);
        if (deletion) {
            // only the ID actually at position k can have been deleted there
            std::erase_if(matches,
                          [&](const RowMatch& r) { return r.value != kp.path().at(r.k); });
        }
        if (matches.size() == 1 || (matches.size() > 1 && all_same_value(matches))) {
            const RowMatch& best = matches.front();
            ChangeEvent ev = deletion ? ChangeEvent::deleted(best.k, best.value)
                                      : ChangeEvent::added(best.k, best.value);
            return {ev, row_indices(matches), consumed, attempt};
        }
        if (attempt == params.retry_cap) break;
        pull(params.epsilon);
        for (std::uint32_t i = 0; i < params.epsilon; ++i) window.pop_front();
    }
    throw AmbiguousChange(std::string(deletion ? "deletion" : "addition") +
                          " decoder found no unique consistent row after " +
                          std::to_string(params.retry_cap) + " retries");
}

} // namespace

DetectionResult detect_addition(const KnownPath& kp, const PairSource& stream,
                                const DecoderParams& params) {
    return detect_windowed(kp, stream, params, false);
}

DetectionResult detect_deletion(const KnownPath& kp, const PairSource& stream,
                                const DecoderParams& params) {
    return detect_windowed(kp, stream, params, true);
}

DetectionResult detect_change_randomized(const KnownPath& kp, const std::vector<Packet>& buffer,
                                         const DecoderParams& params, double worst_ratio) {
    const std::size_t d = kp.d();
    const std::size_t window_size =
        params.l * static_cast<std::size_t>(std::ceil(worst_ratio));

    std::vector<MarkPair> marked;
    marked.reserve(buffer.size());
    for (const Packet& pkt : buffer)
        if (pkt.marked()) marked.push_back({pkt.x, pkt.y, pkt.hop});
    if (marked.size() < window_size)
        throw InsufficientBuffer("buffer holds " + std::to_string(marked.size()) +
                                 " marked packets, need " + std::to_string(window_size));

    // highest hop first; most recent first within a hop (fresher packets
    // are less likely to predate the change)
    std::vector<std::size_t> order(marked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        if (marked[lhs].hop != marked[rhs].hop) return marked[lhs].hop > marked[rhs].hop;
        return lhs > rhs;
    });

    for (std::uint32_t attempt = 0; attempt <= params.retry_cap; ++attempt) {
        const std::size_t offset = attempt * params.epsilon;
        if (offset + params.l > order.size()) break;
        std::vector<MarkPair> window;
        window.reserve(params.l);
        bool addition_only = false;
        for (std::size_t i = 0; i < params.l; ++i) {
            window.push_back(marked[order[offset + i]]);
            if (window.back().hop > d) addition_only = true;
        }

        const CandidateMatrix s_hat = build_S(kp, window, true);
        std::vector<RowMatch> s_matches = matched_rows(s_hat, 2);
        std::erase_if(s_matches,
                      [&](const RowMatch& r) { return duplicates_neighbor(kp, r.k, r.value); });
        if (s_matches.size() == 1 || (s_matches.size() > 1 && all_same_value(s_matches))) {
            const RowMatch& best = s_matches.front();
            return {ChangeEvent::added(best.k, best.value), row_indices(s_matches), window_size,
                    attempt};
        }
        if (!s_matches.empty()) continue; // conflicting candidates: slide the window
        if (addition_only) continue;      // a hop above d proves addition; keep looking

        const CandidateMatrix r_hat = build_R(kp, window, true);
        std::vector<RowMatch> r_matches = matched_rows(r_hat, 2);
        std::erase_if(r_matches,
                      [&](const RowMatch& r) { return r.value != kp.path().at(r.k); });
        if (r_matches.size() == 1 || (r_matches.size() > 1 && all_same_value(r_matches))) {
            const RowMatch& best = r_matches.front();
            return {ChangeEvent::deleted(best.k, best.value), row_indices(r_matches), window_size,
                    attempt};
        }
        if (!r_matches.empty()) continue;

        return {ChangeEvent::none(), {}, window_size, attempt};
    }
    throw AmbiguousChange("randomized decoder exhausted its retry budget");
}

} // namespace atrace
