#include "atrace/marking.hpp"

#include <cmath>

#include "atrace/errors.hpp"

namespace atrace {

double marking_probability(const MarkingConfig& config, std::uint32_t hop_seen) {
    if (hop_seen == 0) hop_seen = 1;
    switch (config.scheme) {
        case MarkingConfig::Scheme::Uniform:
        case MarkingConfig::Scheme::Deterministic:
            return config.q;
        case MarkingConfig::Scheme::Cutoff:
            return hop_seen <= config.h0 ? config.q : 0.0;
        case MarkingConfig::Scheme::Geometric:
            return hop_seen <= config.h0 ? std::pow(config.alpha, hop_seen) : 0.0;
    }
    return 0.0;
}

Packet init_mark(NodeMarkerState& state) {
    Packet pkt;
    pkt.flag = 1;
    pkt.hop = 1;
    pkt.x = state.used_x.next();
    pkt.y = state.node_id;
    return pkt;
}

Packet update_mark(const Packet& pkt, fe node_id, const FieldCtx& ctx) {
    if (!pkt.marked()) throw UnmarkedPacket();
    Packet out = pkt;
    out.y = ctx.add(ctx.mul(pkt.y, pkt.x), node_id);
    out.hop = pkt.hop + 1;
    return out;
}

NodeMarkerState& MarkerPool::state_for(fe node_id) {
    auto it = states_.find(node_id);
    if (it == states_.end()) {
        std::uint64_t mix = seed_ ^ (node_id * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
        it = states_.emplace(node_id, NodeMarkerState(node_id, p_, mix)).first;
    }
    return it->second;
}

Packet send_deterministic(const Path& path, double q1, const FieldCtx& ctx, Rng& rng,
                          MarkerPool& pool) {
    const std::size_t d = path.length();
    Packet pkt;
    if (bernoulli(rng, q1)) {
        pkt = init_mark(pool.state_for(path.at(1)));
        for (std::size_t i = 2; i <= d; ++i) pkt = update_mark(pkt, path.at(i), ctx);
    } else {
        pkt.flag = 0;
        pkt.hop = static_cast<std::uint32_t>(d);
    }
    return pkt;
}

Packet send_randomized(const Path& path, const MarkingConfig& config, const FieldCtx& ctx,
                       Rng& rng, MarkerPool& pool) {
    const std::size_t d = path.length();
    Packet pkt;
    for (std::size_t i = 1; i <= d; ++i) {
        const fe id = path.at(i);
        double override_q = -1.0;
        if (!config.per_node.empty() && i <= config.per_node.size())
            override_q = config.per_node[i - 1];
        const std::uint32_t hop_seen = pkt.marked() ? pkt.hop + 1 : 1;
        const double q = override_q >= 0.0 ? override_q : marking_probability(config, hop_seen);
        if (bernoulli(rng, q)) {
            pkt = init_mark(pool.state_for(id));
        } else if (pkt.marked()) {
            pkt = update_mark(pkt, id, ctx);
        } else {
            pkt.hop += 1;
        }
    }
    if (!pkt.marked()) pkt.hop = static_cast<std::uint32_t>(d);
    return pkt;
}

std::vector<Packet> traverse_deterministic(const Path& path, std::size_t n_packets, double q1,
                                           const FieldCtx& ctx, Rng& rng, MarkerPool& pool) {
    std::vector<Packet> out;
    out.reserve(n_packets);
    for (std::size_t i = 0; i < n_packets; ++i)
        out.push_back(send_deterministic(path, q1, ctx, rng, pool));
    return out;
}

std::vector<Packet> traverse_randomized(const Path& path, std::size_t n_packets,
                                        const MarkingConfig& config, const FieldCtx& ctx,
                                        Rng& rng, MarkerPool& pool) {
    std::vector<Packet> out;
    out.reserve(n_packets);
    for (std::size_t i = 0; i < n_packets; ++i)
        out.push_back(send_randomized(path, config, ctx, rng, pool));
    return out;
}

} // namespace atrace
