#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "atrace/field.hpp"
#include "atrace/path.hpp"
#include "atrace/rng.hpp"

namespace atrace {

// The marked-packet wire unit. When flag = 0 the (x, y) fields are
// meaningless and hop counts the nodes traversed since origin; when
// flag = 1, hop counts the nodes that have touched the mark, marker
// included.
struct Packet {
    std::uint8_t flag = 0;
    std::uint32_t hop = 0;
    fe x = 0;
    fe y = 0;

    bool marked() const { return flag != 0; }
    bool operator==(const Packet&) const = default;
};

// Per-node marking probability as a function of the hop a mark would carry.
//   Uniform:       q for every hop
//   Cutoff:        q for 1 <= h <= h0, 0 beyond       (scheme 1)
//   Geometric:     alpha^h for 1 <= h <= h0, 0 beyond  (scheme 2)
//   Deterministic: only the source marks, with probability q1
struct MarkingConfig {
    enum class Scheme { Uniform, Cutoff, Geometric, Deterministic };

    Scheme scheme = Scheme::Uniform;
    double q = 0.04;
    double alpha = 0.5;
    std::uint32_t h0 = 5;
    // optional per-position override: probability applied by node r_i is
    // per_node[i-1], ignoring the scheme formula
    std::vector<double> per_node;

    static MarkingConfig uniform(double q) { return {Scheme::Uniform, q, 0.5, 5, {}}; }
    static MarkingConfig cutoff(double q, std::uint32_t h0) {
        return {Scheme::Cutoff, q, 0.5, h0, {}};
    }
    static MarkingConfig geometric(double alpha, std::uint32_t h0) {
        return {Scheme::Geometric, 0.0, alpha, h0, {}};
    }
    static MarkingConfig deterministic(double q1 = 1.0) {
        return {Scheme::Deterministic, q1, 0.5, 5, {}};
    }
};

// Probability that a candidate marker re-marks a packet that would carry
// hop count hop_seen after the mark (an unmarked packet presents h = 1).
double marking_probability(const MarkingConfig& config, std::uint32_t hop_seen);

// One marker's x bookkeeping: fresh x values from GF(p) \ {0}, no reissue
// before exhaustion.
struct NodeMarkerState {
    fe node_id;
    XSampler used_x;

    NodeMarkerState(fe id, std::uint64_t p, std::uint64_t seed)
        : node_id(id), used_x(p, seed) {}
};

// flag=1, hop=1, fresh x, y = marker's own ID.
Packet init_mark(NodeMarkerState& state);

// y' = y*x + node_id, hop' = hop + 1. Throws UnmarkedPacket on flag = 0.
Packet update_mark(const Packet& pkt, fe node_id, const FieldCtx& ctx);

// Owns one sampler per node ID so traversals over a mutating path keep
// their x records as the path gains and loses nodes.
class MarkerPool {
public:
    MarkerPool(const FieldCtx& ctx, std::uint64_t seed) : p_(ctx.modulus()), seed_(seed) {}

    NodeMarkerState& state_for(fe node_id);

private:
    std::uint64_t p_;
    std::uint64_t seed_;
    std::unordered_map<fe, NodeMarkerState> states_;
};

// Source-initiated encoding: r_1 marks with probability q1, every later
// node folds its ID into y.
Packet send_deterministic(const Path& path, double q1, const FieldCtx& ctx, Rng& rng,
                          MarkerPool& pool);

// Randomized re-marking per the per-node probabilities; surviving marks
// carry the Horner value of the suffix sub-path of their last marker.
Packet send_randomized(const Path& path, const MarkingConfig& config, const FieldCtx& ctx,
                       Rng& rng, MarkerPool& pool);

std::vector<Packet> traverse_deterministic(const Path& path, std::size_t n_packets, double q1,
                                           const FieldCtx& ctx, Rng& rng, MarkerPool& pool);

std::vector<Packet> traverse_randomized(const Path& path, std::size_t n_packets,
                                        const MarkingConfig& config, const FieldCtx& ctx,
                                        Rng& rng, MarkerPool& pool);

} // namespace atrace
