#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "atrace/field.hpp"
#include "atrace/marking.hpp"
#include "atrace/path.hpp"
#include "atrace/rng.hpp"

namespace atrace {

// Directed acyclic graph with unit-capacity edges. Node IDs double as the
// marking IDs folded into packets.
struct Dag {
    std::vector<fe> nodes;
    std::vector<std::pair<fe, fe>> edges;
    std::vector<fe> sources;
    std::vector<fe> destinations;
};

struct NamedDag {
    Dag dag;
    std::unordered_map<fe, std::string> names;

    std::string name_of(fe id) const;
};

// The classic two-destination multicast graph: S feeds C and E, the inner
// node A must combine both flows, B fans back out to D1 and D2.
NamedDag butterfly(fe p = 65537);

// Edge-disjoint s->t paths achieving the min-cut, found by augmenting-path
// max-flow (Edmonds-Karp) followed by flow decomposition. Throws NoPath.
std::vector<Path> decompose_paths(const Dag& dag, fe s, fe t);

// One value-pair arriving at a destination. The destination can tell which
// edge delivered it and in which time slot.
struct CodingObservation {
    fe from = 0;
    fe dest = 0;
    std::size_t slot = 0;
    Packet packet;
};

// A node with several incoming flows forwards exactly one of them per
// slot, updated with its own ID. Selection alternates with slot parity so
// every upstream branch is covered.
std::pair<fe, fe> coding_node_forward(const std::vector<std::pair<fe, fe>>& incoming,
                                      fe node_id, std::size_t slot, const FieldCtx& ctx);

// Slot-synchronous forwarding over the whole DAG: each slot the source
// initiates one fresh mark per outgoing edge, inner nodes fold their IDs
// (combining nodes pick by slot parity), destinations record what lands.
std::map<fe, std::vector<CodingObservation>> run_coded(const Dag& dag, fe source,
                                                       std::size_t n_slots, const FieldCtx& ctx,
                                                       std::uint64_t seed);

// Groups one destination's observations by (incoming edge, hop count, slot
// parity) and interpolates each group into the node sequence that produced
// it; the destination itself is appended. Identical recoveries merge.
std::vector<Path> trace_subgraph(const std::vector<CodingObservation>& observations,
                                 const FieldCtx& ctx);

// Nodes common to every failed slot's subgraph; a single faulty node must
// live in this set. Throws EmptyIntersection when nothing survives.
std::vector<fe> intersect_failure_subgraphs(const std::vector<std::vector<fe>>& subgraphs);

} // namespace atrace
