#include "atrace/netcode.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "atrace/errors.hpp"
#include "atrace/reconstruct.hpp"

namespace atrace {

std::string NamedDag::name_of(fe id) const {
    auto it = names.find(id);
    return it != names.end() ? it->second : std::to_string(id);
}

NamedDag butterfly(fe p) {
    const fe S = 2, C = 3, E = 5, A = 7, B = p > 11 ? 11 : 9, D1 = p > 13 ? 13 : 10,
             D2 = p > 17 ? 17 : 8;
    NamedDag nd;
    nd.dag.nodes = {S, C, E, A, B, D1, D2};
    nd.dag.edges = {{S, C}, {S, E}, {C, D1}, {C, A}, {E, D2}, {E, A}, {A, B}, {B, D1}, {B, D2}};
    nd.dag.sources = {S};
    nd.dag.destinations = {D1, D2};
    nd.names = {{S, "S"}, {C, "C"}, {E, "E"}, {A, "A"}, {B, "B"}, {D1, "D1"}, {D2, "D2"}};
    return nd;
}

namespace {

std::vector<fe> topological_order(const Dag& dag) {
    std::unordered_map<fe, std::size_t> indegree;
    for (fe v : dag.nodes) indegree[v] = 0;
    for (const auto& [u, v] : dag.edges) ++indegree[v];
    std::deque<fe> ready;
    for (fe v : dag.nodes)
        if (indegree[v] == 0) ready.push_back(v);
    std::vector<fe> order;
    while (!ready.empty()) {
        fe u = ready.front();
        ready.pop_front();
        order.push_back(u);
        for (const auto& [a, b] : dag.edges)
            if (a == u && --indegree[b] == 0) ready.push_back(b);
    }
    if (order.size() != dag.nodes.size())
        throw FormatError("graph has a cycle");
    return order;
}

std::size_t select_index(std::size_t slot, std::size_t n) { return slot % n; }

} // namespace

std::vector<Path> decompose_paths(const Dag& dag, fe s, fe t) {
    // unit capacities; residual kept as flow per directed edge index,
    // reverse residual as flow > 0
    const std::size_t m = dag.edges.size();
    std::vector<int> flow(m, 0);

    auto bfs_augment = [&]() -> bool {
        // parent edge index and direction (+1 forward, -1 backward)
        std::unordered_map<fe, std::pair<std::size_t, int>> parent;
        std::unordered_set<fe> seen{s};
        std::deque<fe> queue{s};
        while (!queue.empty() && !seen.count(t)) {
            fe u = queue.front();
            queue.pop_front();
            for (std::size_t e = 0; e < m; ++e) {
                const auto& [a, b] = dag.edges[e];
                if (a == u && flow[e] == 0 && !seen.count(b)) {
                    parent[b] = {e, +1};
                    seen.insert(b);
                    queue.push_back(b);
                } else if (b == u && flow[e] == 1 && !seen.count(a)) {
                    parent[a] = {e, -1};
                    seen.insert(a);
                    queue.push_back(a);
                }
            }
        }
        if (!seen.count(t)) return false;
        for (fe v = t; v != s;) {
            auto [e, dir] = parent[v];
            flow[e] += dir;
            v = dir > 0 ? dag.edges[e].first : dag.edges[e].second;
        }
        return true;
    };

    while (bfs_augment()) {}

    std::vector<Path> paths;
    for (;;) {
        Path path;
        path.nodes.push_back(s);
        fe u = s;
        while (u != t) {
            bool advanced = false;
            for (std::size_t e = 0; e < m; ++e) {
                if (dag.edges[e].first == u && flow[e] == 1) {
                    flow[e] = 0;
                    u = dag.edges[e].second;
                    path.nodes.push_back(u);
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
        if (u != t) break;
        paths.push_back(std::move(path));
    }
    if (paths.empty()) throw NoPath(std::to_string(s) + " -> " + std::to_string(t));
    return paths;
}

std::pair<fe, fe> coding_node_forward(const std::vector<std::pair<fe, fe>>& incoming,
                                      fe node_id, std::size_t slot, const FieldCtx& ctx) {
    if (incoming.empty()) throw InsufficientPairs("coding node with no incoming pair");
    const auto& [x, y] = incoming[select_index(slot, incoming.size())];
    return {x, ctx.add(ctx.mul(y, x), node_id)};
}

std::map<fe, std::vector<CodingObservation>> run_coded(const Dag& dag, fe source,
                                                       std::size_t n_slots, const FieldCtx& ctx,
                                                       std::uint64_t seed) {
    const std::vector<fe> order = topological_order(dag);
    const std::unordered_set<fe> dests(dag.destinations.begin(), dag.destinations.end());
    MarkerPool pool(ctx, seed);

    std::map<fe, std::vector<CodingObservation>> observed;
    for (std::size_t slot = 0; slot < n_slots; ++slot) {
        // arrivals at each node this slot, in edge-list order for
        // deterministic coding-node selection
        std::unordered_map<fe, std::vector<std::pair<fe, Packet>>> inbox;
        for (fe u : order) {
            std::vector<std::pair<fe, Packet>> arrivals;
            if (u == source) {
                // one fresh mark per outgoing edge
                for (const auto& [a, b] : dag.edges)
                    if (a == u) {
                        Packet pkt = init_mark(pool.state_for(u));
                        inbox[b].emplace_back(u, pkt);
                    }
                continue;
            }
            auto it = inbox.find(u);
            if (it == inbox.end() || it->second.empty()) continue;
            arrivals = std::move(it->second);

            if (dests.count(u)) {
                for (const auto& [from, pkt] : arrivals)
                    observed[u].push_back({from, u, slot, pkt});
                continue;
            }
            const Packet& chosen =
                arrivals[select_index(slot, arrivals.size())].second;
            Packet fwd = update_mark(chosen, u, ctx);
            for (const auto& [a, b] : dag.edges)
                if (a == u) inbox[b].emplace_back(u, fwd);
        }
    }
    return observed;
}

std::vector<Path> trace_subgraph(const std::vector<CodingObservation>& observations,
                                 const FieldCtx& ctx) {
    // same incoming edge + same hop count can still interleave two
    // upstream branches of a combining node; slot parity separates them
    struct Key {
        fe from;
        std::uint32_t hop;
        std::size_t parity;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, EvaluationSet> groups;
    std::map<Key, fe> group_dest;
    std::map<Key, std::unordered_set<fe>> seen_x;
    for (const CodingObservation& obs : observations) {
        if (!obs.packet.marked()) continue;
        Key key{obs.from, obs.packet.hop, obs.slot % 2};
        EvaluationSet& set = groups[key];
        set.hop = obs.packet.hop;
        group_dest[key] = obs.dest;
        if (!seen_x[key].insert(obs.packet.x).second) {
            ++set.duplicates_dropped;
            continue;
        }
        set.pairs.emplace_back(obs.packet.x, obs.packet.y);
    }

    std::set<std::vector<fe>> unique;
    for (const auto& [key, set] : groups) {
        Path recovered = interpolate_path(set, key.hop, ctx);
        recovered.nodes.push_back(group_dest[key]);
        unique.insert(recovered.nodes);
    }
    std::vector<Path> paths;
    for (const auto& nodes : unique) paths.push_back(Path{nodes});
    return paths;
}

std::vector<fe> intersect_failure_subgraphs(const std::vector<std::vector<fe>>& subgraphs) {
    if (subgraphs.empty()) throw EmptyIntersection("no failed-slot subgraphs given");
    std::set<fe> acc(subgraphs[0].begin(), subgraphs[0].end());
    for (std::size_t i = 1; i < subgraphs.size(); ++i) {
        std::set<fe> next(subgraphs[i].begin(), subgraphs[i].end());
        std::set<fe> out;
        std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                              std::inserter(out, out.begin()));
        acc = std::move(out);
    }
    if (acc.empty()) throw EmptyIntersection("no node common to all failed slots");
    return {acc.begin(), acc.end()};
}

} // namespace atrace
