#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "atrace/field.hpp"
#include "atrace/marking.hpp"
#include "atrace/path.hpp"

namespace atrace {

// Evaluation pairs sharing one hop count; x values pairwise distinct.
struct EvaluationSet {
    std::vector<std::pair<fe, fe>> pairs; // (x, y)
    std::uint32_t hop = 0;
    std::size_t duplicates_dropped = 0;
};

// Buckets marked packets by hop; within a bucket a repeated x keeps its
// first occurrence and bumps duplicates_dropped.
std::map<std::uint32_t, EvaluationSet> segregate_by_hopcount(const std::vector<Packet>& packets);

// Recovers (r_1 .. r_d) as the coefficients of the unique degree-(d-1)
// polynomial through the first d pairs, by Newton divided differences over
// GF(p). Pairs beyond d must satisfy the recovered polynomial or
// InconsistentEvidence is thrown. Throws InsufficientPairs / DuplicateX.
Path interpolate_path(const EvaluationSet& set, std::size_t d, const FieldCtx& ctx);

// Full-path recovery from a randomized-mode capture: interpolates the
// maximum-hop bucket (hop = d); lower buckets are cross-checked as
// suffixes.
Path reconstruct_randomized(const std::vector<Packet>& packets, const FieldCtx& ctx);

} // namespace atrace
