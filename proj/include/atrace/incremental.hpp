#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "atrace/field.hpp"
#include "atrace/marking.hpp"
#include "atrace/path.hpp"

namespace atrace {

// The pre-change path as known to the destination from the initial
// traceback, with the prefix/suffix polynomial evaluations the candidate
// matrices are built from.
class KnownPath {
public:
    KnownPath(Path path, const FieldCtx& ctx);

    const Path& path() const { return path_; }
    std::size_t d() const { return path_.length(); }
    const FieldCtx& ctx() const { return *ctx_; }

    // suffix polynomial a_k(x) = r_d + r_{d-1} x + ... + r_k x^{d-k};
    // zero at k = d+1
    fe poly_a(std::size_t k, fe x) const;

    // prefix polynomial b_k(x) = r_{k-1} + r_{k-2} x + ... + r_1 x^{k-2};
    // zero at k = 1
    fe poly_b(std::size_t k, fe x) const;

    // truncated prefix covering only the nodes a hop-h mark traversed:
    // b_{k,h}(x) = r_{k-1} + r_{k-2} x + ... + r_{d-h+2} x^{k-d+h-3},
    // defined for d-h+2 <= k <= d+1 and zero at the lower end.
    // b_{k,d+1} = b_k.
    fe poly_b_h(std::size_t k, std::size_t h, fe x) const;

private:
    Path path_;
    const FieldCtx* ctx_;
};

// Packet budget l = ceil(log2 d / log2 p) + delta, computed with exact
// integer arithmetic (smallest t with p^t >= d).
std::size_t required_l(std::size_t d, const FieldCtx& ctx, std::uint32_t delta);

struct DecoderParams {
    std::size_t l = 2;
    std::uint32_t delta = 2;
    std::uint32_t epsilon = 1; // window slide per retry
    std::uint32_t retry_cap = 8;

    static DecoderParams make(std::size_t d, const FieldCtx& ctx, std::uint32_t delta = 2) {
        DecoderParams p;
        p.delta = delta;
        p.l = required_l(d, ctx, delta);
        return p;
    }
};

// One decoder input: an x value, the observed y-field, and the hop count.
struct MarkPair {
    fe x = 0;
    fe value = 0;
    std::uint32_t hop = 0;
};

// The S-hat ((d+1) x l) / R-hat (d x l) decision matrices. Entries carry a
// validity mask: in randomized mode a column's hop limits which position
// hypotheses it can speak to, and a legitimate ID of 0 must not be
// confused with padding.
struct CandidateMatrix {
    enum class Kind { S_hat, R_hat };

    Kind kind;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<fe> entries;      // row-major
    std::vector<std::uint8_t> valid;

    fe at(std::size_t k, std::size_t j) const { return entries[(k - 1) * cols + j]; }
    bool is_valid(std::size_t k, std::size_t j) const { return valid[(k - 1) * cols + j] != 0; }
};

// s_kj = (z_j - a_k(x_j)) / x_j^{d-k+1} - x_j * b_{k,h_j}(x_j).
// With hop_limited = false every entry is valid and the full prefix b_k is
// used (deterministic marking: every column saw the whole path); otherwise
// entries with k < d - h_j + 2 are masked. Throws ZeroX.
CandidateMatrix build_S(const KnownPath& kp, const std::vector<MarkPair>& pairs,
                        bool hop_limited = false);

// r_kj = b_{k,h_j+2}(x_j) - (w_j - a_k(x_j)) / x_j^{d-k}; entries with
// k < d - h_j are masked in hop-limited mode.
CandidateMatrix build_R(const KnownPath& kp, const std::vector<MarkPair>& pairs,
                        bool hop_limited = false);

struct DetectionResult {
    ChangeEvent event;
    std::vector<std::size_t> rows_matched;
    std::size_t packets_consumed = 0;
    std::size_t retries = 0;
};

// Pulls the next decoder input; empty when the stream dries up.
using PairSource = std::function<std::optional<MarkPair>()>;

// Addition decoding from l full-path pairs (hop d+1 in
// deterministic mode). Unique all-equal row pins the position and ID;
// ambiguity slides the window by epsilon and retries up to retry_cap.
// Throws AmbiguousChange / StreamExhausted.
DetectionResult detect_addition(const KnownPath& kp, const PairSource& stream,
                                const DecoderParams& params);

// Deletion decoding, mirrored on R-hat. A matched row must
// also name the ID the known path holds at that position.
DetectionResult detect_deletion(const KnownPath& kp, const PairSource& stream,
                                const DecoderParams& params);

// Joint detection over a randomized-mode buffer. Takes the
// l highest-hop marked packets; a hop of d+1 routes straight to the
// addition test; otherwise the S-hat test runs first, then R-hat, then a
// NoChange verdict. Requires at least two valid entries per matched row.
// Throws InsufficientBuffer / AmbiguousChange.
DetectionResult detect_change_randomized(const KnownPath& kp, const std::vector<Packet>& buffer,
                                         const DecoderParams& params, double worst_ratio);

} // namespace atrace
