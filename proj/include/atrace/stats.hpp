#pragma once

#include <cstddef>
#include <vector>

#include "atrace/marking.hpp"

namespace atrace {

// Closed-form marking fractions for one path-length hypothesis d:
// f[i] is the fraction of received packets last-marked by node r_i
// (f[0] = unmarked). The vector sums to 1.
struct MarkingStats {
    std::vector<double> f; // f_0 .. f_d
    std::size_t d = 0;

    double f0() const { return f[0]; }
    double f1() const { return d >= 1 ? f[1] : 0.0; }

    // (1 - f_0) / f_1, the expected marked packets per source-marked packet
    double ratio() const;
};

// f_i = q_i * prod_{j>i} (1 - q_j), with q_i the probability node r_i
// applies: q(h = i), the hop a source-initiated mark presents at r_i.
MarkingStats fractions(const MarkingConfig& config, std::size_t d);

// d * ceil((1 - f_0) / f_1) marked packets on average for a full trace.
// Throws DegenerateScheme when f_1 = 0.
double avg_marked_for_full_trace(const MarkingStats& stats, std::size_t d);

// The (f_0', f_1') pair among path-length hypotheses d-1, d, d+1 that
// maximizes (1 - f_0') / f_1'.
struct WorstCase {
    double F0 = 0.0;
    double F1 = 0.0;
    std::size_t d_arg = 0; // the maximizing hypothesis

    double ratio() const { return (1.0 - F0) / F1; }
};

WorstCase worst_case_ratio(const MarkingConfig& config, std::size_t d);

// The geometric scheme's large-d ratio in its small-alpha closed form,
// 1 + alpha / ((1 - alpha)(1 - alpha^3)); 15/7 at alpha = 1/2.
double geometric_ratio_approx(double alpha);

} // namespace atrace
