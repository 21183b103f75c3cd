#include "atrace/stats.hpp"

#include <cmath>
#include <limits>

#include "atrace/errors.hpp"

namespace atrace {

double MarkingStats::ratio() const {
    if (f1() <= 0.0) throw DegenerateScheme();
    return (1.0 - f0()) / f1();
}

MarkingStats fractions(const MarkingConfig& config, std::size_t d) {
    std::vector<double> q(d + 1, 0.0); // q[i] applied by node r_i
    for (std::size_t i = 1; i <= d; ++i) {
        if (!config.per_node.empty() && i <= config.per_node.size())
            q[i] = config.per_node[i - 1];
        else
            q[i] = marking_probability(config, static_cast<std::uint32_t>(i));
    }

    MarkingStats stats;
    stats.d = d;
    stats.f.assign(d + 1, 0.0);
    // suffix survival products: f_i = q_i * prod_{j=i+1}^{d} (1 - q_j)
    double survive = 1.0;
    for (std::size_t i = d; i >= 1; --i) {
        stats.f[i] = q[i] * survive;
        survive *= 1.0 - q[i];
    }
    stats.f[0] = survive;
    return stats;
}

double avg_marked_for_full_trace(const MarkingStats& stats, std::size_t d) {
    return static_cast<double>(d) * std::ceil(stats.ratio());
}

WorstCase worst_case_ratio(const MarkingConfig& config, std::size_t d) {
    WorstCase best;
    double best_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t cand : {d - 1, d, d + 1}) {
        if (cand < 1) continue;
        MarkingStats s = fractions(config, cand);
        if (s.f1() <= 0.0) continue;
        const double r = s.ratio();
        if (r > best_ratio) {
            best_ratio = r;
            best = {s.f0(), s.f1(), cand};
        }
    }
    if (best_ratio < 0.0) throw DegenerateScheme();
    return best;
}

double geometric_ratio_approx(double alpha) {
    return 1.0 + alpha / ((1.0 - alpha) * (1.0 - alpha * alpha * alpha));
}

} // namespace atrace
