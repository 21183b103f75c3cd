#include "atrace/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "atrace/incremental.hpp"
#include "atrace/netcode.hpp"
#include "atrace/stats.hpp"

namespace atrace {

namespace {

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string kind_name(ChangeEvent::Kind kind) {
    switch (kind) {
    case ChangeEvent::Kind::Added: return "add";
    case ChangeEvent::Kind::Deleted: return "delete";
    case ChangeEvent::Kind::NoChange: return "none";
    }
    return "none";
}

} // namespace

std::string budget_table_csv(const BudgetTableSpec& spec) {
    FieldCtx ctx(spec.p);
    const MarkingConfig uniform = MarkingConfig::uniform(spec.q);

    std::ostringstream out;
    out << "# budget table: p=" << spec.p << " delta=" << spec.delta << " q=" << fmt(spec.q)
        << "\n";
    out << "d,det_noninc,det_inc,rand_noninc,rand_inc_ceil_inner,rand_inc_product\n";
    for (std::size_t d = spec.d_min; d <= spec.d_max; d += spec.d_step) {
        const std::size_t l = required_l(d, ctx, spec.delta);
        // (1 - f_0) / f_1 in its cancellation-free geometric-sum form
        // sum_{i=0}^{d-1} (1 - q)^{-i}
        double plain = 0.0;
        for (std::size_t i = 0; i < d; ++i) plain += std::pow(1.0 - spec.q, -static_cast<double>(i));
        const WorstCase worst = worst_case_ratio(uniform, d);
        const auto rand_noninc =
            static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(std::ceil(plain));
        const auto ceil_inner =
            static_cast<std::uint64_t>(l) * static_cast<std::uint64_t>(std::ceil(worst.ratio()));
        out << d << ',' << d << ',' << l << ',' << rand_noninc << ',' << ceil_inner << ','
            << fmt(static_cast<double>(l) * worst.ratio()) << "\n";
    }
    return out.str();
}

std::string scheme_table_csv(const SchemeTableSpec& spec) {
    const MarkingConfig s0 = MarkingConfig::uniform(spec.q);
    const MarkingConfig s1 = MarkingConfig::cutoff(spec.q, spec.h0);
    const MarkingConfig s2 = MarkingConfig::geometric(spec.alpha, spec.h0);

    std::ostringstream out;
    out << "# scheme table: q=" << fmt(spec.q) << " alpha=" << fmt(spec.alpha)
        << " h0=" << spec.h0 << "\n";
    out << "d,scheme0_ratio,scheme1_ratio,scheme2_ratio,scheme2_ratio_exact\n";
    const double s2_const = geometric_ratio_approx(spec.alpha);
    for (std::size_t d = spec.d_min; d <= spec.d_max; d += spec.d_step) {
        out << d << ',' << fmt(worst_case_ratio(s0, d).ratio()) << ','
            << fmt(worst_case_ratio(s1, d).ratio()) << ',' << fmt(s2_const) << ','
            << fmt(worst_case_ratio(s2, d).ratio()) << "\n";
    }
    return out.str();
}

SimulateResult simulate_csv(const Scenario& base, std::size_t trials, std::uint64_t seed_base) {
    SimulateResult result;
    std::ostringstream out;
    out << "# simulate: p=" << base.p << " d=" << base.initial_path.length() << " mode="
        << (base.mode == SimMode::Deterministic ? "deterministic" : "randomized")
        << " trials=" << trials << " seed=" << seed_base << "\n";
    out << "trial,seed,initial_ok,initial_packets,event,kind_truth,kind_detected,"
           "position_detected,id_detected,packets,marked,correct,error\n";

    result.all_correct = true;
    for (std::size_t t = 0; t < trials; ++t) {
        Scenario sc = base;
        sc.seed = seed_base + t;
        TrialReport report = run_trial(sc);
        if (!report.initial_trace_ok) {
            ++result.failures;
            result.all_correct = false;
        }
        if (report.detections.empty()) {
            out << t << ',' << sc.seed << ',' << report.initial_trace_ok << ','
                << report.initial_trace_packets << ",,,,,,,,," << "\n";
            continue;
        }
        for (std::size_t i = 0; i < report.detections.size(); ++i) {
            const Detection& det = report.detections[i];
            if (!det.correct) {
                ++result.failures;
                result.all_correct = false;
            }
            out << t << ',' << sc.seed << ',' << report.initial_trace_ok << ','
                << report.initial_trace_packets << ',' << i << ','
                << kind_name(det.ground_truth.kind) << ',' << kind_name(det.detected.kind) << ','
                << det.detected.position << ',' << det.detected.id << ',' << det.packets_consumed
                << ',' << det.marked_packets_consumed << ',' << det.correct << ',' << det.error
                << "\n";
        }
    }
    result.csv = out.str();
    return result;
}

ButterflyRun run_butterfly(std::uint64_t p, std::size_t n_slots, std::uint64_t seed) {
    FieldCtx ctx(p);
    const NamedDag net = butterfly(p);
    auto observed = run_coded(net.dag, net.dag.sources.front(), n_slots, ctx, seed);

    ButterflyRun run;
    for (const auto& [dest, observations] : observed) {
        std::vector<std::string> names;
        for (const Path& path : trace_subgraph(observations, ctx)) {
            std::string label;
            for (fe id : path.nodes) label += net.name_of(id);
            names.push_back(std::move(label));
        }
        run.paths_by_dest[net.name_of(dest)] = std::move(names);
    }
    return run;
}

} // namespace atrace
