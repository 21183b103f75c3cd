#include "atrace/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_set>
#include <utility>

#include "atrace/errors.hpp"
#include "atrace/reconstruct.hpp"

namespace atrace {

bool TrialReport::all_correct() const {
    if (!initial_trace_ok) return false;
    return std::all_of(detections.begin(), detections.end(),
                       [](const Detection& d) { return d.correct; });
}

bool detection_matches(const Path& before, const ChangeEvent& detected,
                       const ChangeEvent& truth) {
    try {
        return apply_change(before, detected) == apply_change(before, truth);
    } catch (const TracebackError&) {
        return false;
    }
}

namespace {

constexpr std::size_t kDefaultBudget = 10'000'000;

struct Emitter {
    const Scenario& sc;
    FieldCtx& ctx;
    Rng& rng;
    MarkerPool& pool;
    Path current;
    std::size_t emitted = 0;

    Packet next() {
        ++emitted;
        if (sc.mode == SimMode::Deterministic) {
            const double q1 =
                sc.config.scheme == MarkingConfig::Scheme::Deterministic ? sc.config.q : 1.0;
            return send_deterministic(current, q1, ctx, rng, pool);
        }
        return send_randomized(current, sc.config, ctx, rng, pool);
    }
};

Detection run_epoch_deterministic(Emitter& em, const KnownPath& kp, const ChangeEvent& truth,
                                  const DecoderParams& params, std::size_t budget) {
    Detection det;
    det.ground_truth = truth;
    const std::size_t d = kp.d();

    if (truth.kind == ChangeEvent::Kind::NoChange) {
        // the hop trigger never fires; nothing to decode
        det.detected = ChangeEvent::none();
        det.correct = true;
        return det;
    }

    std::size_t packets = 0;
    std::size_t marked = 0;
    std::optional<std::uint32_t> trigger_hop;

    PairSource source = [&]() -> std::optional<MarkPair> {
        while (packets < budget) {
            Packet pkt = em.next();
            ++packets;
            if (!pkt.marked()) continue;
            if (pkt.hop == d) continue; // in-flight pre-change packet
            if (!trigger_hop) trigger_hop = pkt.hop;
            if (pkt.hop != *trigger_hop) continue;
            ++marked;
            return MarkPair{pkt.x, pkt.y, pkt.hop};
        }
        return std::nullopt;
    };

    try {
        // peek the first anomalous packet to route the decoder, then hand
        // it back as the first pair
        auto first = source();
        if (!first) throw StreamExhausted();
        bool handed_back = false;
        PairSource replay = [&]() -> std::optional<MarkPair> {
            if (!handed_back) {
                handed_back = true;
                return first;
            }
            return source();
        };

        DetectionResult result;
        if (*trigger_hop == d + 1)
            result = detect_addition(kp, replay, params);
        else if (*trigger_hop == d - 1)
            result = detect_deletion(kp, replay, params);
        else
            throw InconsistentEvidence("marked packet with hop " + std::to_string(*trigger_hop) +
                                       " on a path of length " + std::to_string(d));
        det.detected = result.event;
        det.correct = detection_matches(kp.path(), det.detected, truth);
    } catch (const TracebackError& err) {
        det.error = err.what();
        det.correct = false;
    }
    det.packets_consumed = packets;
    det.marked_packets_consumed = marked;
    return det;
}

struct RandomizedDecoder {
    KnownPath kp;
    DecoderParams params;
    double worst_ratio;
    std::size_t window_size;
    std::deque<Packet> window;

    RandomizedDecoder(KnownPath known, const DecoderParams& p, double ratio)
        : kp(std::move(known)), params(p), worst_ratio(ratio),
          window_size(p.l * static_cast<std::size_t>(std::ceil(ratio))) {}

    void push(const Packet& pkt) {
        if (!pkt.marked()) return;
        window.push_back(pkt);
        if (window.size() > window_size) window.pop_front();
    }

    bool full() const { return window.size() >= window_size; }

    std::optional<ChangeEvent> probe() const {
        if (!full()) return std::nullopt;
        std::vector<Packet> snapshot(window.begin(), window.end());
        try {
            return detect_change_randomized(kp, snapshot, params, worst_ratio).event;
        } catch (const TracebackError&) {
            return std::nullopt;
        }
    }

};

// Probes fire on a hop anomaly (a hop count no current-path node could
// have produced) or on a periodic clock with interval = window size. A
// periodic probe's NoChange verdict is final only when the whole epoch was
// anomaly-free: by then the window has fully turned over since the last
// check, and a change the window cannot show (an addition right at the
// source reaches the decoder only through rare full-length marks) would
// still have raised the anomaly flag on some hop field.
Detection run_epoch_randomized(Emitter& em, RandomizedDecoder& dec, const ChangeEvent& truth,
                               std::size_t budget) {
    Detection det;
    det.ground_truth = truth;

    const std::size_t d = dec.kp.d();
    std::size_t packets = 0;
    std::size_t marked = 0;
    bool anomaly_seen = false;
    // unmarked packets report the literal node count they traversed, so
    // the freshest one is an exact reading of the current path length
    std::size_t plain_length = d;

    while (packets < budget) {
        Packet pkt = em.next();
        ++packets;
        if (pkt.hop > d) anomaly_seen = true;
        if (!pkt.marked()) {
            plain_length = pkt.hop;
            continue;
        }
        ++marked;
        dec.push(pkt);

        const bool periodic = marked % dec.window_size == 0;
        const bool anomaly = pkt.hop > d;
        if (!periodic && !anomaly) continue;

        auto verdict = dec.probe();
        if (!verdict) continue; // window not full or evidence ambiguous
        // a deletion verdict contradicting the observed path length is a
        // stale-window artifact: shorter-than-d marks also occur while
        // nothing changed
        if (verdict->kind == ChangeEvent::Kind::Deleted && plain_length >= d) continue;
        const bool settled = !anomaly_seen && plain_length == d;
        if (verdict->kind != ChangeEvent::Kind::NoChange || (periodic && settled)) {
            det.detected = *verdict;
            break;
        }
    }

    det.packets_consumed = packets;
    det.marked_packets_consumed = marked;
    det.correct = detection_matches(dec.kp.path(), det.detected, truth);
    return det;
}

} // namespace

TrialReport run_trial(const Scenario& scenario) {
    FieldCtx ctx(scenario.p);
    Rng rng(scenario.seed);
    MarkerPool pool(ctx, scenario.seed ^ 0xa5a5a5a55a5a5a5aull);
    Emitter em{scenario, ctx, rng, pool, scenario.initial_path};

    TrialReport report;
    const std::size_t d0 = scenario.initial_path.length();
    const std::size_t budget = scenario.n_packets ? scenario.n_packets : kDefaultBudget;

    // phase 1: initial full traceback
    std::vector<Packet> capture;
    std::unordered_set<fe> full_xs;
    while (em.emitted < budget && full_xs.size() < d0) {
        Packet pkt = em.next();
        if (!pkt.marked()) continue;
        capture.push_back(pkt);
        if (pkt.hop == d0) full_xs.insert(pkt.x);
    }
    report.initial_trace_packets = em.emitted;
    try {
        Path traced = scenario.mode == SimMode::Deterministic
                          ? interpolate_path(segregate_by_hopcount(capture).at(
                                                 static_cast<std::uint32_t>(d0)),
                                             d0, ctx)
                          : reconstruct_randomized(capture, ctx);
        report.initial_trace_ok = traced == scenario.initial_path;
    } catch (const TracebackError&) {
        report.initial_trace_ok = false;
    }

    // phase 2: one detection epoch per event
    std::optional<RandomizedDecoder> dec;
    if (scenario.mode == SimMode::Randomized) {
        DecoderParams params = DecoderParams::make(d0, ctx, scenario.delta);
        const double ratio = worst_case_ratio(scenario.config, d0).ratio();
        dec.emplace(KnownPath(scenario.initial_path, ctx), params, ratio);
        for (const Packet& pkt : capture) dec->push(pkt);
    }

    for (std::size_t i = 0; i < scenario.events.size(); ++i) {
        const TimedEvent& timed = scenario.events[i];
        // idle traffic up to the event's packet index
        while (em.emitted < timed.at_packet && em.emitted < budget) {
            Packet pkt = em.next();
            if (dec) dec->push(pkt);
        }

        const Path before = em.current;
        em.current = apply_change(em.current, timed.event);
        ChangeEvent truth = timed.event;
        if (truth.kind == ChangeEvent::Kind::Deleted) truth.id = before.at(truth.position);

        const std::size_t epoch_budget =
            (i + 1 < scenario.events.size() ? scenario.events[i + 1].at_packet : budget);
        const std::size_t remaining = epoch_budget > em.emitted ? epoch_budget - em.emitted : 0;

        if (scenario.mode == SimMode::Deterministic) {
            KnownPath kp(before, ctx);
            DecoderParams params = DecoderParams::make(before.length(), ctx, scenario.delta);
            report.detections.push_back(
                run_epoch_deterministic(em, kp, truth, params, remaining));
        } else {
            report.detections.push_back(run_epoch_randomized(em, *dec, truth, remaining));
            // after a confirmed change the destination re-learns the path;
            // model that by rebasing the decoder on the new ground truth
            if (report.detections.back().correct &&
                truth.kind != ChangeEvent::Kind::NoChange) {
                DecoderParams params =
                    DecoderParams::make(em.current.length(), ctx, scenario.delta);
                const double ratio = worst_case_ratio(scenario.config, em.current.length()).ratio();
                dec.emplace(KnownPath(em.current, ctx), params, ratio);
            }
        }
    }
    return report;
}

EnsembleStats run_ensemble(const Scenario& scenario_template, std::size_t n_trials,
                           std::uint64_t seed_base) {
    EnsembleStats stats;
    stats.trials = n_trials;
    double sum_p = 0, sum_p2 = 0, sum_m = 0, sum_m2 = 0;
    double min_p = std::numeric_limits<double>::infinity(), max_p = 0;
    double min_m = std::numeric_limits<double>::infinity(), max_m = 0;

    for (std::size_t i = 0; i < n_trials; ++i) {
        Scenario sc = scenario_template;
        sc.seed = seed_base + i;
        TrialReport report = run_trial(sc);
        if (!report.initial_trace_ok) ++stats.failures;
        for (const Detection& det : report.detections) {
            ++stats.detections;
            if (!det.correct) ++stats.failures;
            const double p = static_cast<double>(det.packets_consumed);
            const double m = static_cast<double>(det.marked_packets_consumed);
            sum_p += p;
            sum_p2 += p * p;
            sum_m += m;
            sum_m2 += m * m;
            min_p = std::min(min_p, p);
            max_p = std::max(max_p, p);
            min_m = std::min(min_m, m);
            max_m = std::max(max_m, m);
        }
    }
    auto finish = [](double sum, double sum2, double mn, double mx, std::size_t n) {
        MetricSummary s;
        s.n = n;
        if (n == 0) return s;
        s.mean = sum / static_cast<double>(n);
        const double var = sum2 / static_cast<double>(n) - s.mean * s.mean;
        s.stddev = var > 0 ? std::sqrt(var) : 0.0;
        s.min = mn;
        s.max = mx;
        return s;
    };
    stats.packets = finish(sum_p, sum_p2, min_p, max_p, stats.detections);
    stats.marked_packets = finish(sum_m, sum_m2, min_m, max_m, stats.detections);
    return stats;
}

} // namespace atrace
