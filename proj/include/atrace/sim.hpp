#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atrace/incremental.hpp"
#include "atrace/marking.hpp"
#include "atrace/path.hpp"
#include "atrace/stats.hpp"

namespace atrace {

struct TimedEvent {
    ChangeEvent event;
    std::size_t at_packet = 0; // applied before emitting this packet index (0-based)
};

enum class SimMode { Deterministic, Randomized };

struct Scenario {
    std::uint64_t p = 65537;
    Path initial_path;
    MarkingConfig config = MarkingConfig::deterministic();
    std::vector<TimedEvent> events; // at_packet strictly increasing
    std::size_t n_packets = 0;      // 0: run until all detections settle
    std::uint64_t seed = 1;
    SimMode mode = SimMode::Deterministic;
    std::uint32_t delta = 2;
};

struct Detection {
    ChangeEvent detected;
    ChangeEvent ground_truth;
    std::size_t packets_consumed = 0;        // total packets in the epoch
    std::size_t marked_packets_consumed = 0; // marked packets in the epoch
    bool correct = false;
    std::string error; // decoder error text when the epoch failed
};

struct TrialReport {
    bool initial_trace_ok = false;
    std::size_t initial_trace_packets = 0;
    std::vector<Detection> detections;

    bool all_correct() const;
};

// Two detections are equivalent when they transform the pre-change path
// into the same post-change path (adjacent duplicate IDs make several
// positions literally indistinguishable).
bool detection_matches(const Path& before, const ChangeEvent& detected,
                       const ChangeEvent& truth);

// Phase 1: initial full traceback, checked against the scenario path.
// Phase 2: per event, mutate the path at its packet index and run the
// matching incremental decoder. Deterministic for a fixed seed; decoder
// errors are recorded in the report, not thrown.
TrialReport run_trial(const Scenario& scenario);

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

struct EnsembleStats {
    std::size_t trials = 0;
    std::size_t detections = 0;
    std::size_t failures = 0; // incorrect or errored detections
    MetricSummary packets;
    MetricSummary marked_packets;

    double error_rate() const {
        return detections ? static_cast<double>(failures) / static_cast<double>(detections) : 0.0;
    }
};

// Runs n_trials copies of the scenario with per-trial seeds
// seed_base + index.
EnsembleStats run_ensemble(const Scenario& scenario_template, std::size_t n_trials,
                           std::uint64_t seed_base);

} // namespace atrace
