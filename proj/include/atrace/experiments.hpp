#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atrace/sim.hpp"

namespace atrace {

// Marked-packet budgets for a full trace vs. an incremental update, per
// path length: closed forms only, no simulation.
struct BudgetTableSpec {
    std::size_t d_min = 1;
    std::size_t d_max = 100;
    std::size_t d_step = 1;
    std::uint64_t p = 65537;
    std::uint32_t delta = 2;
    double q = 0.04; // randomized-mode uniform marking probability
};

// Columns: d, det_noninc, det_inc, rand_noninc, rand_inc_ceil_inner,
// rand_inc_product. The last two differ in where the ceiling lands in
// l * (1 - F_0) / F_1; both are emitted so neither rounding is guessed.
std::string budget_table_csv(const BudgetTableSpec& spec);

// Worst-case (1 - F_0') / F_1' per scheme and path length.
struct SchemeTableSpec {
    std::size_t d_min = 1;
    std::size_t d_max = 100;
    std::size_t d_step = 1;
    double q = 0.2;      // schemes 0 and 1
    double alpha = 0.5;  // scheme 2
    std::uint32_t h0 = 5;
};

// Columns: d, scheme0_ratio, scheme1_ratio, scheme2_ratio,
// scheme2_ratio_exact. scheme2_ratio is the closed-form large-d constant
// 1 + alpha/((1-alpha)(1-alpha^3)); the _exact column is the worst-case
// ratio computed directly from the fractions.
std::string scheme_table_csv(const SchemeTableSpec& spec);

struct SimulateResult {
    std::string csv;      // one row per detection, plus per-trial summary fields
    bool all_correct = false;
    std::size_t failures = 0;
};

SimulateResult simulate_csv(const Scenario& base, std::size_t trials, std::uint64_t seed_base);

// Runs the two-destination coded multicast and names the recovered paths.
struct ButterflyRun {
    // destination name -> recovered paths, e.g. "D1" -> {"SCD1", ...}
    std::map<std::string, std::vector<std::string>> paths_by_dest;
};

ButterflyRun run_butterfly(std::uint64_t p = 65537, std::size_t n_slots = 20,
                           std::uint64_t seed = 1);

} // namespace atrace
