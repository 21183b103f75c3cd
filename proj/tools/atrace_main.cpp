#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "atrace/errors.hpp"
#include "atrace/experiments.hpp"
#include "atrace/trace_io.hpp"

namespace {

// exit codes: 0 ok, 1 detection/verification failure, 2 usage or config error
constexpr int kOk = 0;
constexpr int kDetectionFailure = 1;
constexpr int kUsageError = 2;

int write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return kUsageError;
    }
    out << text;
    if (!out) {
        std::cerr << "write failed: " << out_path << "\n";
        return kUsageError;
    }
    return kOk;
}

int cmd_budgets(const atrace::BudgetTableSpec& spec, const std::string& out_path) {
    return write_output(atrace::budget_table_csv(spec), out_path);
}

int cmd_schemes(const atrace::SchemeTableSpec& spec, const std::string& out_path) {
    return write_output(atrace::scheme_table_csv(spec), out_path);
}

int cmd_simulate(const std::string& scenario_path, std::size_t trials,
                 std::optional<std::uint64_t> seed, const std::string& out_path,
                 const std::string& mode_override) {
    atrace::Scenario sc = atrace::load_scenario(scenario_path);
    if (mode_override == "deterministic") sc.mode = atrace::SimMode::Deterministic;
    else if (mode_override == "randomized") sc.mode = atrace::SimMode::Randomized;
    else if (!mode_override.empty())
        throw atrace::FormatError("unknown mode \"" + mode_override + "\"");

    atrace::SimulateResult result = atrace::simulate_csv(sc, trials, seed.value_or(sc.seed));
    const int rc = write_output(result.csv, out_path);
    if (rc != kOk) return rc;
    if (!result.all_correct) {
        std::cerr << result.failures << " detection failure(s)\n";
        return kDetectionFailure;
    }
    return kOk;
}

int cmd_butterfly(std::uint64_t p, std::size_t n_seeds, std::uint64_t seed_base,
                  const std::string& out_path) {
    const std::set<std::string> want_d1{"SCD1", "SEABD1", "SCABD1"};
    const std::set<std::string> want_d2{"SED2", "SCABD2", "SEABD2"};

    std::string text;
    bool ok = true;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        atrace::ButterflyRun run = atrace::run_butterfly(p, 20, seed_base + i);
        text += "seed " + std::to_string(seed_base + i) + "\n";
        for (const auto& [dest, paths] : run.paths_by_dest) {
            text += "  " + dest + ":";
            for (const std::string& path : paths) text += " " + path;
            text += "\n";
            const std::set<std::string> got(paths.begin(), paths.end());
            const auto& want = dest == "D1" ? want_d1 : want_d2;
            if (got != want) {
                ok = false;
                text += "  MISMATCH at " + dest + "\n";
            }
        }
    }
    const int rc = write_output(text, out_path);
    if (rc != kOk) return rc;
    return ok ? kOk : kDetectionFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"algebraic traceback experiments"};
    app.require_subcommand(1);

    atrace::BudgetTableSpec budget_spec;
    atrace::SchemeTableSpec scheme_spec;
    std::string out_path;
    std::string scenario_path;
    std::string mode_override;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::uint64_t butterfly_p = 65537;

    auto* budgets = app.add_subcommand(
        "budgets", "marked-packet budget table per path length (full vs incremental trace)");
    budgets->alias("fig3");
    budgets->add_option("--p", budget_spec.p, "field modulus (prime)");
    budgets->add_option("--delta", budget_spec.delta, "extra packets over the information bound");
    budgets->add_option("--q", budget_spec.q, "uniform marking probability");
    budgets->add_option("--d-min", budget_spec.d_min);
    budgets->add_option("--d-max", budget_spec.d_max);
    budgets->add_option("--d-step", budget_spec.d_step);
    budgets->add_option("--out", out_path, "output file (default stdout)");

    auto* schemes = app.add_subcommand(
        "schemes", "worst-case marked-packet ratio per marking scheme and path length");
    schemes->alias("fig4");
    schemes->add_option("--q", scheme_spec.q, "marking probability (schemes 0 and 1)");
    schemes->add_option("--alpha", scheme_spec.alpha, "geometric base (scheme 2)");
    schemes->add_option("--h0", scheme_spec.h0, "hop cutoff");
    schemes->add_option("--d-min", scheme_spec.d_min);
    schemes->add_option("--d-max", scheme_spec.d_max);
    schemes->add_option("--d-step", scheme_spec.d_step);
    schemes->add_option("--out", out_path, "output file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "run a scenario file across seeded trials");
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--trials", trials, "number of seeded trials");
    simulate->add_option("--seed", seed, "base seed (trial i uses seed + i)");
    simulate->add_option("--mode", mode_override, "override: deterministic | randomized");
    simulate->add_option("--out", out_path, "output file (default stdout)");

    auto* bfly = app.add_subcommand("butterfly", "coded-multicast traceback demo");
    bfly->add_option("--p", butterfly_p, "field modulus (prime)");
    bfly->add_option("--trials", trials, "number of seeds to run");
    bfly->add_option("--seed", seed, "base seed");
    bfly->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageError;
    }

    try {
        if (budgets->parsed()) return cmd_budgets(budget_spec, out_path);
        if (schemes->parsed()) return cmd_schemes(scheme_spec, out_path);
        if (simulate->parsed())
            return cmd_simulate(scenario_path, trials,
                                simulate->count("--seed") ? std::optional(seed) : std::nullopt,
                                out_path, mode_override);
        if (bfly->parsed()) return cmd_butterfly(butterfly_p, trials == 1 ? 10 : trials, seed, out_path);
    } catch (const atrace::TracebackError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}
