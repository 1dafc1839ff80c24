#pragma once

// Shared run/bench machinery for the CLI and the acceptance suite: named
// example designs with their bundled testbench tasks, the Wallace-tree
// benchmark with configurable X-stimulus ratio, and waveform captures for
// strategy comparisons.

#include <map>

#include "hgl/examples.hpp"
#include "hgl/session.hpp"

namespace hgl::harness {

using Params = std::map<std::string, std::int64_t>;

struct RunResult {
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    bool completed = false;  // every testbench task ran to the end
    std::string ledger_report;
    std::string vcd;         // empty unless requested
    std::string stats_text;
    std::string graph_dump;
};

std::vector<std::string> example_names();

// Builds the named example, runs its testbench for `cycles` iterations and
// returns the collected results. Throws on an unknown name.
RunResult run_example(const std::string& name, std::uint64_t cycles, std::uint64_t seed,
                      Strategy strategy, const Params& params, bool record_vcd);

struct BenchResult {
    std::uint32_t width = 0;
    std::uint64_t stimuli = 0;
    std::uint64_t gates = 0;
    double x_ratio = 0.0;
    double wall_seconds = 0.0;
    double cps = 0.0;           // simulated stimulus cycles per wall second
    double per_gate_ns = 0.0;   // wall time per gate execution
    std::uint64_t execs_fast = 0;
    std::uint64_t execs_full = 0;
    std::uint64_t events_applied = 0;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;

    // key=value block; timing-dependent keys carry a "time_" prefix so
    // deterministic output can be filtered.
    std::string text(Strategy strategy) const;
};

// Drives the Wallace multiplier with `n` random stimuli; each vector is
// X-bearing with probability `x_ratio` (every bit X with probability 1/2,
// at least one X forced). Binary stimuli are checked against the integer
// product.
BenchResult bench_wallace(std::uint32_t width, std::uint64_t n, double x_ratio,
                          Strategy strategy, std::uint64_t seed, std::string* vcd_out = nullptr);

// Waveform captures for strategy-identity checks.
std::string vcd_of_vending(std::uint64_t seed, std::uint64_t cycles, Strategy strategy);
std::string vcd_of_dag(std::uint64_t seed, int gates, std::uint64_t stimuli,
                       Strategy strategy, bool x_stimuli);

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

}  // namespace hgl::harness
