// Command-line front end: run bundled example designs with their
// testbenches, benchmark the simulation strategies on the Wallace tree
// multiplier, emit Verilog and waveforms, or run the embedded self test.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "hgl/harness.hpp"
#include "hgl/verilog.hpp"

using namespace hgl;

namespace {

std::uint64_t seed_from_env(std::uint64_t cli_seed) {
    if (const char* env = std::getenv("HGLKIT_SEED")) return std::strtoull(env, nullptr, 10);
    return cli_seed;
}

harness::Params parse_params(const std::vector<std::string>& kvs) {
    harness::Params p;
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Error("--param expects key=value, got '" + kv + "'");
        p[kv.substr(0, eq)] = std::strtoll(kv.c_str() + eq + 1, nullptr, 10);
    }
    return p;
}

int cmd_run(const std::string& example, std::uint64_t cycles, std::uint64_t seed,
            const std::string& vcd_path, const std::string& strategy,
            const std::vector<std::string>& params) {
    auto r = harness::run_example(example, cycles, seed,
                                  harness::strategy_from_name(strategy), parse_params(params),
                                  !vcd_path.empty());
    if (!vcd_path.empty()) {
        std::ofstream f(vcd_path, std::ios::binary);
        f << r.vcd;
    }
    std::cout << "example=" << example << " cycles=" << cycles << " seed=" << seed << "\n";
    std::cout << r.ledger_report;
    std::cout << r.stats_text;
    if (!r.completed) {
        std::cout << "testbench did not finish within its slot budget\n";
        return 2;
    }
    return r.failures == 0 ? 0 : 1;
}

int cmd_bench(std::uint32_t width, std::uint64_t n, double x_ratio, bool sweep,
              std::uint64_t seed, const std::vector<std::string>& strategies) {
    std::vector<Strategy> strats;
    for (const std::string& s : strategies) strats.push_back(harness::strategy_from_name(s));
    std::vector<double> ratios;
    if (sweep)
        ratios = {1.0, 0.75, 0.5, 0.25, 0.0};  // ratio of X stimuli, descending
    else
        ratios = {x_ratio};

    int rc = 0;
    for (double r : ratios) {
        for (Strategy st : strats) {
            if (st == Strategy::BinaryOnly && r > 0)
                std::cout << "# warning: binary_only with X stimuli produces unsound waveforms\n";
            auto res = harness::bench_wallace(width, n, r, st, seed);
            std::cout << res.text(st) << "\n";
            if (res.failures) rc = 1;
        }
    }
    return rc;
}

int cmd_emit(const std::string& example, const std::string& out_dir,
             const std::vector<std::string>& params) {
    // elaborate once for Verilog, once more with a short run for a waveform
    Circuit c;
    Builder b(c);
    harness::Params p = parse_params(params);
    ModuleId top = 0;
    {
        auto cfg = std::make_shared<ParamNode>();
        for (const auto& [k, v] : p) cfg->set(k, v);
        b.set_config(cfg);
        if (example == "fulladder")
            top = examples::full_adder(b).m;
        else if (example == "ripple")
            top = examples::ripple_carry(b, 8).m;
        else if (example == "koggestone")
            top = examples::kogge_stone(b, 8).m;
        else if (example == "vending")
            top = examples::vending_machine(b).m;
        else if (example == "wallace")
            top = examples::wallace_multiplier(
                      b, static_cast<std::uint32_t>(p.count("w") ? p["w"] : 8))
                      .m;
        else
            throw Error("unknown example '" + example + "'");
    }
    c.freeze();
    auto units = emit_verilog_units(c, top);
    auto problems = lint_verilog(units);
    for (const auto& msg : problems) std::cerr << "lint: " << msg << "\n";

    std::ofstream sv(out_dir + "/" + example + ".sv", std::ios::binary);
    if (!sv) throw Error("cannot write to " + out_dir);
    sv << emit_verilog(c, top);

    auto r = harness::run_example(example, 32, 1, Strategy::Optimized, p, true);
    std::ofstream vcd(out_dir + "/" + example + ".vcd", std::ios::binary);
    vcd << r.vcd;
    std::cout << "wrote " << out_dir << "/" << example << ".sv and .vcd\n";
    return problems.empty() && r.failures == 0 ? 0 : 1;
}

int cmd_selftest(std::uint64_t seed) {
    int failures = 0;
    auto report = [&](const std::string& what, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) failures += 1;
    };
    for (const std::string& name : harness::example_names()) {
        auto opt = harness::run_example(name, 50, seed, Strategy::Optimized, {}, true);
        report(name + " testbench (optimized)", opt.completed && opt.failures == 0);
        auto full = harness::run_example(name, 50, seed, Strategy::AlwaysFull, {}, true);
        report(name + " testbench (always_full)", full.completed && full.failures == 0);
        report(name + " waveform identity across strategies", opt.vcd == full.vcd);

        Circuit c;
        Builder b(c);
        ModuleId top = 0;
        if (name == "fulladder") top = examples::full_adder(b).m;
        if (name == "ripple") top = examples::ripple_carry(b, 8).m;
        if (name == "koggestone") top = examples::kogge_stone(b, 8).m;
        if (name == "vending") top = examples::vending_machine(b).m;
        if (name == "wallace") top = examples::wallace_multiplier(b, 8).m;
        c.freeze();
        report(name + " emission lint", lint_verilog(emit_verilog_units(c, top)).empty());
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hglkit: build, simulate, verify and emit the bundled designs"};
    app.require_subcommand(1);

    std::string example, vcd_path, out_dir = ".", strategy = "optimized";
    std::uint64_t cycles = 100, seed = 1, n_stimuli = 200;
    std::uint32_t width = 32;
    double x_ratio = 0.0;
    bool sweep = false;
    std::vector<std::string> params, strategies = {"optimized", "always_full", "binary_only"};

    auto* run = app.add_subcommand("run", "simulate an example with its testbench");
    run->add_option("example", example, "one of: fulladder, ripple, koggestone, vending, wallace")
        ->required();
    run->add_option("--cycles", cycles, "testbench iterations");
    run->add_option("--seed", seed, "random seed");
    run->add_option("--vcd", vcd_path, "write a waveform to this path");
    run->add_option("--strategy", strategy, "optimized | always_full | binary_only");
    run->add_option("--param", params, "key=value design parameters (e.g. w=64)");

    auto* bench = app.add_subcommand("bench", "strategy benchmark on the Wallace multiplier");
    bench->add_option("--width", width, "multiplier width");
    bench->add_option("--n-stimuli", n_stimuli, "stimulus vectors per measurement");
    bench->add_option("--x-ratio", x_ratio, "probability a stimulus carries X bits");
    bench->add_flag("--sweep", sweep, "sweep the X ratio over {1,.75,.5,.25,0}");
    bench->add_option("--strategies", strategies, "strategies to measure");
    bench->add_option("--seed", seed, "random seed");

    auto* emit = app.add_subcommand("emit", "write Verilog and a sample waveform");
    emit->add_option("example", example, "example name")->required();
    emit->add_option("--out", out_dir, "output directory");
    emit->add_option("--param", params, "key=value design parameters");

    auto* selftest = app.add_subcommand("selftest", "run the embedded checks");
    selftest->add_option("--seed", seed, "random seed");

    CLI11_PARSE(app, argc, argv);
    try {
        seed = seed_from_env(seed);
        if (run->parsed()) return cmd_run(example, cycles, seed, vcd_path, strategy, params);
        if (bench->parsed()) return cmd_bench(width, n_stimuli, x_ratio, sweep, seed, strategies);
        if (emit->parsed()) return cmd_emit(example, out_dir, params);
        if (selftest->parsed()) return cmd_selftest(seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
