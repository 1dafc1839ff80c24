#include "hgl/harness.hpp"

#include <chrono>
#include <sstream>

namespace hgl::harness {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Optimized: return "optimized";
        case Strategy::AlwaysFull: return "always_full";
        case Strategy::BinaryOnly: return "binary_only";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "optimized") return Strategy::Optimized;
    if (name == "always_full") return Strategy::AlwaysFull;
    if (name == "binary_only") return Strategy::BinaryOnly;
    throw Error("unknown strategy '" + name + "' (optimized, always_full, binary_only)");
}

std::vector<std::string> example_names() {
    return {"fulladder", "ripple", "koggestone", "vending", "wallace"};
}

namespace {

std::int64_t param_or(const Params& p, const std::string& key, std::int64_t fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

Logic random_value(std::mt19937_64& rng, std::uint32_t w) {
    std::vector<std::uint64_t> v(words::count(w));
    for (auto& word : v) word = rng();
    return Logic::from_planes(w, std::move(v), {});
}

// X-bearing stimulus: every bit unknown with probability 1/2, at least one.
Logic random_x_value(std::mt19937_64& rng, std::uint32_t w) {
    while (true) {
        std::vector<std::uint64_t> v(words::count(w)), x(words::count(w));
        for (auto& word : v) word = rng();
        for (auto& word : x) word = rng();
        Logic l = Logic::from_planes(w, std::move(v), std::move(x));
        if (l.has_x()) return l;
    }
}

SimTask adder_tb(TaskRuntime& rt, examples::AdderHandles dut, SignalId clk,
                 std::uint64_t cycles) {
    for (std::uint64_t i = 0; i < cycles; ++i) {
        Logic x = rt.setr(dut.x.id());
        Logic y = rt.setr(dut.y.id());
        co_await EdgeWait{clk, -1, 1};
        std::uint32_t w = dut.width;
        Logic expect(w + 1);
        {
            std::vector<std::uint64_t> sum(words::count(w + 1), 0);
            words::add(x.v_data(), x.word_count(), y.v_data(), y.word_count(), sum.data(),
                       w + 1);
            expect = Logic::from_planes(w + 1, std::move(sum), {});
        }
        rt.assert_eq(rt.getv(dut.out.id()), expect, "sum of " + x.str() + " + " + y.str());
    }
}

SimTask fulladder_tb(TaskRuntime& rt, examples::FullAdderHandles fa, SignalId clk,
                     std::uint64_t cycles) {
    for (std::uint64_t i = 0; i < cycles; ++i) {
        unsigned bits = static_cast<unsigned>(i % 8);
        rt.setv(fa.a.id(), Logic::from_uint(bits & 1, 1));
        rt.setv(fa.b.id(), Logic::from_uint((bits >> 1) & 1, 1));
        rt.setv(fa.cin.id(), Logic::from_uint((bits >> 2) & 1, 1));
        co_await EdgeWait{clk, -1, 1};
        unsigned total = (bits & 1) + ((bits >> 1) & 1) + ((bits >> 2) & 1);
        rt.assert_eq(rt.getv(fa.s.id()), Logic::from_uint(total & 1, 1), "sum bit");
        rt.assert_eq(rt.getv(fa.cout.id()), Logic::from_uint(total >> 1, 1), "carry bit");
    }
}

SimTask vending_tb(TaskRuntime& rt, examples::VendingHandles v, SignalId clk,
                   std::uint64_t cycles) {
    int model = 0;
    co_await EdgeWait{clk, -1, 1};  // reset cycle
    for (std::uint64_t i = 0; i < cycles; ++i) {
        rt.assert_eq(rt.getv(v.valid.id()),
                     Logic::from_uint(examples::vending_valid(model), 1), "valid");
        rt.assert_eq(rt.getv(v.state.id()), v.states->code(static_cast<std::size_t>(model)),
                     "state");
        bool nickel = rt.rng()() & 1;
        bool dime = rt.rng()() & 1;
        rt.setv(v.nickel.id(), Logic::from_uint(nickel, 1));
        rt.setv(v.dime.id(), Logic::from_uint(dime, 1));
        model = examples::vending_next_state(model, nickel, dime);
        co_await EdgeWait{clk, -1, 1};
    }
}

SimTask wallace_tb(TaskRuntime& rt, examples::WallaceHandles w, SignalId clk,
                   std::uint64_t cycles, double x_ratio) {
    std::uint32_t width = w.width;
    for (std::uint64_t i = 0; i < cycles; ++i) {
        bool with_x = x_ratio > 0.0 &&
                      std::uniform_real_distribution<double>(0.0, 1.0)(rt.rng()) < x_ratio;
        Logic a = with_x ? random_x_value(rt.rng(), width) : random_value(rt.rng(), width);
        Logic b = with_x ? random_x_value(rt.rng(), width) : random_value(rt.rng(), width);
        rt.setv(w.a.id(), a);
        rt.setv(w.b.id(), b);
        co_await EdgeWait{clk, -1, 1};
        if (!a.has_x() && !b.has_x()) {
            std::vector<std::uint64_t> prod(words::count(2 * width), 0);
            words::mul(a.v_data(), a.word_count(), b.v_data(), b.word_count(), prod.data(),
                       2 * width);
            rt.assert_eq(rt.getv(w.product.id()),
                         Logic::from_planes(2 * width, std::move(prod), {}),
                         "product of " + a.str() + " * " + b.str());
        }
    }
}

struct Built {
    std::vector<TaskHandle> tbs;
    ModuleId top;
};

Built build_example(Session& sess, const std::string& name, std::uint64_t cycles,
                    const Params& params) {
    Builder& b = sess.builder();
    Built out;
    if (name == "fulladder") {
        auto fa = examples::full_adder(b);
        SignalId clk = b.domain().clock.id();
        out.top = fa.m;
        sess.track(fa.m);
        sess.elaborate();
        out.tbs.push_back(sess.spawn(fulladder_tb(sess.tasks(), fa, clk, cycles)));
    } else if (name == "ripple" || name == "koggestone") {
        auto w = static_cast<std::uint32_t>(param_or(params, "w", name == "ripple" ? 32 : 64));
        auto dut = name == "ripple" ? examples::ripple_carry(b, w) : examples::kogge_stone(b, w);
        SignalId clk = b.domain().clock.id();
        out.top = dut.m;
        sess.track(dut.m);
        sess.elaborate();
        out.tbs.push_back(sess.spawn(adder_tb(sess.tasks(), dut, clk, cycles)));
    } else if (name == "vending") {
        auto v = examples::vending_machine(b);
        SignalId clk = b.domain().clock.id();
        out.top = v.m;
        sess.track(v.m);
        sess.elaborate();
        out.tbs.push_back(sess.spawn(vending_tb(sess.tasks(), v, clk, cycles)));
    } else if (name == "wallace") {
        auto w = static_cast<std::uint32_t>(param_or(params, "w", 32));
        auto dut = examples::wallace_multiplier(b, w);
        SignalId clk = b.domain().clock.id();
        out.top = dut.m;
        sess.track(dut.m);
        sess.elaborate();
        double xr = static_cast<double>(param_or(params, "x_permille", 0)) / 1000.0;
        out.tbs.push_back(sess.spawn(wallace_tb(sess.tasks(), dut, clk, cycles, xr)));
    } else {
        throw Error("unknown example '" + name + "'");
    }
    return out;
}

std::uint64_t period_for(const std::string& name, const Params& params) {
    if (name == "ripple") {
        auto w = static_cast<std::uint32_t>(param_or(params, "w", 32));
        return std::max<std::uint64_t>(64, 4 * w + 32);
    }
    if (name == "koggestone") return 128;
    if (name == "wallace") return 128;
    return 64;
}

}  // namespace

RunResult run_example(const std::string& name, std::uint64_t cycles, std::uint64_t seed,
                      Strategy strategy, const Params& params, bool record_vcd) {
    SessionOptions opt;
    opt.seed = seed;
    opt.strategy = strategy;
    opt.clock_period = period_for(name, params);
    Session sess(opt);
    if (!params.empty()) {
        auto cfg = std::make_shared<ParamNode>();
        for (const auto& [k, v] : params) cfg->set(k, v);
        sess.builder().set_config(cfg);
    }
    Built built = build_example(sess, name, cycles, params);
    RunResult r;
    r.completed = sess.join_run(built.tbs, (cycles + 16) * opt.clock_period);
    r.checks = sess.ledger().passes + sess.ledger().failures;
    r.failures = sess.ledger().failures;
    r.ledger_report = sess.ledger().report();
    r.stats_text = sess.sim().stats().text();
    if (record_vcd) r.vcd = sess.vcd_text();
    r.graph_dump = sess.circuit().dump();
    return r;
}

std::string BenchResult::text(Strategy strategy) const {
    std::ostringstream os;
    os << "strategy=" << strategy_name(strategy) << "\n";
    os << "width=" << width << "\n";
    os << "stimuli=" << stimuli << "\n";
    os << "gates=" << gates << "\n";
    os << "x_ratio=" << x_ratio << "\n";
    os << "checks=" << checks << "\n";
    os << "failures=" << failures << "\n";
    os << "execs_fast=" << execs_fast << "\n";
    os << "execs_full=" << execs_full << "\n";
    os << "events_applied=" << events_applied << "\n";
    os << "time_wall_s=" << wall_seconds << "\n";
    os << "time_cps=" << cps << "\n";
    os << "time_per_gate_ns=" << per_gate_ns << "\n";
    return os.str();
}

BenchResult bench_wallace(std::uint32_t width, std::uint64_t n, double x_ratio,
                          Strategy strategy, std::uint64_t seed, std::string* vcd_out) {
    SessionOptions opt;
    opt.seed = seed;
    opt.strategy = strategy;
    opt.clock_period = 128;
    Session sess(opt);
    Builder& b = sess.builder();
    auto dut = examples::wallace_multiplier(b, width);
    SignalId clk = b.domain().clock.id();
    if (vcd_out) sess.track(dut.m);
    sess.elaborate();
    TaskHandle tb = sess.spawn(
        wallace_tb(sess.tasks(), dut, clk, n, x_ratio));

    // settle the power-on values before timing anything
    sess.run_until(2);

    auto t0 = std::chrono::steady_clock::now();
    bool done = sess.join_run({tb}, (n + 16) * opt.clock_period);
    auto t1 = std::chrono::steady_clock::now();
    if (!done) throw Error("wallace bench did not finish within its slot budget");

    const SimStats& st = sess.sim().stats();
    BenchResult r;
    r.width = width;
    r.stimuli = n;
    r.gates = sess.circuit().gate_count();
    r.x_ratio = x_ratio;
    r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    r.cps = r.wall_seconds > 0 ? static_cast<double>(n) / r.wall_seconds : 0.0;
    r.execs_fast = st.execs_fast;
    r.execs_full = st.execs_full;
    r.events_applied = st.events_applied;
    std::uint64_t execs = st.execs_fast + st.execs_full;
    r.per_gate_ns = execs ? 1e9 * r.wall_seconds / static_cast<double>(execs) : 0.0;
    r.checks = sess.ledger().passes + sess.ledger().failures;
    r.failures = sess.ledger().failures;
    if (vcd_out) *vcd_out = sess.vcd_text();
    return r;
}

std::string vcd_of_vending(std::uint64_t seed, std::uint64_t cycles, Strategy strategy) {
    RunResult r = run_example("vending", cycles, seed, strategy, {}, true);
    if (r.failures) throw Error("vending run failed:\n" + r.ledger_report);
    return r.vcd;
}

std::string vcd_of_dag(std::uint64_t seed, int gates, std::uint64_t stimuli,
                       Strategy strategy, bool x_stimuli) {
    SessionOptions opt;
    opt.seed = seed;
    opt.strategy = strategy;
    Session sess(opt);
    Builder& b = sess.builder();
    auto dag = examples::random_dag(b, seed, gates);
    for (Signal s : dag.inputs) sess.track(s);
    for (Signal s : dag.sinks) sess.track(s);
    sess.elaborate();

    std::mt19937_64 rng(seed ^ 0x5711);
    std::uint64_t at = 2;
    for (std::uint64_t i = 0; i < stimuli; ++i) {
        for (Signal in : dag.inputs) {
            bool with_x = x_stimuli && (rng() % 4 == 0);
            Logic v = with_x ? random_x_value(rng, in.width()) : random_value(rng, in.width());
            sess.sim().drive_at(in.id(), v, at);
        }
        at += 70;  // beyond the deepest combinational path
    }
    sess.run_until(at + 70);
    return sess.vcd_text();
}

}  // namespace hgl::harness
