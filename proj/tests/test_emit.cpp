#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "hgl/examples.hpp"
#include "hgl/session.hpp"
#include "hgl/verilog.hpp"

using namespace hgl;

namespace {

Logic L(std::string_view t) { return Logic::from_text(t); }

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE_MESSAGE(f.good(), "missing file: ", path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string golden_path(const std::string& name) {
    return std::string(HGL_GOLDEN_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("vcd records value changes with x bits and collapses deltas") {
    Session sess;
    Builder& b = sess.builder();
    Signal a = b.sig_uint(1, "a", 0);
    Signal v4 = b.sig_uint(4, "v4", 0);
    // zero-delay chain: only the final value of a slot may appear
    Signal mid = b.sig_uint(4, "mid");
    Signal out = b.sig_uint(4, "out");
    b.default_delay = 0;
    b.assign(mid, v4);
    b.assign(out, mid);
    b.default_delay = 1;
    sess.track(a);
    sess.track(v4);
    sess.track(out);
    sess.elaborate();

    sess.sim().drive_at(a.id(), L("1'b1"), 5);
    sess.sim().drive_at(v4.id(), L("4'b1x10"), 7);
    sess.run_until(20);
    std::string text = sess.vcd_text();

    CHECK(text.find("$timescale 1ns $end") != std::string::npos);
    CHECK(text.find("$var wire 1 ! a $end") != std::string::npos);
    CHECK(text.find("#5\n1!") != std::string::npos);
    CHECK(text.find("b1x10 \"") != std::string::npos);
    // the delta chain lands in slot 7 with its final value only
    CHECK(text.find("b1x10 #") != std::string::npos);
    CHECK(text.find("mid") == std::string::npos);  // untracked signals are absent
}

TEST_CASE("vcd replay is byte-identical for equal seeds") {
    auto run = [](std::uint64_t seed) {
        Session sess(SessionOptions{seed, Strategy::Optimized, 64, true});
        Builder& b = sess.builder();
        auto ripple = examples::ripple_carry(b, 4);
        SignalId clk = b.domain().clock.id();  // before freezing
        sess.track(ripple.m);
        sess.elaborate();
        auto tb = [](TaskRuntime& rt, examples::AdderHandles dut, SignalId c) -> SimTask {
            for (int i = 0; i < 20; ++i) {
                rt.setr(dut.x.id());
                rt.setr(dut.y.id());
                co_await EdgeWait{c, -1, 1};
            }
        };
        TaskHandle h = sess.spawn(tb(sess.tasks(), ripple, clk));
        sess.join_run({h}, 100000);
        return sess.vcd_text();
    };
    std::string a = run(11), b = run(11), c = run(12);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("double tracking is idempotent") {
    Session sess;
    Builder& b = sess.builder();
    auto vend = examples::vending_machine(b);
    sess.track(vend.m);
    sess.track(vend.m);
    sess.track(vend.valid);
    sess.elaborate();
    std::string text = sess.vcd_text();
    CHECK(text.find("valid_1") == std::string::npos);
}

TEST_CASE("verilog goldens: full adder, ripple carry, vending machine") {
    struct Case {
        const char* file;
        std::function<ModuleId(Builder&)> build;
    };
    std::vector<Case> cases = {
        {"fulladder.sv", [](Builder& b) { return examples::full_adder(b).m; }},
        {"ripple8.sv", [](Builder& b) { return examples::ripple_carry(b, 8).m; }},
        {"vending.sv", [](Builder& b) { return examples::vending_machine(b).m; }},
    };
    for (const Case& tc : cases) {
        Circuit c;
        Builder b(c);
        ModuleId top = tc.build(b);
        c.freeze();
        std::string text = emit_verilog(c, top);
        CAPTURE(tc.file);
        CHECK(text == read_file(golden_path(tc.file)));

        auto units = emit_verilog_units(c, top);
        auto probs = lint_verilog(units);
        for (const auto& p : probs) FAIL_CHECK(p);
    }
}

TEST_CASE("structural lint passes for every packaged example") {
    auto check = [](std::function<ModuleId(Builder&)> build) {
        Circuit c;
        Builder b(c);
        ModuleId top = build(b);
        c.freeze();
        auto probs = lint_verilog(emit_verilog_units(c, top));
        for (const auto& p : probs) FAIL_CHECK(p);
    };
    check([](Builder& b) { return examples::kogge_stone(b, 16).m; });
    check([](Builder& b) { return examples::wallace_multiplier(b, 8).m; });
    check([](Builder& b) { return examples::vending_machine(b).m; });
    for (std::uint64_t seed : {1u, 2u, 3u})
        check([&](Builder& b) { return examples::random_dag(b, seed, 40).m; });
    // latch, tri-state, memory and dynamic assignment shapes
    check([](Builder& b) {
        ModuleId m = b.module_begin("Mixed");
        Signal en = b.sig_uint(1, "en", 0);
        b.mark_input(en);
        Signal d = b.sig_uint(8, "d", 0);
        b.mark_input(d);
        Signal lq = b.latch(en, 8, "lq");
        b.assign(lq, d);
        Signal tq = b.wtri(en, d, "tq");
        b.mark_output(tq);
        b.mark_output(lq);
        Signal idx = b.sig_uint(3, "idx", 0);
        b.mark_input(idx);
        Signal w = b.wire(8, "w", Logic::zeros(8));
        b.assign_dyn(w, idx, 4, b.select(d, 0, 4));
        b.mark_output(w);
        auto mem = b.mem(8, 4, "m");
        b.mem_write(mem, b.select(idx, 0, 2), d, en);
        Signal rd = b.mem_read(mem, b.select(idx, 0, 2));
        b.mark_output(rd);
        Signal dsel = b.dyn_select(d, idx, 4);
        b.mark_output(dsel);
        b.module_end();
        return m;
    });
}

TEST_CASE("emission requires a frozen circuit and is deterministic") {
    Circuit c;
    Builder b(c);
    ModuleId top = examples::vending_machine(b).m;
    CHECK_THROWS_AS(emit_verilog(c, top), Error);
    c.freeze();
    CHECK(emit_verilog(c, top) == emit_verilog(c, top));
}

TEST_CASE("unique switch emits the non-priority case form") {
    Circuit c;
    Builder b(c);
    Signal sel = b.sig_uint(2, "sel", 0);
    Signal t = b.wire(4, "t", L("4'h0"));
    b.switch_begin(sel, /*unique=*/true);
    b.case_begin(L("2'd0"));
    b.assign(t, std::uint64_t{1});
    b.case_begin(L("2'd2"));
    b.assign(t, std::uint64_t{7});
    b.switch_end();
    c.freeze();
    std::string text = emit_verilog(c, 0);
    CHECK(text.find("unique case (sel)") != std::string::npos);
    CHECK(text.find("2'b10: begin") != std::string::npos);
    auto probs = lint_verilog(emit_verilog_units(c, 0));
    for (const auto& p : probs) FAIL_CHECK(p);
}
