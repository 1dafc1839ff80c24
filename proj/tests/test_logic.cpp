#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "hgl/logic.hpp"

using namespace hgl;
using boost::multiprecision::cpp_int;

namespace {

Logic L(std::string_view t) { return Logic::from_text(t); }

// Independent big-integer oracle for binary values.
cpp_int to_int(const Logic& a) {
    REQUIRE(!a.has_x());
    cpp_int r = 0;
    for (std::size_t i = a.word_count(); i-- > 0;) {
        r <<= 64;
        r += a.v_word(i);
    }
    return r;
}

cpp_int to_int_signed(const Logic& a) {
    cpp_int u = to_int(a);
    if (a.bit(a.width() - 1) == 1) u -= cpp_int(1) << a.width();
    return u;
}

Logic from_int(const cpp_int& value, std::uint32_t width) {
    cpp_int v = value;
    std::vector<std::uint64_t> ws(words::count(width), 0);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        ws[i] = static_cast<std::uint64_t>(v & cpp_int(~std::uint64_t{0}));
        v >>= 64;
    }
    return Logic::from_planes(width, std::move(ws), {});
}

Logic random_binary(std::mt19937_64& rng, std::uint32_t width) {
    std::vector<std::uint64_t> ws(words::count(width));
    for (auto& w : ws) w = rng();
    return Logic::from_planes(width, std::move(ws), {});
}

// Enumerates all 3^width values of the given width.
Logic nth_ternary(std::uint32_t width, std::uint64_t n) {
    Logic out(width);
    for (std::uint32_t i = 0; i < width; ++i) {
        out.set_bit(i, static_cast<int>(n % 3));
        n /= 3;
    }
    return out;
}

std::uint64_t pow3(std::uint32_t w) {
    std::uint64_t r = 1;
    while (w--) r *= 3;
    return r;
}

bool is_canonical(const Logic& a) {
    for (std::size_t i = 0; i < a.word_count(); ++i) {
        if (a.v_word(i) & a.x_word(i)) return false;
        if (i + 1 == a.word_count()) {
            std::uint64_t offmask = ~words::tail_mask(a.width());
            if ((a.v_word(i) | a.x_word(i)) & offmask) return false;
        }
    }
    return true;
}

// out stays decided on every bit where base was decided, after refining one
// input X bit to 0 or 1.
bool refines(const Logic& base, const Logic& refined) {
    if (base.width() != refined.width()) return false;
    for (std::uint32_t i = 0; i < base.width(); ++i)
        if (base.bit(i) != 2 && refined.bit(i) != base.bit(i)) return false;
    return true;
}

int bit3(const Logic& a) { return a.bit(0); }  // for 1-bit results

}  // namespace

TEST_CASE("literal parsing") {
    Logic a = L("4'b10x0");
    CHECK(a.width() == 4);
    CHECK(a.v_word(0) == 0b1000);
    CHECK(a.x_word(0) == 0b0010);
    CHECK(L("8'hFF").to_uint() == 255);
    CHECK(L("8'hxF").x_word(0) == 0xF0);
    CHECK(L("12'd100").to_uint() == 100);
    CHECK(L("64'hFFFFFFFFFFFFFFFF").v_word(0) == ~0ull);
    CHECK(L("4'b10x0").str() == "4'b10x0");

    CHECK_THROWS_AS(L("4'd16"), Error);   // needs 5 bits
    CHECK_THROWS_AS(L("4'dx"), Error);    // no X in decimal
    CHECK_THROWS_AS(L("4'b"), Error);
    CHECK_THROWS_AS(L("b1010"), Error);
    CHECK_THROWS_AS(L("4'q1010"), Error);
    CHECK_THROWS_AS(L("0'b0"), Error);
    CHECK_THROWS_AS(L("3'hF"), Error);    // F needs 4 bits
    CHECK(L("3'h7").to_uint() == 7);      // fits exactly
    CHECK(L("6'b000111").to_uint() == 7);
}

TEST_CASE("bitwise examples") {
    CHECK(logic_not(L("1'b0")) == L("1'b1"));
    CHECK(logic_not(L("3'b1x0")) == L("3'b0x1"));
    CHECK(logic_and(L("3'b1x0"), L("3'b110")) == L("3'b1x0"));
    CHECK(logic_or(L("3'b1x0"), L("3'b010")) == L("3'b110"));
    CHECK(logic_xor(L("2'b1x"), L("2'b11")) == L("2'b0x"));
    CHECK_THROWS_AS(logic_and(L("2'b00"), L("3'b000")), Error);
}

TEST_CASE("three-state truth tables exhaust") {
    // 0, 1, X encoded as ints; expected tables from the three-state algebra.
    auto lit = [](int b) {
        return b == 2 ? Logic::all_x(1) : Logic::from_uint(static_cast<unsigned>(b), 1);
    };
    int and_t[3][3] = {{0, 0, 0}, {0, 1, 2}, {0, 2, 2}};
    int or_t[3][3] = {{0, 1, 2}, {1, 1, 1}, {2, 1, 2}};
    int xor_t[3][3] = {{0, 1, 2}, {1, 0, 2}, {2, 2, 2}};
    int not_t[3] = {1, 0, 2};
    for (int a = 0; a < 3; ++a) {
        CHECK(bit3(logic_not(lit(a))) == not_t[a]);
        for (int b = 0; b < 3; ++b) {
            CAPTURE(a);
            CAPTURE(b);
            CHECK(bit3(logic_and(lit(a), lit(b))) == and_t[a][b]);
            CHECK(bit3(logic_or(lit(a), lit(b))) == or_t[a][b]);
            CHECK(bit3(logic_xor(lit(a), lit(b))) == xor_t[a][b]);
        }
    }
}

TEST_CASE("reductions") {
    CHECK(logic_reduce(L("4'b1x00"), ReduceKind::Or) == L("1'b1"));
    CHECK(logic_reduce(L("4'b1x11"), ReduceKind::And) == L("1'bx"));
    CHECK(logic_reduce(L("4'b0000"), ReduceKind::Xor) == L("1'b0"));
    CHECK(logic_reduce(L("4'b0x00"), ReduceKind::Or) == L("1'bx"));
    CHECK(logic_reduce(L("4'b0x00"), ReduceKind::And) == L("1'b0"));
    CHECK(logic_reduce(L("4'b1110"), ReduceKind::Xor) == L("1'b1"));
    CHECK(logic_reduce(L("4'b1111"), ReduceKind::And) == L("1'b1"));
    CHECK(logic_reduce(L("4'b0000"), ReduceKind::Or) == L("1'b0"));
}

TEST_CASE("arithmetic examples") {
    CHECK(logic_add(L("4'b0011"), L("4'b0001")) == L("5'b00100"));
    CHECK(logic_add(L("4'b00x1"), L("4'b0001")) == L("5'bxxxxx"));
    CHECK(logic_mul(L("4'd7"), L("4'd9")) == L("8'd63"));
    CHECK(logic_sub(L("4'd3"), L("4'd5")) == L("5'd30"));  // wraps mod 32

    auto [q, r] = logic_divmod(L("8'd100"), L("8'd7"));
    CHECK(q == L("8'd14"));
    CHECK(r == L("8'd2"));
    auto [qz, rz] = logic_divmod(L("8'd5"), L("8'd0"));
    CHECK(qz == Logic::all_x(8));
    CHECK(rz == Logic::all_x(8));
    auto [qx, rx] = logic_divmod(L("8'd5"), L("8'b000000x0"));
    CHECK(qx == Logic::all_x(8));
    CHECK(rx == Logic::all_x(8));
}

TEST_CASE("comparison examples") {
    CHECK(logic_eq(L("4'b1010"), L("4'b1010")) == L("1'b1"));
    CHECK(logic_eq(L("4'b1x10"), L("4'b0x10")) == L("1'b0"));  // known bits differ
    CHECK(logic_eq(L("4'b1x10"), L("4'b1x10")) == L("1'bx"));

    // lt("4'b1xxx","4'b0100") is decidable: enumerate every X assignment.
    Logic a = L("4'b1xxx"), b = L("4'b0100");
    for (std::uint64_t n = 0; n < 8; ++n) {
        Logic resolved = a;
        for (std::uint32_t i = 0; i < 3; ++i) resolved.set_bit(i, (n >> i) & 1);
        CHECK(to_int(resolved) >= to_int(b));
    }
    CHECK(logic_lt_u(a, b) == L("1'b0"));
    CHECK(logic_lt_u(L("4'b0x00"), L("4'b1000")) == L("1'b1"));  // max 0110 < 1000
    CHECK(logic_lt_u(L("4'b0x00"), L("4'b0100")) == L("1'bx"));
    CHECK(logic_gt_u(L("4'd9"), L("4'd3")) == L("1'b1"));

    // signed: 1000 = -8 < 0100 = 4
    CHECK(logic_lt_s(L("4'b1000"), L("4'b0100")) == L("1'b1"));
    CHECK(logic_lt_s(L("4'b0100"), L("4'b1000")) == L("1'b0"));
    CHECK(logic_lt_s(L("4'bx000"), L("4'b0111")) == L("1'b1"));  // max is 0 or -8 < 7
}

TEST_CASE("cat, select, insert examples") {
    CHECK(logic_cat({L("1'b1"), L("1'b0")}) == L("2'b01"));
    CHECK(logic_cat({L("4'hA")}) == L("4'hA"));
    CHECK(logic_cat({L("2'bx0"), L("2'b11")}) == L("4'b11x0"));
    CHECK_THROWS_AS(logic_cat({}), Error);

    CHECK(logic_select(L("8'hA5"), 0, 4) == L("4'h5"));
    CHECK(logic_select(L("4'b1010"), 2, 4) == L("4'bxx10"));
    CHECK(logic_select(L("4'b1x10"), 1, 2) == L("2'bx1"));

    CHECK(logic_dyn_select(L("8'hA5"), L("3'd4"), 4) == L("4'hA"));
    CHECK(logic_dyn_select(L("8'hA5"), L("3'bx00"), 4) == L("4'bxxxx"));
    CHECK(logic_dyn_select(L("8'hA5"), L("3'd6"), 4) == L("4'bxx10"));

    CHECK(logic_insert(L("16'h0000"), 4, L("8'hFF")) == L("16'h0FF0"));
    CHECK(logic_insert(L("16'h0000"), 12, L("8'hFF")) == L("16'hF000"));
    CHECK(logic_dyn_insert(L("16'h0000"), L("4'd4"), L("8'hFF")) == L("16'h0FF0"));
    CHECK(logic_dyn_insert(L("16'h0000"), L("4'bxx00"), L("8'hFF")) == Logic::all_x(16));

    // dynamic insert against a per-index oracle built from static inserts
    for (std::uint32_t i = 0; i < 16; ++i) {
        Logic expect = logic_insert(L("16'h1234"), i, L("8'hFF"));
        CHECK(logic_dyn_insert(L("16'h1234"), Logic::from_uint(i, 5), L("8'hFF")) == expect);
    }
}

TEST_CASE("bitpat") {
    BitPat p = BitPat::from_text("4'b1??0");
    CHECK(p.match(L("4'b1010")) == L("1'b1"));
    CHECK(p.match(L("4'b0010")) == L("1'b0"));
    CHECK(p.match(L("4'b1x10")) == L("1'b1"));  // X only at don't-care position
    CHECK(p.match(L("4'b101x")) == L("1'bx"));
    CHECK(p.str() == "4'b1??0");
    CHECK_THROWS_AS(p.match(L("5'b10100")), Error);
    CHECK_THROWS_AS(BitPat::from_text("4'd12"), Error);
    BitPat h = BitPat::from_text("8'h?A");
    CHECK(h.match(L("8'hFA")) == L("1'b1"));
    CHECK(h.match(L("8'hFB")) == L("1'b0"));
}

TEST_CASE("resize") {
    CHECK(logic_zext(L("4'b1010"), 6) == L("6'b001010"));
    CHECK(logic_sext(L("4'b1010"), 6) == L("6'b111010"));
    CHECK(logic_sext(L("4'b1x10"), 6) == L("6'b111x10"));
    CHECK(logic_sext(L("4'bx010"), 6) == L("6'bxxx010"));  // X sign extends as X
    CHECK(logic_resize(L("6'b111010"), 4, false) == L("4'b1010"));
    CHECK(logic_resize(L("4'b0010"), 4, true) == L("4'b0010"));
}

TEST_CASE("merge") {
    CHECK(logic_merge(L("4'b1010"), L("4'b1000")) == L("4'b10x0"));
    CHECK(logic_merge(L("4'b1010"), L("4'b1010")) == L("4'b1010"));
    CHECK(logic_merge(L("4'b10x0"), L("4'b1000")) == L("4'b10x0"));
    CHECK(logic_merge(Logic::all_x(4), L("4'b1010")) == Logic::all_x(4));
}

TEST_CASE("oracle equivalence on binary inputs") {
    std::mt19937_64 rng(0xA11CE5);
    for (int iter = 0; iter < 10000; ++iter) {
        std::uint32_t w = 1 + static_cast<std::uint32_t>(rng() % 64);
        Logic a = random_binary(rng, w);
        Logic b = random_binary(rng, w);
        cpp_int A = to_int(a), B = to_int(b);
        cpp_int m1 = cpp_int(1) << (w + 1);

        CHECK(logic_add(a, b) == from_int((A + B) % m1, w + 1));
        CHECK(logic_sub(a, b) == from_int((m1 + A - B) % m1, w + 1));
        CHECK(logic_mul(a, b) == from_int(A * B, 2 * w));
        if (B != 0) {
            auto [q, r] = logic_divmod(a, b);
            CHECK(q == from_int(A / B, w));
            CHECK(r == from_int(A % B, w));
        }
        CHECK(logic_eq(a, b).to_uint() == (A == B ? 1u : 0u));
        CHECK(logic_lt_u(a, b).to_uint() == (A < B ? 1u : 0u));
        CHECK(logic_gt_u(a, b).to_uint() == (A > B ? 1u : 0u));
        cpp_int As = to_int_signed(a), Bs = to_int_signed(b);
        CHECK(logic_lt_s(a, b).to_uint() == (As < Bs ? 1u : 0u));
        CHECK(logic_gt_s(a, b).to_uint() == (As > Bs ? 1u : 0u));
    }
}

TEST_CASE("binary closure and canonical form") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        std::uint32_t w = 1 + static_cast<std::uint32_t>(rng() % 32);
        Logic a = random_binary(rng, w);
        Logic b = random_binary(rng, w);
        std::vector<Logic> outs = {logic_not(a),        logic_and(a, b),
                                   logic_or(a, b),      logic_xor(a, b),
                                   logic_add(a, b),     logic_sub(a, b),
                                   logic_mul(a, b),     logic_eq(a, b),
                                   logic_lt_u(a, b),    logic_lt_s(a, b),
                                   logic_cat({a, b}),   logic_reduce(a, ReduceKind::Xor),
                                   logic_merge(a, a),   logic_select(a, 0, w)};
        if (!b.is_zero()) {
            auto [q, r] = logic_divmod(a, b);
            outs.push_back(q);
            outs.push_back(r);
        }
        for (const Logic& o : outs) {
            CHECK(is_canonical(o));
            CHECK(!o.has_x());  // binary in, binary out
        }
        // canonical form also holds for X-bearing results
        Logic ax = logic_merge(a, logic_not(a));
        CHECK(is_canonical(ax));
        CHECK(is_canonical(logic_and(ax, b)));
        CHECK(is_canonical(logic_add(ax, b)));
    }
}

TEST_CASE("monotone X refinement exhaustive to width 4") {
    for (std::uint32_t w = 1; w <= 4; ++w) {
        std::uint64_t n = pow3(w);
        for (std::uint64_t ia = 0; ia < n; ++ia) {
            Logic a = nth_ternary(w, ia);
            // single-input ops
            for (std::uint32_t biti = 0; biti < w; ++biti) {
                if (a.bit(biti) != 2) continue;
                for (int rb = 0; rb <= 1; ++rb) {
                    Logic a2 = a;
                    a2.set_bit(biti, rb);
                    CHECK(refines(logic_not(a), logic_not(a2)));
                    CHECK(refines(logic_select(a, 1, w), logic_select(a2, 1, w)));
                    CHECK(refines(logic_reduce(a, ReduceKind::Or),
                                  logic_reduce(a2, ReduceKind::Or)));
                    CHECK(refines(logic_reduce(a, ReduceKind::And),
                                  logic_reduce(a2, ReduceKind::And)));
                    CHECK(refines(logic_reduce(a, ReduceKind::Xor),
                                  logic_reduce(a2, ReduceKind::Xor)));
                }
            }
            for (std::uint64_t ib = 0; ib < n; ++ib) {
                Logic b = nth_ternary(w, ib);
                for (std::uint32_t biti = 0; biti < w; ++biti) {
                    if (a.bit(biti) != 2) continue;
                    for (int rb = 0; rb <= 1; ++rb) {
                        Logic a2 = a;
                        a2.set_bit(biti, rb);
                        CHECK(refines(logic_and(a, b), logic_and(a2, b)));
                        CHECK(refines(logic_or(a, b), logic_or(a2, b)));
                        CHECK(refines(logic_xor(a, b), logic_xor(a2, b)));
                        CHECK(refines(logic_eq(a, b), logic_eq(a2, b)));
                        CHECK(refines(logic_lt_u(a, b), logic_lt_u(a2, b)));
                    }
                }
            }
        }
    }
}

TEST_CASE("interval comparisons agree with enumeration at width 3") {
    std::uint64_t n = pow3(3);
    for (std::uint64_t ia = 0; ia < n; ++ia) {
        for (std::uint64_t ib = 0; ib < n; ++ib) {
            Logic a = nth_ternary(3, ia), b = nth_ternary(3, ib);
            bool any_lt = false, all_lt = true;
            bool any_lts = false, all_lts = true;
            // enumerate binary resolutions of both operands
            for (std::uint64_t ra = 0; ra < 8; ++ra) {
                Logic a2 = a;
                bool ok_a = true;
                for (std::uint32_t i = 0; i < 3; ++i)
                    if (a.bit(i) == 2)
                        a2.set_bit(i, (ra >> i) & 1);
                    else if (((ra >> i) & 1) != 0)
                        ok_a = false;  // skip duplicate resolutions
                if (!ok_a) continue;
                for (std::uint64_t rb = 0; rb < 8; ++rb) {
                    Logic b2 = b;
                    bool ok_b = true;
                    for (std::uint32_t i = 0; i < 3; ++i)
                        if (b.bit(i) == 2)
                            b2.set_bit(i, (rb >> i) & 1);
                        else if (((rb >> i) & 1) != 0)
                            ok_b = false;
                    if (!ok_b) continue;
                    bool lt = to_int(a2) < to_int(b2);
                    bool lts = to_int_signed(a2) < to_int_signed(b2);
                    any_lt |= lt;
                    all_lt &= lt;
                    any_lts |= lts;
                    all_lts &= lts;
                }
            }
            int expect = all_lt ? 1 : (any_lt ? 2 : 0);
            int expect_s = all_lts ? 1 : (any_lts ? 2 : 0);
            CAPTURE(a.str());
            CAPTURE(b.str());
            CHECK(bit3(logic_lt_u(a, b)) == expect);
            CHECK(bit3(logic_lt_s(a, b)) == expect_s);
        }
    }
}
