#include "hgl/examples.hpp"

namespace hgl::examples {

FullAdderHandles full_adder(Builder& b) {
    FullAdderHandles h;
    h.m = b.module_begin("FullAdder");
    h.a = b.sig_uint(1, "a", 0);
    h.b = b.sig_uint(1, "b", 0);
    h.cin = b.sig_uint(1, "cin", 0);
    Signal axb = h.a ^ h.b;
    h.s = axb ^ h.cin;
    h.cout = (h.a & h.b) | (axb & h.cin);
    b.circuit().signal(h.s.id()).name_hint = "s";
    b.circuit().signal(h.cout.id()).name_hint = "cout";
    b.module_end();
    return h;
}

namespace {

struct AdderIO {
    Signal x, y, out;
};

AdderIO adder_io(Builder& b, std::uint32_t w) {
    AdderIO io;
    io.x = b.sig_uint(w, "io_x", 0);
    io.y = b.sig_uint(w, "io_y", 0);
    io.out = b.sig_uint(w + 1, "io_out", 0);
    b.mark_input(io.x);
    b.mark_input(io.y);
    b.mark_output(io.out);
    return io;
}

}  // namespace

AdderHandles ripple_carry(Builder& b, std::uint32_t fallback_w) {
    AdderHandles h;
    h.m = b.module_begin("RippleCarry");
    std::uint32_t w = static_cast<std::uint32_t>(b.param_int("w", fallback_w));
    h.width = w;
    AdderIO io = adder_io(b, w);
    h.x = io.x;
    h.y = io.y;
    h.out = io.out;

    std::vector<FullAdderHandles> adders;
    for (std::uint32_t i = 0; i < w; ++i) adders.push_back(full_adder(b));
    HArray xs = b.split(io.x);
    HArray ys = b.split(io.y);
    for (std::uint32_t i = 0; i < w; ++i) {
        b.assign(adders[i].a, xs.at(i).sig());
        b.assign(adders[i].b, ys.at(i).sig());
        if (i == 0)
            b.assign(adders[i].cin, std::uint64_t{0});
        else
            b.assign(adders[i].cin, adders[i - 1].cout);
    }
    std::vector<Signal> parts;
    for (std::uint32_t i = 0; i < w; ++i) parts.push_back(adders[i].s);
    parts.push_back(adders[w - 1].cout);
    b.assign(io.out, b.cat(parts));
    b.module_end();
    return h;
}

Signal kogge_stone_sum(Builder& b, Signal x, Signal y) {
    std::uint32_t w = x.width();
    Signal p_odd = x ^ y;
    HArray p_bits = b.split(p_odd);
    HArray g_bits = b.split(x & y);
    std::vector<Signal> P, G;
    for (std::uint32_t i = 0; i < w; ++i) {
        P.push_back(p_bits.at(i).sig());
        G.push_back(g_bits.at(i).sig());
    }
    for (std::uint32_t dist = 1; dist < w; dist *= 2) {
        for (std::uint32_t i = w; i-- > dist;) {
            G[i] = G[i] | (P[i] & G[i - dist]);
            if (i >= dist * 2) P[i] = P[i] & P[i - dist];
        }
    }
    std::vector<Signal> parts;
    parts.push_back(b.lit(0, 1));
    for (std::uint32_t i = 0; i < w; ++i) parts.push_back(G[i]);
    return b.cat(parts) ^ p_odd;
}

AdderHandles kogge_stone(Builder& b, std::uint32_t fallback_w) {
    AdderHandles h;
    h.m = b.module_begin("KoggeStone");
    std::uint32_t w = static_cast<std::uint32_t>(b.param_int("w", fallback_w));
    h.width = w;
    AdderIO io = adder_io(b, w);
    h.x = io.x;
    h.y = io.y;
    h.out = io.out;
    b.assign(io.out, kogge_stone_sum(b, io.x, io.y));
    b.module_end();
    return h;
}

VendingHandles vending_machine(Builder& b) {
    VendingHandles h;
    h.m = b.module_begin("VendingMachine");
    h.nickel = b.sig_uint(1, "nickel", 0);
    h.dime = b.sig_uint(1, "dime", 0);
    h.valid = b.sig_uint(1, "valid", 0);
    b.mark_input(h.nickel);
    b.mark_input(h.dime);
    b.mark_output(h.valid);

    h.states = std::make_shared<EnumDef>(Encoding::Onehot);
    Signal s = b.reg_enum(h.states, "s");
    h.state = s;

    b.switch_begin(s);
    b.case_begin(std::string("sIdle"));
    {
        b.when_begin(h.nickel);
        b.assign(s, std::string("s5"));
        b.when_end();
        b.when_begin(h.dime);
        b.assign(s, std::string("s10"));
        b.when_end();
    }
    b.case_begin(std::string("s5"));
    {
        b.when_begin(h.nickel);
        b.assign(s, std::string("s10"));
        b.when_end();
        b.when_begin(h.dime);
        b.assign(s, std::string("s15"));
        b.when_end();
    }
    b.case_begin(std::string("s10"));
    {
        b.when_begin(h.nickel);
        b.assign(s, std::string("s15"));
        b.when_end();
        b.when_begin(h.dime);
        b.assign(s, std::string("sOk"));
        b.when_end();
    }
    b.case_begin(std::string("s15"));
    {
        b.when_begin(h.nickel);
        b.assign(s, std::string("sOk"));
        b.when_end();
        b.when_begin(h.dime);
        b.assign(s, std::string("sOk"));
        b.when_end();
    }
    b.case_begin(std::string("sOk"));
    {
        b.assign(s, std::string("sIdle"));
        b.assign(h.valid, std::uint64_t{1});
    }
    b.switch_end();
    b.module_end();
    return h;
}

int vending_next_state(int state, bool nickel, bool dime) {
    // indices: 0 sIdle, 1 s5, 2 s10, 3 s15, 4 sOk
    static constexpr int on_nickel[5] = {1, 2, 3, 4, -1};
    static constexpr int on_dime[5] = {2, 3, 4, 4, -1};
    if (state == 4) return 0;  // sOk returns to idle unconditionally
    int next = state;
    if (nickel) next = on_nickel[state];
    if (dime) next = on_dime[state];  // the later assignment wins
    return next;
}

WallaceHandles wallace_multiplier(Builder& b, std::uint32_t w) {
    WallaceHandles h;
    h.m = b.module_begin("Wallace" + std::to_string(w));
    h.width = w;
    h.a = b.sig_uint(w, "a", 0);
    h.b = b.sig_uint(w, "b", 0);
    b.mark_input(h.a);
    b.mark_input(h.b);
    Signal product_out = b.sig_uint(2 * w, "product", 0);
    b.mark_output(product_out);
    h.product = product_out;

    HArray abits = b.split(h.a);
    HArray bbits = b.split(h.b);
    std::vector<std::vector<Signal>> columns(2 * w);
    for (std::uint32_t i = 0; i < w; ++i)
        for (std::uint32_t j = 0; j < w; ++j)
            columns[i + j].push_back(abits.at(j).sig() & bbits.at(i).sig());

    auto too_tall = [&]() {
        for (const auto& col : columns)
            if (col.size() > 2) return true;
        return false;
    };
    while (too_tall()) {
        std::vector<std::vector<Signal>> next(2 * w);
        for (std::uint32_t k = 0; k < 2 * w; ++k) {
            const auto& col = columns[k];
            std::size_t i = 0;
            while (col.size() - i >= 3) {
                Signal x = col[i], y = col[i + 1], z = col[i + 2];
                Signal xy = x ^ y;
                next[k].push_back(xy ^ z);
                if (k + 1 < 2 * w) next[k + 1].push_back((x & y) | (xy & z));
                i += 3;
            }
            if (col.size() - i == 2) {
                Signal x = col[i], y = col[i + 1];
                next[k].push_back(x ^ y);
                if (k + 1 < 2 * w) next[k + 1].push_back(x & y);
                i += 2;
            }
            for (; i < col.size(); ++i) next[k].push_back(col[i]);
        }
        columns = std::move(next);
    }

    Signal zero = b.lit(0, 1);
    std::vector<Signal> row0, row1;
    for (std::uint32_t k = 0; k < 2 * w; ++k) {
        row0.push_back(columns[k].size() > 0 ? columns[k][0] : zero);
        row1.push_back(columns[k].size() > 1 ? columns[k][1] : zero);
    }
    Signal sum = kogge_stone_sum(b, b.cat(row0), b.cat(row1));
    b.assign(product_out, b.select(sum, 0, 2 * w));
    b.module_end();
    return h;
}

DagHandles random_dag(Builder& b, std::uint64_t seed, int max_gates, int dag_index) {
    std::mt19937_64 rng(seed);
    DagHandles h;
    h.m = b.module_begin("Dag" + std::to_string(dag_index));
    int n_inputs = 2 + static_cast<int>(rng() % 3);
    std::vector<Signal> pool;
    for (int i = 0; i < n_inputs; ++i) {
        std::uint32_t w = 1 + static_cast<std::uint32_t>(rng() % 12);
        Signal s = b.sig_uint(w, "in" + std::to_string(i), 0);
        b.mark_input(s);
        h.inputs.push_back(s);
        pool.push_back(s);
    }
    std::vector<bool> consumed;
    consumed.assign(pool.size(), false);
    auto pick = [&]() {
        std::size_t i = rng() % pool.size();
        consumed[i] = true;
        return pool[i];
    };
    int made = 0;
    while (made < max_gates) {
        int kindsel = static_cast<int>(rng() % 12);
        Signal out;
        Signal a = pick();
        switch (kindsel) {
            case 0: out = ~a; break;
            case 1: out = a & pick(); break;
            case 2: out = a | pick(); break;
            case 3: out = a ^ pick(); break;
            case 4: out = a + pick(); break;
            case 5: out = a - pick(); break;
            case 6:
                out = b.eq(a, pick());
                break;
            case 7:
                out = b.lt(a, pick());
                break;
            case 8:
                out = b.cat({a, pick()});
                break;
            case 9:
                out = b.select(a, static_cast<std::uint32_t>(rng() % a.width()),
                               1 + static_cast<std::uint32_t>(rng() % a.width()));
                break;
            case 10:
                out = b.reduce_xor(a);
                break;
            default: {
                // an occasional gate that stays on the full path
                Signal d = pick();
                out = (rng() & 1) ? a / d
                                  : b.dyn_select(a, b.select(d, 0, std::min(4u, d.width())),
                                                 1 + static_cast<std::uint32_t>(rng() % 4));
                break;
            }
        }
        if (out.width() > 64) continue;  // keep the arithmetic desk-sized
        consumed.push_back(false);
        pool.push_back(out);
        made += 1;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (consumed[i]) continue;
        b.circuit().signal(pool[i].id()).name_hint = "sink" + std::to_string(h.sinks.size());
        b.mark_output(pool[i]);
        h.sinks.push_back(pool[i]);
    }
    b.module_end();
    return h;
}

}  // namespace hgl::examples
