#include "hgl/gates.hpp"

#include <algorithm>

#include "hgl/sim.hpp"

namespace hgl {

namespace {

using WordVec = std::vector<std::uint64_t>;

const SignalData& in_sig(SimCore& sim, const Gate& g, std::size_t i) {
    return sim.sig(g.ins[i].signal);
}

Logic in_logic(SimCore& sim, const Gate& g, std::size_t i) {
    return in_sig(sim, g, i).current_logic();
}

int tri_bit(const SignalData& s) {
    if (s.cur_x[0] & 1) return 2;
    return static_cast<int>(s.cur_v[0] & 1);
}

Logic in_resized(SimCore& sim, const Gate& g, std::size_t i, std::uint32_t width) {
    const Reader& r = g.ins[i];
    return logic_resize(sim.sig(r.signal).current_logic(), width, r.type->is_signed());
}

std::uint32_t max_in_width(SimCore& sim, const Gate& g) {
    std::uint32_t w = 1;
    for (const Reader& r : g.ins) w = std::max(w, sim.sig(r.signal).width);
    return w;
}

// Loads the value plane of an input, extended to `width` bits by the edge
// type's signedness. Binary fast path only.
void load_ext(SimCore& sim, const Gate& g, std::size_t i, std::uint32_t width, WordVec& buf) {
    const Reader& r = g.ins[i];
    const SignalData& s = sim.sig(r.signal);
    std::size_t n = words::count(width);
    buf.assign(n, 0);
    std::copy(s.cur_v.begin(), s.cur_v.end(), buf.begin());
    if (r.type->is_signed() && width > s.width && words::bit(buf.data(), n, s.width - 1)) {
        for (std::uint32_t b = s.width; b < width; ++b) words::set_bit(buf.data(), b, true);
    }
    words::mask_tail(buf.data(), n, width);
}

bool all_ones(const WordVec& v, std::uint32_t width) {
    std::size_t n = words::count(width);
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (v[i] != ~std::uint64_t{0}) return false;
    return v[n - 1] == words::tail_mask(width);
}

bool parity(const WordVec& v) {
    std::uint64_t acc = 0;
    for (auto w : v) acc ^= w;
    return __builtin_popcountll(acc) & 1;
}

int signed_cmp_words(const WordVec& a, const WordVec& b, std::uint32_t width) {
    bool sa = words::bit(a.data(), a.size(), width - 1);
    bool sb = words::bit(b.data(), b.size(), width - 1);
    if (sa != sb) return sa ? -1 : 1;
    return words::ucmp(a.data(), a.size(), b.data(), b.size());
}

}  // namespace

EdgeState classify_edge(int prev, int cur, bool positive) {
    int from = positive ? 0 : 1;
    int to = positive ? 1 : 0;
    if (prev == from && cur == to) return EdgeState::Definite;
    bool prev_maybe = prev == from || prev == 2;
    bool cur_maybe = cur == to || cur == 2;
    if (prev_maybe && cur_maybe && (prev == 2 || cur == 2)) return EdgeState::Possible;
    return EdgeState::None;
}

// ---------------------------------------------------------------------------
// CombGate

void CombGate::eval_full(SimCore& sim) {
    Logic r(1);
    switch (kind) {
        case GateKind::Not:
            r = logic_not(in_logic(sim, *this, 0));
            break;
        case GateKind::And:
        case GateKind::Or:
        case GateKind::Xor: {
            std::uint32_t w = max_in_width(sim, *this);
            Logic a = in_resized(sim, *this, 0, w);
            Logic b = in_resized(sim, *this, 1, w);
            r = kind == GateKind::And ? logic_and(a, b)
                                      : (kind == GateKind::Or ? logic_or(a, b) : logic_xor(a, b));
            break;
        }
        case GateKind::LogicalNot:
            r = logic_not(logic_reduce(in_logic(sim, *this, 0), ReduceKind::Or));
            break;
        case GateKind::LogicalAnd:
        case GateKind::LogicalOr: {
            Logic a = logic_reduce(in_logic(sim, *this, 0), ReduceKind::Or);
            Logic b = logic_reduce(in_logic(sim, *this, 1), ReduceKind::Or);
            r = kind == GateKind::LogicalAnd ? logic_and(a, b) : logic_or(a, b);
            break;
        }
        case GateKind::ReduceAnd:
            r = logic_reduce(in_logic(sim, *this, 0), ReduceKind::And);
            break;
        case GateKind::ReduceOr:
            r = logic_reduce(in_logic(sim, *this, 0), ReduceKind::Or);
            break;
        case GateKind::ReduceXor:
            r = logic_reduce(in_logic(sim, *this, 0), ReduceKind::Xor);
            break;
        case GateKind::Add:
        case GateKind::Sub:
        case GateKind::Mul: {
            // operands widen to the result width first, so signed operands
            // keep their sign across the extra bits
            std::uint32_t ow = sim.sig(outs[0].signal).width;
            Logic a = in_resized(sim, *this, 0, ow);
            Logic b = in_resized(sim, *this, 1, ow);
            Logic wide = kind == GateKind::Add
                             ? logic_add(a, b)
                             : (kind == GateKind::Sub ? logic_sub(a, b) : logic_mul(a, b));
            r = logic_select(wide, 0, ow);
            break;
        }
        case GateKind::Div:
        case GateKind::Mod: {
            std::uint32_t w = max_in_width(sim, *this);
            auto [q, m] = logic_divmod(in_resized(sim, *this, 0, w), in_resized(sim, *this, 1, w));
            r = kind == GateKind::Div ? q : m;
            break;
        }
        case GateKind::Eq:
        case GateKind::Lt:
        case GateKind::Gt: {
            std::uint32_t w = max_in_width(sim, *this);
            Logic a = in_resized(sim, *this, 0, w);
            Logic b = in_resized(sim, *this, 1, w);
            if (kind == GateKind::Eq)
                r = logic_eq(a, b);
            else if (kind == GateKind::Lt)
                r = signed_cmp ? logic_lt_s(a, b) : logic_lt_u(a, b);
            else
                r = signed_cmp ? logic_gt_s(a, b) : logic_gt_u(a, b);
            break;
        }
        case GateKind::Cat: {
            std::vector<Logic> parts;
            parts.reserve(ins.size());
            for (std::size_t i = 0; i < ins.size(); ++i) parts.push_back(in_logic(sim, *this, i));
            r = logic_cat(parts);
            break;
        }
        default:
            throw Error(std::string("eval_full: bad comb gate kind ") + gate_kind_name(kind));
    }
    sim.out_full(*this, 0, r);
}

void CombGate::eval_fast(SimCore& sim) {
    const SignalData& out = sim.sig(outs[0].signal);
    std::uint32_t ow = out.width;
    WordVec& a = sim.scratch(0);
    WordVec& b = sim.scratch(1);
    WordVec& o = sim.scratch(2);
    std::size_t on = words::count(ow);

    auto emit = [&](const WordVec& v) { sim.out_fast(*this, 0, v.data(), on); };
    auto emit_bit = [&](bool bit) {
        o.assign(1, bit ? 1 : 0);
        emit(o);
    };

    switch (kind) {
        case GateKind::Not: {
            load_ext(sim, *this, 0, ow, a);
            o.resize(on);
            for (std::size_t i = 0; i < on; ++i) o[i] = ~a[i];
            words::mask_tail(o.data(), on, ow);
            emit(o);
            return;
        }
        case GateKind::And:
        case GateKind::Or:
        case GateKind::Xor: {
            load_ext(sim, *this, 0, ow, a);
            load_ext(sim, *this, 1, ow, b);
            o.resize(on);
            for (std::size_t i = 0; i < on; ++i)
                o[i] = kind == GateKind::And ? (a[i] & b[i])
                                             : (kind == GateKind::Or ? (a[i] | b[i]) : (a[i] ^ b[i]));
            emit(o);
            return;
        }
        case GateKind::LogicalNot: {
            const SignalData& s = in_sig(sim, *this, 0);
            emit_bit(!words::any(s.cur_v.data(), s.cur_v.size()));
            return;
        }
        case GateKind::LogicalAnd:
        case GateKind::LogicalOr: {
            bool ba = words::any(in_sig(sim, *this, 0).cur_v.data(),
                                 in_sig(sim, *this, 0).cur_v.size());
            bool bb = words::any(in_sig(sim, *this, 1).cur_v.data(),
                                 in_sig(sim, *this, 1).cur_v.size());
            emit_bit(kind == GateKind::LogicalAnd ? (ba && bb) : (ba || bb));
            return;
        }
        case GateKind::ReduceAnd: {
            const SignalData& s = in_sig(sim, *this, 0);
            load_ext(sim, *this, 0, s.width, a);
            emit_bit(all_ones(a, s.width));
            return;
        }
        case GateKind::ReduceOr: {
            const SignalData& s = in_sig(sim, *this, 0);
            emit_bit(words::any(s.cur_v.data(), s.cur_v.size()));
            return;
        }
        case GateKind::ReduceXor: {
            const SignalData& s = in_sig(sim, *this, 0);
            emit_bit(parity(s.cur_v));
            return;
        }
        case GateKind::Add:
        case GateKind::Sub:
        case GateKind::Mul: {
            load_ext(sim, *this, 0, ow, a);
            load_ext(sim, *this, 1, ow, b);
            o.assign(on, 0);
            if (kind == GateKind::Add)
                words::add(a.data(), a.size(), b.data(), b.size(), o.data(), ow);
            else if (kind == GateKind::Sub)
                words::sub(a.data(), a.size(), b.data(), b.size(), o.data(), ow);
            else
                words::mul(a.data(), a.size(), b.data(), b.size(), o.data(), ow);
            emit(o);
            return;
        }
        case GateKind::Div:
        case GateKind::Mod: {
            // binary-only strategy: divide-by-zero projects to zero
            std::uint32_t w = max_in_width(sim, *this);
            load_ext(sim, *this, 0, w, a);
            load_ext(sim, *this, 1, w, b);
            WordVec& r2 = sim.scratch(3);
            o.assign(words::count(w), 0);
            r2.assign(words::count(w), 0);
            if (words::any(b.data(), b.size()))
                words::divmod(a.data(), b.data(), o.data(), r2.data(), w);
            emit(kind == GateKind::Div ? o : r2);
            return;
        }
        case GateKind::Eq:
        case GateKind::Lt:
        case GateKind::Gt: {
            std::uint32_t w = max_in_width(sim, *this);
            load_ext(sim, *this, 0, w, a);
            load_ext(sim, *this, 1, w, b);
            int c = signed_cmp ? signed_cmp_words(a, b, w)
                               : words::ucmp(a.data(), a.size(), b.data(), b.size());
            emit_bit(kind == GateKind::Eq ? c == 0 : (kind == GateKind::Lt ? c < 0 : c > 0));
            return;
        }
        case GateKind::Cat: {
            o.assign(on, 0);
            std::uint32_t pos = 0;
            for (std::size_t i = 0; i < ins.size(); ++i) {
                const SignalData& s = in_sig(sim, *this, i);
                words::blit(o.data(), pos, s.cur_v.data(), s.cur_v.size(), 0, s.width);
                pos += s.width;
            }
            emit(o);
            return;
        }
        default:
            throw Error(std::string("eval_fast: bad comb gate kind ") + gate_kind_name(kind));
    }
}

// ---------------------------------------------------------------------------
// Select / DynSelect / Split

void SelectGate::on_freeze(Circuit& c) {
    const SignalData& s = c.signal(ins[0].signal);
    if (std::uint64_t{low} + count > s.width) always_full = true;
}

void SelectGate::eval_full(SimCore& sim) {
    sim.out_full(*this, 0, logic_select(in_logic(sim, *this, 0), low, count));
}

void SelectGate::eval_fast(SimCore& sim) {
    const SignalData& s = in_sig(sim, *this, 0);
    WordVec& o = sim.scratch(0);
    std::size_t on = words::count(count);
    o.assign(on, 0);
    std::uint32_t avail = low < s.width ? std::min(count, s.width - low) : 0;
    if (avail) words::blit(o.data(), 0, s.cur_v.data(), s.cur_v.size(), low, avail);
    sim.out_fast(*this, 0, o.data(), on);
}

void DynSelectGate::eval_full(SimCore& sim) {
    sim.out_full(*this, 0,
                 logic_dyn_select(in_logic(sim, *this, 0), in_logic(sim, *this, 1), count));
}

void DynSelectGate::eval_fast(SimCore& sim) {
    const SignalData& s = in_sig(sim, *this, 0);
    const SignalData& ix = in_sig(sim, *this, 1);
    WordVec& o = sim.scratch(0);
    std::size_t on = words::count(count);
    o.assign(on, 0);
    std::uint64_t idx = ix.cur_v.empty() ? 0 : ix.cur_v[0];
    bool huge = false;
    for (std::size_t i = 1; i < ix.cur_v.size(); ++i) huge = huge || ix.cur_v[i];
    if (!huge && idx < s.width) {
        std::uint32_t avail = std::min<std::uint64_t>(count, s.width - idx);
        words::blit(o.data(), 0, s.cur_v.data(), s.cur_v.size(), static_cast<std::uint32_t>(idx),
                    avail);
    }
    sim.out_fast(*this, 0, o.data(), on);
}

void SplitGate::eval_full(SimCore& sim) {
    Logic a = in_logic(sim, *this, 0);
    for (std::size_t i = 0; i < outs.size(); ++i)
        sim.out_full(*this, i, logic_select(a, static_cast<std::uint32_t>(i), 1));
}

void SplitGate::eval_fast(SimCore& sim) {
    const SignalData& s = in_sig(sim, *this, 0);
    for (std::size_t i = 0; i < outs.size(); ++i) {
        std::uint64_t bit = words::bit(s.cur_v.data(), s.cur_v.size(),
                                       static_cast<std::uint32_t>(i))
                                ? 1u
                                : 0u;
        sim.out_fast(*this, i, &bit, 1);
    }
}

// ---------------------------------------------------------------------------
// NetGate: priority assignment resolution

Logic NetGate::test_eval3(SimCore& sim, const CondTest& t) const {
    Logic s = sim.sig(ins[t.in_index].signal).current_logic();
    Logic r(1);
    switch (t.kind) {
        case CondTest::Kind::Truthy:
            return logic_reduce(s, ReduceKind::Or);
        case CondTest::Kind::NotTruthy:
            return logic_not(logic_reduce(s, ReduceKind::Or));
        case CondTest::Kind::EqLit:
            r = logic_eq(s, t.lit);
            break;
        case CondTest::Kind::MatchPat:
            r = t.pat->match(s);
            break;
    }
    return t.negate ? logic_not(r) : r;
}

bool NetGate::test_eval2(SimCore& sim, const CondTest& t) const {
    const SignalData& s = sim.sig(ins[t.in_index].signal);
    bool r = false;
    switch (t.kind) {
        case CondTest::Kind::Truthy:
            return words::any(s.cur_v.data(), s.cur_v.size());
        case CondTest::Kind::NotTruthy:
            return !words::any(s.cur_v.data(), s.cur_v.size());
        case CondTest::Kind::EqLit: {
            r = true;
            for (std::size_t i = 0; i < s.cur_v.size(); ++i)
                if (s.cur_v[i] != t.lit.v_word(i)) r = false;
            break;
        }
        case CondTest::Kind::MatchPat: {
            const auto& care = t.pat->care_words();
            const auto& val = t.pat->value_words();
            r = true;
            for (std::size_t i = 0; i < s.cur_v.size(); ++i)
                if ((s.cur_v[i] ^ val[i]) & care[i]) r = false;
            break;
        }
    }
    return t.negate ? !r : r;
}

Logic NetGate::fold_full(SimCore& sim, const Logic& fallback) const {
    std::uint32_t w = fallback.width();
    for (std::uint32_t subj : unique_subject_ins)
        if (sim.sig(ins[subj].signal).x_nonzero()) return Logic::all_x(w);

    Logic acc = fallback;
    for (const MuxEntry& e : entries) {
        Logic c = Logic::from_uint(1, 1);
        for (const CondTest& t : e.tests) {
            c = logic_and(c, test_eval3(sim, t));
            if (c.is_zero()) break;
        }
        if (c.is_zero()) continue;

        std::uint32_t slice_w = e.slice.kind == MuxSlice::Kind::Whole ? w : e.slice.count;
        bool tgt_signed = outs[0].type->is_signed() && e.slice.kind == MuxSlice::Kind::Whole;
        Logic value = logic_resize(sim.sig(ins[e.value_in].signal).current_logic(), slice_w,
                                   tgt_signed || ins[e.value_in].type->is_signed());
        Logic candidate(w);
        switch (e.slice.kind) {
            case MuxSlice::Kind::Whole:
                candidate = value;
                break;
            case MuxSlice::Kind::Static:
                candidate = logic_insert(acc, e.slice.low, value);
                break;
            case MuxSlice::Kind::Dyn:
                candidate = logic_dyn_insert(
                    acc, sim.sig(ins[e.slice.idx_in].signal).current_logic(), value);
                break;
        }
        if (!c.has_x())
            acc = candidate;  // condition is definite 1
        else
            acc = logic_merge(acc, candidate);
    }
    return acc;
}

void NetGate::fold_fast(SimCore& sim, std::vector<std::uint64_t>& acc) const {
    const SignalData& out = sim.sig(outs[0].signal);
    std::uint32_t w = out.width;
    for (const MuxEntry& e : entries) {
        bool take = true;
        for (const CondTest& t : e.tests)
            if (!test_eval2(sim, t)) {
                take = false;
                break;
            }
        if (!take) continue;

        std::uint32_t slice_w = e.slice.kind == MuxSlice::Kind::Whole ? w : e.slice.count;
        WordVec& val = sim.scratch(3);
        load_ext(sim, *this, e.value_in, slice_w, val);
        switch (e.slice.kind) {
            case MuxSlice::Kind::Whole:
                std::copy(val.begin(), val.end(), acc.begin());
                break;
            case MuxSlice::Kind::Static: {
                std::uint32_t avail =
                    e.slice.low < w ? std::min(slice_w, w - e.slice.low) : 0;
                if (avail)
                    words::blit(acc.data(), e.slice.low, val.data(), val.size(), 0, avail);
                break;
            }
            case MuxSlice::Kind::Dyn: {
                const SignalData& ix = sim.sig(ins[e.slice.idx_in].signal);
                std::uint64_t idx = ix.cur_v.empty() ? 0 : ix.cur_v[0];
                bool huge = false;
                for (std::size_t i = 1; i < ix.cur_v.size(); ++i) huge = huge || ix.cur_v[i];
                if (huge || idx >= w) break;
                std::uint32_t avail = std::min<std::uint64_t>(slice_w, w - idx);
                words::blit(acc.data(), static_cast<std::uint32_t>(idx), val.data(), val.size(),
                            0, avail);
                break;
            }
        }
    }
    words::mask_tail(acc.data(), acc.size(), w);
}

void NetGate::on_freeze(Circuit& c) {
    (void)c;
    for (MuxEntry& e : entries)
        for (CondTest& t : e.tests) {
            if (t.sym_enum) {
                t.lit = t.sym_enum->code(t.sym_state);
                t.kind = CondTest::Kind::EqLit;
                t.sym_enum = nullptr;
            }
            // An X bit inside a case label can turn a binary subject into an
            // X condition, which the fast path cannot represent.
            if (t.kind == CondTest::Kind::EqLit && t.lit.has_x()) always_full = true;
        }
}

// ---------------------------------------------------------------------------
// MuxGate (combinational wire)

void MuxGate::on_freeze(Circuit& c) {
    if (sym_default_enum) {
        default_value = sym_default_enum->code(sym_default_state);
        has_default = true;
        sym_default_enum = nullptr;
    }
    std::uint32_t w = c.signal(outs[0].signal).width;
    if (!has_default) default_value = Logic::all_x(w);
    if (default_value.width() != w)
        default_value = logic_resize(default_value, w, outs[0].type->is_signed());
    if (default_value.has_x()) always_full = true;
    NetGate::on_freeze(c);
}

void MuxGate::eval_full(SimCore& sim) {
    sim.out_full(*this, 0, fold_full(sim, default_value));
}

void MuxGate::eval_fast(SimCore& sim) {
    WordVec& acc = sim.scratch(2);
    acc = default_value.v_words();
    fold_fast(sim, acc);
    sim.out_fast(*this, 0, acc.data(), acc.size());
}

// ---------------------------------------------------------------------------
// RegGate

void RegGate::on_freeze(Circuit& c) {
    if (sym_reset_enum) {
        reset_value = sym_reset_enum->code(sym_reset_state);
        sym_reset_enum = nullptr;
    }
    SignalData& out = c.signal(outs[0].signal);
    if (reset_value.width() != out.width)
        reset_value = logic_resize(reset_value, out.width, outs[0].type->is_signed());
    // power-on state equals the reset state
    out.init = reset_value;
    out.cur_v = reset_value.v_words();
    out.cur_x = reset_value.x_words();
    NetGate::on_freeze(c);
}

void RegGate::on_sim_reset(SimCore& sim) { prev_clk = tri_bit(sim.sig(ins[0].signal)); }

void RegGate::eval_full(SimCore& sim) {
    int cur = tri_bit(sim.sig(ins[0].signal));
    int prev = prev_clk;
    prev_clk = cur;

    int rst = -1;
    if (has_reset) rst = tri_bit(sim.sig(ins[1].signal));
    int active = rst_level ? 1 : 0;
    if (has_reset && async_reset && rst == active) {
        sim.out_full(*this, 0, reset_value);
        return;
    }

    EdgeState e = classify_edge(prev, cur, clk_pos);
    bool possible_reset = has_reset && async_reset && rst == 2;
    if (e == EdgeState::None && !possible_reset) return;

    Logic hold = sim.sig(outs[0].signal).current_logic();
    Logic next = hold;
    if (e == EdgeState::Definite) {
        if (has_reset && !async_reset && rst == active)
            next = reset_value;
        else {
            next = fold_full(sim, hold);
            if (has_reset && !async_reset && rst == 2) next = logic_merge(next, reset_value);
        }
    } else if (e == EdgeState::Possible) {
        next = logic_merge(hold, fold_full(sim, hold));
    }
    if (possible_reset) next = logic_merge(next, reset_value);
    sim.out_full(*this, 0, next);
}

void RegGate::eval_fast(SimCore& sim) {
    // binary-only strategy: value planes decide everything
    const SignalData& clk = sim.sig(ins[0].signal);
    int cur = static_cast<int>(clk.cur_v[0] & 1);
    int prev = prev_clk;
    prev_clk = cur;

    const SignalData& out = sim.sig(outs[0].signal);
    int active = rst_level ? 1 : 0;
    if (has_reset) {
        const SignalData& rst = sim.sig(ins[1].signal);
        int r = static_cast<int>(rst.cur_v[0] & 1);
        if (r == active && (async_reset || (prev == (clk_pos ? 0 : 1) && cur == (clk_pos ? 1 : 0)))) {
            sim.out_fast(*this, 0, reset_value.v_data(), reset_value.word_count());
            return;
        }
    }
    if (prev != (clk_pos ? 0 : 1) || cur != (clk_pos ? 1 : 0)) return;
    WordVec& acc = sim.scratch(2);
    acc = out.cur_v;
    fold_fast(sim, acc);
    sim.out_fast(*this, 0, acc.data(), acc.size());
}

// ---------------------------------------------------------------------------
// LatchGate

void LatchGate::eval_full(SimCore& sim) {
    int en = tri_bit(sim.sig(ins[0].signal));
    if (en == 0) return;  // opaque: hold
    Logic hold = sim.sig(outs[0].signal).current_logic();
    Logic data = fold_full(sim, hold);
    sim.out_full(*this, 0, en == 1 ? data : logic_merge(hold, data));
}

void LatchGate::eval_fast(SimCore& sim) {
    const SignalData& en = sim.sig(ins[0].signal);
    if (!(en.cur_v[0] & 1)) return;
    const SignalData& out = sim.sig(outs[0].signal);
    WordVec& acc = sim.scratch(2);
    acc = out.cur_v;
    fold_fast(sim, acc);
    sim.out_fast(*this, 0, acc.data(), acc.size());
}

// ---------------------------------------------------------------------------
// TriGate

void TriGate::eval_full(SimCore& sim) {
    std::uint32_t w = sim.sig(outs[0].signal).width;
    int en = tri_bit(sim.sig(ins[0].signal));
    // undriven reads X; an unknown enable cannot be distinguished from it
    Logic next = en == 1 ? fold_full(sim, Logic::all_x(w)) : Logic::all_x(w);
    sim.out_full(*this, 0, next);
}

void TriGate::eval_fast(SimCore& sim) {
    const SignalData& en = sim.sig(ins[0].signal);
    std::uint32_t w = sim.sig(outs[0].signal).width;
    WordVec& acc = sim.scratch(2);
    acc.assign(words::count(w), 0);
    if (en.cur_v[0] & 1) fold_fast(sim, acc);
    sim.out_fast(*this, 0, acc.data(), acc.size());
}

// ---------------------------------------------------------------------------
// Memory ports

void MemReadGate::eval_full(SimCore& sim) {
    std::uint32_t w = sim.sig(outs[0].signal).width;
    const SignalData& addr = sim.sig(ins[0].signal);
    std::size_t nwords = ins.size() - 1;
    if (addr.x_nonzero()) {
        sim.out_full(*this, 0, Logic::all_x(w));
        return;
    }
    std::uint64_t idx = addr.cur_v[0];
    bool huge = false;
    for (std::size_t i = 1; i < addr.cur_v.size(); ++i) huge = huge || addr.cur_v[i];
    if (huge || idx >= nwords) {
        sim.out_full(*this, 0, Logic::all_x(w));
        return;
    }
    sim.out_full(*this, 0, in_logic(sim, *this, 1 + static_cast<std::size_t>(idx)));
}

void MemReadGate::eval_fast(SimCore& sim) {
    std::uint32_t w = sim.sig(outs[0].signal).width;
    const SignalData& addr = sim.sig(ins[0].signal);
    std::size_t nwords = ins.size() - 1;
    WordVec& o = sim.scratch(0);
    o.assign(words::count(w), 0);
    std::uint64_t idx = addr.cur_v[0];
    bool huge = false;
    for (std::size_t i = 1; i < addr.cur_v.size(); ++i) huge = huge || addr.cur_v[i];
    if (!huge && idx < nwords) o = in_sig(sim, *this, 1 + static_cast<std::size_t>(idx)).cur_v;
    sim.out_fast(*this, 0, o.data(), o.size());
}

void MemWriteGate::on_sim_reset(SimCore& sim) { prev_clk = tri_bit(sim.sig(ins[0].signal)); }

void MemWriteGate::eval_full(SimCore& sim) {
    int cur = tri_bit(sim.sig(ins[0].signal));
    int prev = prev_clk;
    prev_clk = cur;
    EdgeState e = classify_edge(prev, cur, clk_pos);
    if (e == EdgeState::None) return;

    int en = tri_bit(sim.sig(ins[1].signal));
    if (en == 0) return;
    const SignalData& addr = sim.sig(ins[2].signal);
    Logic data = in_logic(sim, *this, 3);
    bool soft = e == EdgeState::Possible || en == 2;

    auto write_word = [&](std::size_t word_idx, bool merge) {
        Logic old = sim.sig(outs[word_idx].signal).current_logic();
        Logic d = logic_resize(data, old.width(), false);
        sim.out_full(*this, word_idx, merge ? logic_merge(old, d) : d);
    };

    if (addr.x_nonzero()) {
        for (std::size_t i = 0; i < outs.size(); ++i) write_word(i, true);
        return;
    }
    std::uint64_t idx = addr.cur_v[0];
    bool huge = false;
    for (std::size_t i = 1; i < addr.cur_v.size(); ++i) huge = huge || addr.cur_v[i];
    if (huge || idx >= outs.size()) return;  // out-of-range write is dropped
    write_word(static_cast<std::size_t>(idx), soft);
}

void MemWriteGate::eval_fast(SimCore& sim) {
    const SignalData& clk = sim.sig(ins[0].signal);
    int cur = static_cast<int>(clk.cur_v[0] & 1);
    int prev = prev_clk;
    prev_clk = cur;
    if (prev != (clk_pos ? 0 : 1) || cur != (clk_pos ? 1 : 0)) return;
    if (!(sim.sig(ins[1].signal).cur_v[0] & 1)) return;
    const SignalData& addr = sim.sig(ins[2].signal);
    std::uint64_t idx = addr.cur_v[0];
    bool huge = false;
    for (std::size_t i = 1; i < addr.cur_v.size(); ++i) huge = huge || addr.cur_v[i];
    if (huge || idx >= outs.size()) return;
    const SignalData& data = sim.sig(ins[3].signal);
    std::uint32_t w = sim.sig(outs[idx].signal).width;
    WordVec& o = sim.scratch(0);
    load_ext(sim, *this, 3, w, o);
    (void)data;
    sim.out_fast(*this, static_cast<std::size_t>(idx), o.data(), o.size());
}

// ---------------------------------------------------------------------------
// AliasGate

void AliasGate::eval_full(SimCore& sim) { sim.out_full(*this, 0, in_logic(sim, *this, 0)); }

void AliasGate::eval_fast(SimCore& sim) {
    const SignalData& s = in_sig(sim, *this, 0);
    sim.out_fast(*this, 0, s.cur_v.data(), s.cur_v.size());
}

}  // namespace hgl
