#include "hgl/builder.hpp"

#include <algorithm>

namespace hgl {

SignalId Signal::id() const {
    if (!b_) throw Error("use of an empty signal handle");
    return id_;
}

std::uint32_t Signal::width() const { return builder().circuit().signal(id()).width; }

TypeRef Signal::type() const { return builder().circuit().signal(id()).type; }

Builder& Signal::builder() const {
    if (!b_) throw Error("use of an empty signal handle");
    return *b_;
}

// ---------------------------------------------------------------------------
// HArray

HArray HArray::list(std::vector<HArray> items) {
    HArray a;
    a.names_.resize(items.size());
    a.items_ = std::move(items);
    return a;
}

HArray HArray::bundle(std::vector<std::pair<std::string, HArray>> fields) {
    HArray a;
    for (auto& [name, item] : fields) {
        a.names_.push_back(name);
        a.items_.push_back(std::move(item));
    }
    return a;
}

Signal HArray::sig() const {
    if (!is_leaf_) throw Error("array is not a leaf");
    return leaf_;
}

HArray& HArray::at(std::size_t i) {
    if (is_leaf_ || i >= items_.size()) throw Error("array index out of range");
    return items_[i];
}

const HArray& HArray::at(std::size_t i) const {
    if (is_leaf_ || i >= items_.size()) throw Error("array index out of range");
    return items_[i];
}

HArray& HArray::field(const std::string& name) {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return items_[i];
    throw Error("no array field named '" + name + "'");
}

const HArray& HArray::field(const std::string& name) const {
    return const_cast<HArray*>(this)->field(name);
}

HArray HArray::slice(std::ptrdiff_t from, std::ptrdiff_t to) const {
    if (is_leaf_) throw Error("cannot slice a leaf");
    auto n = static_cast<std::ptrdiff_t>(items_.size());
    if (from < 0) from += n;
    if (to < 0) to += n;
    from = std::clamp<std::ptrdiff_t>(from, 0, n);
    to = std::clamp<std::ptrdiff_t>(to, 0, n);
    HArray out;
    for (std::ptrdiff_t i = from; i < to; ++i) {
        out.items_.push_back(items_[i]);
        out.names_.push_back(names_[i]);
    }
    return out;
}

HArray HArray::col(const std::string& name) const {
    if (is_leaf_) throw Error("cannot column-select a leaf");
    HArray out;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        out.items_.push_back(items_[i].field(name));
        out.names_.push_back(names_[i]);
    }
    return out;
}

std::vector<Signal> HArray::leaves() const {
    std::vector<Signal> out;
    std::function<void(const HArray&)> rec = [&](const HArray& a) {
        if (a.is_leaf())
            out.push_back(a.leaf_);
        else
            for (const auto& i : a.items_) rec(i);
    };
    rec(*this);
    return out;
}

// ---------------------------------------------------------------------------
// ParamNode

std::shared_ptr<ParamNode> ParamNode::matcher(const std::string& pattern) {
    for (auto& [p, n] : matchers_)
        if (p == pattern) return n;
    auto n = std::make_shared<ParamNode>();
    matchers_.emplace_back(pattern, n);
    return n;
}

bool ParamNode::pattern_match(const std::string& pattern, const std::string& name) {
    std::size_t star = pattern.find('*');
    if (star == std::string::npos) return pattern == name;
    std::string pre = pattern.substr(0, star), post = pattern.substr(star + 1);
    return name.size() >= pre.size() + post.size() && name.compare(0, pre.size(), pre) == 0 &&
           name.compare(name.size() - post.size(), post.size(), post) == 0;
}

// ---------------------------------------------------------------------------
// Builder

Builder::Builder(Circuit& c) : c_(c) { param_scopes_.push_back({}); }

Signal Builder::sig_uint(std::uint32_t w, const std::string& name) {
    return Signal(this, c_.add_signal(w, SignalType::uint_t(w), name));
}

Signal Builder::sig_uint(std::uint32_t w, const std::string& name, std::uint64_t init) {
    return Signal(this, c_.add_signal(w, SignalType::uint_t(w), name, Logic::from_uint(init, w)));
}

Signal Builder::sig_sint(std::uint32_t w, const std::string& name, std::int64_t init) {
    Logic l = logic_resize(Logic::from_uint(static_cast<std::uint64_t>(init) &
                                                (w >= 64 ? ~std::uint64_t{0}
                                                         : ((std::uint64_t{1} << w) - 1)),
                                            w),
                           w, true);
    return Signal(this, c_.add_signal(w, SignalType::sint_t(w), name, l));
}

Signal Builder::sig_typed(TypeRef type, const std::string& name, const Logic& init) {
    return Signal(this, c_.add_signal(init.width(), std::move(type), name, init));
}

Signal Builder::lit(const Logic& value) {
    return Signal(this, c_.add_signal(value.width(), SignalType::uint_t(value.width()), "",
                                      value));
}

Signal Builder::lit(std::uint64_t value, std::uint32_t w) { return lit(Logic::from_uint(value, w)); }

Signal Builder::enum_lit(const std::shared_ptr<EnumDef>& def, const std::string& state) {
    std::size_t idx = def->intern(state);
    SignalId s = c_.add_enum_signal(def, "");
    SignalData& sd = c_.signal(s);
    sd.sym_enum = def;
    sd.sym_state = idx;
    sd.sym_init = true;
    return Signal(this, s);
}

// --- netlists ---------------------------------------------------------------

Signal Builder::wire(std::uint32_t w, const std::string& name) { return sig_uint(w, name); }

Signal Builder::wire(std::uint32_t w, const std::string& name, const Logic& init) {
    return Signal(this, c_.add_signal(w, SignalType::uint_t(w), name, init));
}

Signal Builder::reg(std::uint32_t w, const std::string& name, const Logic& init) {
    return reg_typed(SignalType::uint_t(w), name, init);
}

Signal Builder::reg_typed(TypeRef type, const std::string& name, const Logic& init) {
    const ClockDomain& d = domain();
    auto rg = std::make_unique<RegGate>(d.clk_pos, default_delay);
    rg->has_reset = d.has_reset;
    rg->rst_level = d.rst_level;
    rg->async_reset = d.async_reset;
    rg->reset_value = init;
    GateId g = c_.add_gate(std::move(rg));
    c_.read(g, d.clock.id(), nullptr, d.clk_pos ? EdgeSense::Posedge : EdgeSense::Negedge);
    if (d.has_reset) c_.read(g, d.reset.id(), nullptr, EdgeSense::Level);
    SignalId out = c_.add_signal(init.width(), std::move(type), name, init);
    c_.write(g, out, nullptr);
    return Signal(this, out);
}

Signal Builder::reg_enum(const std::shared_ptr<EnumDef>& def, const std::string& name) {
    const ClockDomain& d = domain();
    auto rg = std::make_unique<RegGate>(d.clk_pos, default_delay);
    rg->has_reset = d.has_reset;
    rg->rst_level = d.rst_level;
    rg->async_reset = d.async_reset;
    rg->sym_reset_enum = def;
    rg->sym_reset_state = 0;  // registers reset to the first interned state
    GateId g = c_.add_gate(std::move(rg));
    c_.read(g, d.clock.id(), nullptr, d.clk_pos ? EdgeSense::Posedge : EdgeSense::Negedge);
    if (d.has_reset) c_.read(g, d.reset.id(), nullptr, EdgeSense::Level);
    SignalId out = c_.add_enum_signal(def, name);
    c_.write(g, out, nullptr);
    return Signal(this, out);
}

Signal Builder::latch(Signal enable, std::uint32_t w, const std::string& name) {
    auto lg = std::make_unique<LatchGate>(default_delay);
    GateId g = c_.add_gate(std::move(lg));
    c_.read(g, enable.id(), nullptr, EdgeSense::Level);
    SignalId out = c_.add_signal(w, SignalType::uint_t(w), name);
    c_.write(g, out, nullptr);
    c_.read(g, out, nullptr, EdgeSense::Passive);  // the hold path
    return Signal(this, out);
}

Signal Builder::wtri(Signal enable, Signal driver, const std::string& name) {
    auto tg = std::make_unique<TriGate>(default_delay);
    GateId gid = c_.add_gate(std::move(tg));
    c_.read(gid, enable.id(), nullptr, EdgeSense::Level);
    std::uint32_t w = driver.width();
    SignalId out = c_.add_signal(w, SignalType::uint_t(w), name);
    c_.write(gid, out, nullptr);
    auto* g = static_cast<TriGate*>(&c_.gate(gid));
    std::uint32_t vi = add_entry_edge(g, driver.id(), EdgeSense::Level, false);
    g->entries.push_back(MuxEntry{{}, MuxSlice{}, vi});
    return Signal(this, out);
}

// --- operators ----------------------------------------------------------------

Signal Builder::new_out(std::uint32_t w, bool is_signed, GateId g) {
    SignalId out =
        c_.add_signal(w, is_signed ? SignalType::sint_t(w) : SignalType::uint_t(w), "");
    c_.write(g, out, nullptr);
    return Signal(this, out);
}

Signal Builder::op2(GateKind kind, Signal a, Signal b) {
    std::uint32_t wa = a.width(), wb = b.width();
    std::uint32_t W = std::max(wa, wb);
    bool sa = a.type()->is_signed(), sb = b.type()->is_signed();
    bool both_signed = sa && sb;
    std::uint32_t out_w;
    bool out_signed = false;
    switch (kind) {
        case GateKind::And:
        case GateKind::Or:
        case GateKind::Xor:
            out_w = W;
            out_signed = both_signed;
            break;
        case GateKind::Add:
        case GateKind::Sub:
            out_w = W + 1;
            out_signed = both_signed;
            break;
        case GateKind::Mul:
            out_w = 2 * W;
            out_signed = both_signed;
            break;
        case GateKind::Div:
        case GateKind::Mod:
            out_w = W;
            out_signed = both_signed;
            break;
        case GateKind::Eq:
        case GateKind::Lt:
        case GateKind::Gt:
        case GateKind::LogicalAnd:
        case GateKind::LogicalOr:
            out_w = 1;
            break;
        default:
            throw Error(std::string("op2: unsupported gate kind ") + gate_kind_name(kind));
    }
    auto gate = std::make_unique<CombGate>(kind, default_delay);
    gate->signed_cmp = both_signed;
    if (kind == GateKind::Div || kind == GateKind::Mod) gate->always_full = true;
    GateId g = c_.add_gate(std::move(gate));
    c_.read(g, a.id(), nullptr, EdgeSense::Level);
    c_.read(g, b.id(), nullptr, EdgeSense::Level);
    return new_out(out_w, out_signed, g);
}

Signal Builder::op1(GateKind kind, Signal a) {
    std::uint32_t out_w;
    switch (kind) {
        case GateKind::Not:
            out_w = a.width();
            break;
        case GateKind::LogicalNot:
        case GateKind::ReduceAnd:
        case GateKind::ReduceOr:
        case GateKind::ReduceXor:
            out_w = 1;
            break;
        default:
            throw Error(std::string("op1: unsupported gate kind ") + gate_kind_name(kind));
    }
    auto gate = std::make_unique<CombGate>(kind, default_delay);
    GateId g = c_.add_gate(std::move(gate));
    c_.read(g, a.id(), nullptr, EdgeSense::Level);
    return new_out(out_w, kind == GateKind::Not && a.type()->is_signed(), g);
}

Signal Builder::eq(Signal a, Signal b) { return op2(GateKind::Eq, a, b); }
Signal Builder::ne(Signal a, Signal b) { return op1(GateKind::LogicalNot, eq(a, b)); }
Signal Builder::lt(Signal a, Signal b) { return op2(GateKind::Lt, a, b); }
Signal Builder::gt(Signal a, Signal b) { return op2(GateKind::Gt, a, b); }
Signal Builder::le(Signal a, Signal b) { return op1(GateKind::LogicalNot, gt(a, b)); }
Signal Builder::ge(Signal a, Signal b) { return op1(GateKind::LogicalNot, lt(a, b)); }
Signal Builder::reduce_or(Signal a) { return op1(GateKind::ReduceOr, a); }
Signal Builder::reduce_and(Signal a) { return op1(GateKind::ReduceAnd, a); }
Signal Builder::reduce_xor(Signal a) { return op1(GateKind::ReduceXor, a); }
Signal Builder::logical_not(Signal a) { return op1(GateKind::LogicalNot, a); }
Signal Builder::logical_and(Signal a, Signal b) { return op2(GateKind::LogicalAnd, a, b); }
Signal Builder::logical_or(Signal a, Signal b) { return op2(GateKind::LogicalOr, a, b); }

Signal Builder::cat(const std::vector<Signal>& parts) {
    if (parts.empty()) throw Error("cat of zero parts");
    std::uint32_t w = 0;
    for (const Signal& p : parts) w += p.width();
    auto gate = std::make_unique<CombGate>(GateKind::Cat, default_delay);
    GateId g = c_.add_gate(std::move(gate));
    for (const Signal& p : parts) c_.read(g, p.id(), nullptr, EdgeSense::Level);
    return new_out(w, false, g);
}

Signal Builder::select(Signal a, std::uint32_t low, std::uint32_t count) {
    if (count == 0) throw Error("select of zero bits");
    GateId g = c_.add_gate(std::make_unique<SelectGate>(low, count, default_delay));
    c_.read(g, a.id(), nullptr, EdgeSense::Level);
    return new_out(count, false, g);
}

Signal Builder::dyn_select(Signal a, Signal idx, std::uint32_t count) {
    if (count == 0) throw Error("select of zero bits");
    GateId g = c_.add_gate(std::make_unique<DynSelectGate>(count, default_delay));
    c_.read(g, a.id(), nullptr, EdgeSense::Level);
    c_.read(g, idx.id(), nullptr, EdgeSense::Level);
    return new_out(count, false, g);
}

HArray Builder::split(Signal a) {
    GateId g = c_.add_gate(std::make_unique<SplitGate>(default_delay));
    c_.read(g, a.id(), nullptr, EdgeSense::Level);
    std::vector<HArray> bits;
    for (std::uint32_t i = 0; i < a.width(); ++i) bits.push_back(HArray(new_out(1, false, g)));
    return HArray::list(std::move(bits));
}

Signal Builder::field(Signal a, const std::string& name) {
    TypeRef t = a.type();
    if (t->kind != SignalType::Kind::Struct)
        throw Error("field select on a non-struct signal");
    for (const StructField& f : t->fields) {
        if (f.name != name) continue;
        Signal s = select(a, f.offset, f.type->bit_width());
        c_.signal(s.id()).type = f.type;
        return s;
    }
    throw Error("struct has no field '" + name + "'");
}

// --- assignment ---------------------------------------------------------------

NetGate* Builder::target_net(Signal target) {
    SignalData& s = c_.signal(target.id());
    if (s.writer) {
        Gate& g = c_.gate(*s.writer);
        auto* net = dynamic_cast<NetGate*>(&g);
        if (!net)
            throw Error("cannot assign to expression output '" + s.name_hint + "'");
        return net;
    }
    auto mux = std::make_unique<MuxGate>(default_delay);
    if (s.sym_init) {
        mux->sym_default_enum = s.sym_enum;
        mux->sym_default_state = s.sym_state;
    } else {
        mux->default_value = s.init;
        mux->has_default = true;
    }
    GateId gid = c_.add_gate(std::move(mux));
    c_.write(gid, target.id(), nullptr);
    return static_cast<NetGate*>(&c_.gate(gid));
}

std::uint32_t Builder::add_entry_edge(NetGate* g, SignalId s, EdgeSense sense,
                                      bool target_signed) {
    const SignalData& sd = c_.signal(s);
    TypeRef t;
    if (sd.type->kind == SignalType::Kind::Enum)
        t = sd.type;  // width resolves at freeze
    else
        t = target_signed ? SignalType::sint_t(sd.width) : SignalType::uint_t(sd.width);
    c_.read(g->id, s, t, sense);
    return static_cast<std::uint32_t>(g->ins.size() - 1);
}

std::vector<CondTest> Builder::capture_tests(NetGate* g, EdgeSense sense) {
    std::vector<CondTest> tests;
    for (Frame& f : frames_) {
        if (!f.is_switch) {
            for (SignalId prior : f.when.prior) {
                CondTest t;
                t.kind = CondTest::Kind::NotTruthy;
                t.in_index = add_entry_edge(g, prior, sense, false);
                tests.push_back(std::move(t));
            }
            if (f.when.current) {
                CondTest t;
                t.kind = CondTest::Kind::Truthy;
                t.in_index = add_entry_edge(g, *f.when.current, sense, false);
                tests.push_back(std::move(t));
            }
        } else {
            SwitchFrame& sw = f.sw;
            if (!sw.current)
                throw Error("assignment inside a switch but outside any case");
            auto label_test = [&](const CaseLabel& label, bool negate) {
                CondTest t;
                t.in_index = add_entry_edge(g, sw.subject, sense, false);
                t.negate = negate;
                if (label.enum_idx) {
                    t.kind = CondTest::Kind::EqLit;
                    t.sym_enum = sw.enum_def;
                    t.sym_state = *label.enum_idx;
                } else if (label.pat) {
                    t.kind = CondTest::Kind::MatchPat;
                    t.pat = label.pat;
                } else {
                    t.kind = CondTest::Kind::EqLit;
                    t.lit = *label.lit;
                }
                tests.push_back(std::move(t));
            };
            if (sw.current->is_default) {
                for (const CaseLabel& seen : sw.seen) label_test(seen, true);
            } else {
                label_test(*sw.current, false);
                if (sw.unique) {
                    g->unique_subject_ins.push_back(tests.back().in_index);
                }
            }
        }
    }
    return tests;
}

void Builder::push_entry(Signal target, MuxSlice slice, SignalId value) {
    NetGate* g = target_net(target);
    EdgeSense sense = g->kind == GateKind::Reg ? EdgeSense::Passive : EdgeSense::Level;
    MuxEntry e;
    e.tests = capture_tests(g, sense);
    e.slice = slice;
    bool tgt_signed =
        slice.kind == MuxSlice::Kind::Whole && c_.signal(target.id()).type->is_signed();
    if (slice.kind == MuxSlice::Kind::Dyn) {
        // idx edge was reserved by the caller through slice.idx_in's signal id
        e.slice.idx_in = add_entry_edge(g, slice.idx_in, sense, false);
    }
    e.value_in = add_entry_edge(g, value, sense, tgt_signed);
    g->entries.push_back(std::move(e));
}

void Builder::assign(Signal target, Signal value) {
    push_entry(target, MuxSlice{}, value.id());
}

void Builder::assign(Signal target, std::uint64_t value) {
    const SignalData& s = c_.signal(target.id());
    if (s.type->kind == SignalType::Kind::Enum)
        throw Error("assign an enum state by name to '" + s.name_hint + "'");
    assign(target, lit(Logic::from_uint(value, s.width)));
}

void Builder::assign(Signal target, const Logic& value) { assign(target, lit(value)); }

void Builder::assign(Signal target, const std::string& enum_state) {
    const SignalData& s = c_.signal(target.id());
    if (s.type->kind != SignalType::Kind::Enum)
        throw Error("string assignment needs an enum-typed target");
    assign(target, enum_lit(s.type->enum_def, enum_state));
}

void Builder::assign_slice(Signal target, std::uint32_t low, std::uint32_t count,
                           Signal value) {
    if (count == 0) throw Error("slice assignment of zero bits");
    if (std::uint64_t{low} + count > target.width())
        throw Error("slice assignment out of range");
    MuxSlice sl;
    sl.kind = MuxSlice::Kind::Static;
    sl.low = low;
    sl.count = count;
    push_entry(target, sl, value.id());
}

void Builder::assign_dyn(Signal target, Signal idx, std::uint32_t count, Signal value) {
    if (count == 0) throw Error("dynamic assignment of zero bits");
    if (count > target.width()) throw Error("dynamic assignment wider than its target");
    MuxSlice sl;
    sl.kind = MuxSlice::Kind::Dyn;
    sl.count = count;
    sl.idx_in = idx.id();  // signal id; push_entry converts it to an edge index
    push_entry(target, sl, value.id());
}

// --- conditions ------------------------------------------------------------------

void Builder::when_begin(Signal cond) {
    Frame f;
    f.is_switch = false;
    f.when.current = cond.id();
    frames_.push_back(std::move(f));
}

void Builder::elsewhen(Signal cond) {
    if (frames_.empty() || frames_.back().is_switch || !frames_.back().when.current)
        throw Error("elsewhen without a matching when");
    WhenFrame& f = frames_.back().when;
    f.prior.push_back(*f.current);
    f.current = cond.id();
}

void Builder::otherwise() {
    if (frames_.empty() || frames_.back().is_switch || frames_.back().when.in_otherwise ||
        !frames_.back().when.current)
        throw Error("otherwise without a matching when");
    WhenFrame& f = frames_.back().when;
    f.prior.push_back(*f.current);
    f.current.reset();
    f.in_otherwise = true;
}

void Builder::when_end() {
    if (frames_.empty() || frames_.back().is_switch)
        throw Error("when_end without a matching when");
    frames_.pop_back();
}

void Builder::switch_begin(Signal subject, bool unique) {
    Frame f;
    f.is_switch = true;
    f.sw.subject = subject.id();
    f.sw.unique = unique;
    TypeRef t = subject.type();
    if (t->kind == SignalType::Kind::Enum) f.sw.enum_def = t->enum_def;
    frames_.push_back(std::move(f));
}

Builder::SwitchFrame* Builder::innermost_switch() {
    if (frames_.empty() || !frames_.back().is_switch)
        throw Error("case outside of a switch");
    return &frames_.back().sw;
}

void Builder::case_begin(const Logic& label) {
    SwitchFrame* sw = innermost_switch();
    const SignalData& subj = c_.signal(sw->subject);
    if (subj.type->kind != SignalType::Kind::Enum && label.width() != subj.width)
        throw Error("case label width mismatch: " + label.str() + " on " +
                    std::to_string(subj.width) + "-bit subject");
    if (sw->current && !sw->current->is_default) sw->seen.push_back(*sw->current);
    CaseLabel l;
    l.lit = label;
    sw->current = std::move(l);
}

void Builder::case_begin(const BitPat& label) {
    SwitchFrame* sw = innermost_switch();
    const SignalData& subj = c_.signal(sw->subject);
    if (subj.type->kind != SignalType::Kind::Enum && label.width() != subj.width)
        throw Error("case label width mismatch: " + label.str() + " on " +
                    std::to_string(subj.width) + "-bit subject");
    if (sw->current && !sw->current->is_default) sw->seen.push_back(*sw->current);
    CaseLabel l;
    l.pat = label;
    sw->current = std::move(l);
}

void Builder::case_begin(const std::string& enum_state) {
    SwitchFrame* sw = innermost_switch();
    if (!sw->enum_def) throw Error("state-name case on a non-enum subject");
    if (sw->current && !sw->current->is_default) sw->seen.push_back(*sw->current);
    CaseLabel l;
    l.enum_idx = sw->enum_def->intern(enum_state);
    sw->current = std::move(l);
}

void Builder::case_default() {
    SwitchFrame* sw = innermost_switch();
    if (sw->current && !sw->current->is_default) sw->seen.push_back(*sw->current);
    CaseLabel l;
    l.is_default = true;
    sw->current = std::move(l);
}

void Builder::switch_end() {
    if (frames_.empty() || !frames_.back().is_switch)
        throw Error("switch_end without a matching switch");
    frames_.pop_back();
}

// --- clock domains -----------------------------------------------------------------

ClockDomain Builder::make_domain(Signal clk, bool clk_pos, Signal rst, bool rst_level,
                                 bool async_reset) {
    if (clk.width() != 1) throw Error("clock must be 1 bit wide");
    ClockDomain d;
    d.clock = clk;
    d.clk_pos = clk_pos;
    d.has_reset = true;
    d.reset = rst;
    d.rst_level = rst_level;
    d.async_reset = async_reset;
    return d;
}

ClockDomain Builder::make_domain(Signal clk, bool clk_pos) {
    if (clk.width() != 1) throw Error("clock must be 1 bit wide");
    ClockDomain d;
    d.clock = clk;
    d.clk_pos = clk_pos;
    return d;
}

const ClockDomain& Builder::domain() {
    if (!domains_.empty()) return domains_.back();
    if (!default_domain_) {
        c_.scope_push(c_.root());
        Signal clk(this, c_.add_signal(1, SignalType::uint_t(1), "clk", Logic::zeros(1)));
        Signal rst(this, c_.add_signal(1, SignalType::uint_t(1), "rst_n", Logic::ones(1)));
        c_.scope_pop();
        default_domain_ = make_domain(clk, true, rst, false, true);
    }
    return *default_domain_;
}

// --- modules and parameters -----------------------------------------------------------

ModuleId Builder::module_begin(const std::string& name) {
    ModuleId m = c_.module_begin(name);
    ParamScope ns;
    for (auto scope = param_scopes_.rbegin(); scope != param_scopes_.rend(); ++scope)
        for (const auto& node : scope->nodes)
            for (const auto& [pattern, child] : node->matchers())
                if (ParamNode::pattern_match(pattern, name)) ns.nodes.push_back(child);
    param_scopes_.push_back(std::move(ns));
    return m;
}

void Builder::module_end() {
    c_.module_end();
    param_scopes_.pop_back();
}

void Builder::mark_input(Signal s) { c_.mark_port(s.id(), true); }
void Builder::mark_output(Signal s) { c_.mark_port(s.id(), false); }
void Builder::connect(Signal a, Signal b) { c_.connect(a.id(), b.id()); }

void Builder::set_config(std::shared_ptr<ParamNode> root) {
    param_scopes_.front().nodes.push_back(std::move(root));
}

std::optional<ParamValue> Builder::param(const std::string& key) const {
    for (auto scope = param_scopes_.rbegin(); scope != param_scopes_.rend(); ++scope)
        for (const auto& node : scope->nodes) {
            auto it = node->values().find(key);
            if (it != node->values().end()) return it->second;
        }
    return std::nullopt;
}

std::int64_t Builder::param_int(const std::string& key, std::int64_t fallback) const {
    auto v = param(key);
    if (!v) return fallback;
    if (auto* i = std::get_if<std::int64_t>(&*v)) return *i;
    throw Error("parameter '" + key + "' is not an integer");
}

// --- vectorized operations --------------------------------------------------------------

HArray Builder::vec_op(GateKind kind, const HArray& a, const HArray& b) {
    if (a.is_leaf() && b.is_leaf()) return HArray(op2(kind, a.sig(), b.sig()));
    if (a.is_leaf()) {
        HArray out;
        out.names_ = b.names_;
        for (std::size_t i = 0; i < b.size(); ++i) out.items_.push_back(vec_op(kind, a, b.at(i)));
        return out;
    }
    if (b.is_leaf()) {
        HArray out;
        out.names_ = a.names_;
        for (std::size_t i = 0; i < a.size(); ++i) out.items_.push_back(vec_op(kind, a.at(i), b));
        return out;
    }
    if (a.size() != b.size())
        throw Error("vectorized op shape mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
    HArray out;
    out.names_ = a.names_;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.items_.push_back(vec_op(kind, a.at(i), b.at(i)));
    return out;
}

void Builder::vec_assign(const HArray& target, const HArray& value) {
    if (target.is_leaf() && value.is_leaf()) {
        assign(target.sig(), value.sig());
        return;
    }
    if (target.is_leaf()) throw Error("vectorized assign shape mismatch");
    if (value.is_leaf()) {
        for (std::size_t i = 0; i < target.size(); ++i) vec_assign(target.at(i), value);
        return;
    }
    if (target.size() != value.size())
        throw Error("vectorized assign shape mismatch: " + std::to_string(target.size()) +
                    " vs " + std::to_string(value.size()));
    for (std::size_t i = 0; i < target.size(); ++i) vec_assign(target.at(i), value.at(i));
}

// --- memories ------------------------------------------------------------------------------

Builder::Mem Builder::mem(std::uint32_t elem_width, std::uint32_t n, const std::string& name) {
    Mem m;
    m.type = SignalType::mem_t(SignalType::uint_t(elem_width), {n});
    for (std::uint32_t i = 0; i < n; ++i)
        m.words.push_back(Signal(
            this, c_.add_signal(elem_width, SignalType::uint_t(elem_width),
                                name + "_" + std::to_string(i))));
    return m;
}

Signal Builder::mem_read(const Mem& m, Signal addr) {
    GateId g = c_.add_gate(std::make_unique<MemReadGate>(default_delay));
    c_.read(g, addr.id(), nullptr, EdgeSense::Level);
    for (const Signal& w : m.words) c_.read(g, w.id(), nullptr, EdgeSense::Level);
    return new_out(m.words.front().width(), false, g);
}

void Builder::mem_write(const Mem& m, Signal addr, Signal data, Signal en) {
    const ClockDomain& dom = domain();
    GateId g = c_.add_gate(std::make_unique<MemWriteGate>(dom.clk_pos, default_delay));
    c_.read(g, dom.clock.id(), nullptr, dom.clk_pos ? EdgeSense::Posedge : EdgeSense::Negedge);
    c_.read(g, en.id(), nullptr, EdgeSense::Passive);
    c_.read(g, addr.id(), nullptr, EdgeSense::Passive);
    c_.read(g, data.id(), nullptr, EdgeSense::Passive);
    for (const Signal& w : m.words) c_.write(g, w.id(), nullptr);
}

// --- operator sugar ----------------------------------------------------------------------

Signal operator&(Signal a, Signal b) { return a.builder().op2(GateKind::And, a, b); }
Signal operator|(Signal a, Signal b) { return a.builder().op2(GateKind::Or, a, b); }
Signal operator^(Signal a, Signal b) { return a.builder().op2(GateKind::Xor, a, b); }
Signal operator~(Signal a) { return a.builder().op1(GateKind::Not, a); }
Signal operator+(Signal a, Signal b) { return a.builder().op2(GateKind::Add, a, b); }
Signal operator-(Signal a, Signal b) { return a.builder().op2(GateKind::Sub, a, b); }
Signal operator*(Signal a, Signal b) { return a.builder().op2(GateKind::Mul, a, b); }
Signal operator/(Signal a, Signal b) { return a.builder().op2(GateKind::Div, a, b); }
Signal operator%(Signal a, Signal b) { return a.builder().op2(GateKind::Mod, a, b); }

}  // namespace hgl
