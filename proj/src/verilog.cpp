#include "hgl/verilog.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace hgl {

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_';
        out += ok ? c : '_';
    }
    if (out.empty() || (out[0] >= '0' && out[0] <= '9')) out = "n" + out;
    return out;
}

std::string literal_text(const Logic& v) {
    std::string bits;
    for (std::uint32_t i = v.width(); i-- > 0;) {
        int b = v.bit(i);
        bits += b == 2 ? 'x' : static_cast<char>('0' + b);
    }
    return std::to_string(v.width()) + "'b" + bits;
}

std::string width_decl(std::uint32_t w) {
    return w == 1 ? "" : "[" + std::to_string(w - 1) + ":0] ";
}

class Emitter {
public:
    Emitter(const Circuit& c, ModuleId top) : c_(c), top_(top) {
        if (!c.frozen()) throw Error("Verilog emission requires a frozen circuit");
        name_modules(top);
    }

    std::vector<VerilogUnit> run() {
        emit_module(top_);
        return std::move(units_);
    }

private:
    // ----- global module naming -------------------------------------------
    void name_modules(ModuleId m) {
        std::string base = sanitize(c_.module(m).name);
        int& n = module_name_use_[base];
        module_names_[m] = n == 0 ? base : base + "_" + std::to_string(n);
        n += 1;
        for (ModuleId child : c_.module(m).children) name_modules(child);
    }

    // ----- per-module state -------------------------------------------------
    struct Scope {
        std::map<SignalId, std::string> names;
        std::map<std::string, int> used;
        std::string claim(const std::string& base_raw) {
            std::string base = sanitize(base_raw);
            int& n = used[base];
            std::string name = n == 0 ? base : base + "_" + std::to_string(n);
            n += 1;
            return name;
        }
    };

    bool const_inline(SignalId s) const {
        const SignalData& sd = c_.signal(s);
        return !sd.writer && sd.name_hint.empty();
    }

    std::string ref(SignalId s) {
        if (const_inline(s)) {
            const SignalData& sd = c_.signal(s);
            if (sd.type->kind == SignalType::Kind::Enum)
                return enum_state_name(sd.type->enum_def, sd.current_logic());
            return literal_text(sd.current_logic());
        }
        auto it = scope_.names.find(s);
        if (it != scope_.names.end()) {
            used_idents_->push_back(it->second);
            return it->second;
        }
        throw Error("emission: signal s" + std::to_string(s) + " ('" +
                    c_.signal(s).name_hint + "') is not visible in module " + unit_->name);
    }

    // Extension/truncation of a signal reference to a target width.
    std::string ext_ref(SignalId s, std::uint32_t to_w, bool is_signed) {
        const SignalData& sd = c_.signal(s);
        if (const_inline(s)) {
            if (sd.type->kind == SignalType::Kind::Enum && to_w == sd.width)
                return enum_state_name(sd.type->enum_def, sd.current_logic());
            return literal_text(logic_resize(sd.current_logic(), to_w, is_signed));
        }
        std::string r = ref(s);
        if (to_w == sd.width) return r;
        if (to_w < sd.width)
            return r + "[" + std::to_string(to_w - 1) + ":0]";
        std::uint32_t k = to_w - sd.width;
        if (is_signed)
            return "{{" + std::to_string(k) + "{" + r + "[" + std::to_string(sd.width - 1) +
                   "]}}, " + r + "}";
        return "{{" + std::to_string(k) + "{1'b0}}, " + r + "}";
    }

    std::string ext_edge(const Reader& r, std::uint32_t to_w) {
        return ext_ref(r.signal, to_w, r.type->is_signed());
    }

    std::string enum_state_name(const std::shared_ptr<EnumDef>& def, const Logic& code) {
        auto& names = enum_names_[def.get()];
        if (names.empty()) {
            for (std::size_t i = 0; i < def->state_count(); ++i) {
                std::string n = scope_.claim(def->states()[i]);
                names.push_back(n);
                unit_->localparams.push_back(
                    "localparam " + width_decl(def->width()) + n + " = " +
                    literal_text(def->code(i)) + ";");
            }
        }
        for (std::size_t i = 0; i < def->state_count(); ++i)
            if (def->code(i) == code) return names[i];
        return literal_text(code);
    }

    // Renders a literal, as a state name when the tested edge is enum-typed.
    std::string case_value_text(const Reader& edge, const Logic& lit) {
        if (edge.type->kind == SignalType::Kind::Enum)
            return enum_state_name(edge.type->enum_def, lit);
        return literal_text(lit);
    }

    std::string test_text(const NetGate& g, const CondTest& t) {
        const Reader& edge = g.ins[t.in_index];
        const SignalData& sd = c_.signal(edge.signal);
        switch (t.kind) {
            case CondTest::Kind::Truthy:
                return sd.width == 1 ? ref(edge.signal) : "(|" + ref(edge.signal) + ")";
            case CondTest::Kind::NotTruthy:
                return sd.width == 1 ? "!" + ref(edge.signal)
                                     : "!(|" + ref(edge.signal) + ")";
            case CondTest::Kind::EqLit:
                return "(" + ref(edge.signal) + (t.negate ? " != " : " == ") +
                       case_value_text(edge, t.lit) + ")";
            case CondTest::Kind::MatchPat: {
                Logic care = Logic::from_planes(sd.width, t.pat->care_words(), {});
                Logic val = Logic::from_planes(sd.width, t.pat->value_words(), {});
                return "((" + ref(edge.signal) + " & " + literal_text(care) + ")" +
                       (t.negate ? " != " : " == ") + literal_text(val) + ")";
            }
        }
        return "1'b1";
    }

    std::string conds_text(const NetGate& g, const MuxEntry& e) {
        std::string out;
        for (const CondTest& t : e.tests) {
            if (!out.empty()) out += " && ";
            out += test_text(g, t);
        }
        return out;
    }

    // One recorded assignment line inside an always block.
    std::string entry_line(const NetGate& g, const MuxEntry& e, const std::string& lhs,
                           std::uint32_t lhs_width, bool nonblocking) {
        std::uint32_t slice_w =
            e.slice.kind == MuxSlice::Kind::Whole ? lhs_width : e.slice.count;
        std::string target = lhs;
        if (e.slice.kind == MuxSlice::Kind::Static) {
            target += "[" + std::to_string(e.slice.low + e.slice.count - 1) + ":" +
                      std::to_string(e.slice.low) + "]";
        } else if (e.slice.kind == MuxSlice::Kind::Dyn) {
            target += "[" + ref(g.ins[e.slice.idx_in].signal) +
                      " +: " + std::to_string(e.slice.count) + "]";
        }
        std::string rhs = ext_edge(g.ins[e.value_in], slice_w);
        std::string line = target + (nonblocking ? " <= " : " = ") + rhs + ";";
        std::string conds = conds_text(g, e);
        if (!conds.empty()) line = "if (" + conds + ") " + line;
        return line;
    }

    // ----- gate emission -----------------------------------------------------
    void emit_assign(SignalId out, std::string rhs, std::uint32_t rhs_width) {
        VerilogUnit::Assign a;
        a.lhs = ref(out);
        a.width = c_.signal(out).width;
        a.rhs = std::move(rhs);
        a.rhs_width = rhs_width;
        a.idents = take_idents();
        unit_->assigns.push_back(std::move(a));
    }

    std::vector<std::string> take_idents() {
        std::vector<std::string> v = std::move(*used_idents_);
        used_idents_->clear();
        return v;
    }

    void emit_comb(const CombGate& g) {
        SignalId out = g.outs[0].signal;
        std::uint32_t ow = c_.signal(out).width;
        auto bin = [&](const char* op, std::uint32_t w) {
            return ext_edge(g.ins[0], w) + " " + op + " " + ext_edge(g.ins[1], w);
        };
        std::string rhs;
        std::uint32_t rw = ow;
        switch (g.kind) {
            case GateKind::Not: rhs = "~" + ext_edge(g.ins[0], ow); break;
            case GateKind::And: rhs = bin("&", ow); break;
            case GateKind::Or: rhs = bin("|", ow); break;
            case GateKind::Xor: rhs = bin("^", ow); break;
            case GateKind::Add: rhs = bin("+", ow); break;
            case GateKind::Sub: rhs = bin("-", ow); break;
            case GateKind::Mul: rhs = bin("*", ow); break;
            case GateKind::Div: rhs = bin("/", ow); break;
            case GateKind::Mod: rhs = bin("%", ow); break;
            case GateKind::LogicalNot:
                rhs = "!(|" + ref(g.ins[0].signal) + ")";
                rw = 1;
                break;
            case GateKind::LogicalAnd:
            case GateKind::LogicalOr:
                rhs = "(|" + ref(g.ins[0].signal) + ") " +
                      (g.kind == GateKind::LogicalAnd ? "&&" : "||") + " (|" +
                      ref(g.ins[1].signal) + ")";
                rw = 1;
                break;
            case GateKind::ReduceAnd: rhs = "&" + ref(g.ins[0].signal); rw = 1; break;
            case GateKind::ReduceOr: rhs = "|" + ref(g.ins[0].signal); rw = 1; break;
            case GateKind::ReduceXor: rhs = "^" + ref(g.ins[0].signal); rw = 1; break;
            case GateKind::Eq:
            case GateKind::Lt:
            case GateKind::Gt: {
                std::uint32_t w = 1;
                for (const Reader& r : g.ins) w = std::max(w, c_.signal(r.signal).width);
                const char* op = g.kind == GateKind::Eq ? "==" : (g.kind == GateKind::Lt ? "<" : ">");
                std::string a = ext_edge(g.ins[0], w), b = ext_edge(g.ins[1], w);
                if (g.signed_cmp)
                    rhs = "$signed(" + a + ") " + op + " $signed(" + b + ")";
                else
                    rhs = a + " " + std::string(op) + " " + b;
                rw = 1;
                break;
            }
            case GateKind::Cat: {
                rhs = "{";
                for (std::size_t i = g.ins.size(); i-- > 0;) {
                    rhs += ref(g.ins[i].signal);
                    if (i) rhs += ", ";
                }
                rhs += "}";
                break;
            }
            default:
                throw Error(std::string("emission: unsupported comb gate ") + g.describe());
        }
        emit_assign(out, std::move(rhs), rw);
    }

    void emit_select(const SelectGate& g) {
        const SignalData& in = c_.signal(g.ins[0].signal);
        SignalId out = g.outs[0].signal;
        std::uint32_t avail = g.low < in.width ? std::min(g.count, in.width - g.low) : 0;
        std::string rhs;
        if (avail == 0) {
            rhs = literal_text(Logic::all_x(g.count));
        } else {
            std::string slice = ref(g.ins[0].signal);
            if (!(g.low == 0 && avail == in.width)) {
                slice += avail == 1 && g.low + 1 <= in.width
                             ? "[" + std::to_string(g.low) + "]"
                             : "[" + std::to_string(g.low + avail - 1) + ":" +
                                   std::to_string(g.low) + "]";
            }
            if (avail < g.count)
                rhs = "{" + literal_text(Logic::all_x(g.count - avail)) + ", " + slice + "}";
            else
                rhs = slice;
        }
        emit_assign(out, std::move(rhs), g.count);
    }

    void emit_split(const SplitGate& g) {
        for (std::size_t i = 0; i < g.outs.size(); ++i) {
            std::string rhs = ref(g.ins[0].signal) + "[" + std::to_string(i) + "]";
            emit_assign(g.outs[i].signal, std::move(rhs), 1);
        }
    }

    void emit_mux(const MuxGate& g) {
        SignalId out = g.outs[0].signal;
        std::uint32_t w = c_.signal(out).width;
        // a single unconditional whole assignment is a plain wire
        if (g.entries.size() == 1 && g.entries[0].tests.empty() &&
            g.entries[0].slice.kind == MuxSlice::Kind::Whole) {
            emit_assign(out, ext_edge(g.ins[g.entries[0].value_in], w), w);
            return;
        }
        if (!g.unique_subject_ins.empty() && emit_unique_case(g)) return;

        VerilogUnit::AlwaysBlock blk;
        blk.header = "always @*";
        std::string lhs = ref(out);
        blk.targets.push_back(lhs);
        blk.lines.push_back(lhs + " = " + literal_text(g.default_value) + ";");
        for (const MuxEntry& e : g.entries) blk.lines.push_back(entry_line(g, e, lhs, w, false));
        blk.idents = take_idents();
        unit_->always.push_back(std::move(blk));
        mark_reg(out);
    }

    // `unique case` form when every entry leads with an equality on the same
    // subject; groups entries by their case label, keeping recorded order.
    bool emit_unique_case(const MuxGate& g) {
        SignalId subject = c_.signal(g.ins[g.unique_subject_ins[0]].signal).id;
        for (const MuxEntry& e : g.entries) {
            if (e.tests.empty()) return false;
            const CondTest& t = e.tests.front();
            if (t.kind != CondTest::Kind::EqLit || t.negate) return false;
            if (g.ins[t.in_index].signal != subject) return false;
        }
        SignalId out = g.outs[0].signal;
        std::uint32_t w = c_.signal(out).width;
        std::string lhs = ref(out);
        VerilogUnit::AlwaysBlock blk;
        blk.header = "always @*";
        blk.targets.push_back(lhs);

        std::vector<std::pair<std::string, std::vector<std::string>>> arms;
        for (const MuxEntry& e : g.entries) {
            const CondTest& head = e.tests.front();
            std::string label = case_value_text(g.ins[head.in_index], head.lit);
            MuxEntry rest = e;
            rest.tests.erase(rest.tests.begin());
            std::string line = entry_line(g, rest, lhs, w, false);
            auto it = std::find_if(arms.begin(), arms.end(),
                                   [&](const auto& a) { return a.first == label; });
            if (it == arms.end())
                arms.push_back({label, {line}});
            else
                it->second.push_back(line);
        }
        blk.lines.push_back("unique case (" + ref(subject) + ")");
        for (auto& [label, lines] : arms) {
            blk.lines.push_back("  " + label + ": begin");
            blk.lines.push_back("    " + lhs + " = " + literal_text(g.default_value) + ";");
            for (const std::string& l : lines) blk.lines.push_back("    " + l);
            blk.lines.push_back("  end");
        }
        blk.lines.push_back("  default: " + lhs + " = " + literal_text(g.default_value) + ";");
        blk.lines.push_back("endcase");
        blk.idents = take_idents();
        unit_->always.push_back(std::move(blk));
        mark_reg(out);
        return true;
    }

    void emit_reg(const RegGate& g) {
        SignalId out = g.outs[0].signal;
        std::uint32_t w = c_.signal(out).width;
        std::string lhs = ref(out);
        std::string clk = ref(g.ins[0].signal);
        VerilogUnit::AlwaysBlock blk;
        blk.targets.push_back(lhs);

        std::string hdr = std::string("always @(") + (g.clk_pos ? "posedge " : "negedge ") + clk;
        std::string rst;
        if (g.has_reset) {
            rst = ref(g.ins[1].signal);
            if (g.async_reset) hdr += std::string(" or ") + (g.rst_level ? "posedge " : "negedge ") + rst;
        }
        hdr += ")";
        blk.header = hdr;

        std::string reset_lit = c_.signal(out).type->kind == SignalType::Kind::Enum
                                    ? enum_state_name(c_.signal(out).type->enum_def,
                                                      g.reset_value)
                                    : literal_text(g.reset_value);
        std::vector<std::string>* body = &blk.lines;
        if (g.has_reset) {
            std::string cond = g.rst_level ? rst : "!" + rst;
            blk.lines.push_back("if (" + cond + ") " + lhs + " <= " + reset_lit + ";");
            blk.lines.push_back("else begin");
            for (const MuxEntry& e : g.entries)
                blk.lines.push_back("  " + entry_line(g, e, lhs, w, true));
            blk.lines.push_back("end");
        } else {
            for (const MuxEntry& e : g.entries)
                body->push_back(entry_line(g, e, lhs, w, true));
        }
        blk.idents = take_idents();
        unit_->always.push_back(std::move(blk));
        mark_reg(out);
    }

    void emit_latch(const LatchGate& g) {
        SignalId out = g.outs[0].signal;
        std::uint32_t w = c_.signal(out).width;
        std::string lhs = ref(out);
        VerilogUnit::AlwaysBlock blk;
        blk.header = "always @*";
        blk.targets.push_back(lhs);
        blk.lines.push_back("if (" + ref(g.ins[0].signal) + ") begin");
        for (const MuxEntry& e : g.entries)
            blk.lines.push_back("  " + entry_line(g, e, lhs, w, false));
        blk.lines.push_back("end");
        blk.idents = take_idents();
        unit_->always.push_back(std::move(blk));
        mark_reg(out);
    }

    void emit_tri(const TriGate& g) {
        SignalId out = g.outs[0].signal;
        std::uint32_t w = c_.signal(out).width;
        // nested ternary, later assignments taking priority
        std::string rhs = std::to_string(w) + "'bx";
        for (const MuxEntry& e : g.entries) {
            if (e.slice.kind != MuxSlice::Kind::Whole)
                throw Error("tri-state emission supports whole-signal assignments only");
            std::string v = ext_edge(g.ins[e.value_in], w);
            std::string conds = conds_text(g, e);
            rhs = conds.empty() ? v : "(" + conds + ") ? " + v + " : (" + rhs + ")";
        }
        rhs = ref(g.ins[0].signal) + " ? " + rhs + " : " + std::to_string(w) + "'bz";
        emit_assign(out, std::move(rhs), w);
    }

    void emit_mem_read(const MemReadGate& g) {
        SignalId out = g.outs[0].signal;
        std::uint32_t w = c_.signal(out).width;
        const SignalData& addr = c_.signal(g.ins[0].signal);
        std::string rhs = std::to_string(w) + "'bx";
        for (std::size_t i = g.ins.size() - 1; i >= 1; --i) {
            std::string idx = std::to_string(addr.width) + "'d" + std::to_string(i - 1);
            rhs = "(" + ref(addr.id) + " == " + idx + ") ? " + ref(g.ins[i].signal) + " : (" +
                  rhs + ")";
        }
        emit_assign(out, std::move(rhs), w);
    }

    void emit_mem_write(const MemWriteGate& g) {
        VerilogUnit::AlwaysBlock blk;
        blk.header = std::string("always @(") + (g.clk_pos ? "posedge " : "negedge ") +
                     ref(g.ins[0].signal) + ")";
        const SignalData& addr = c_.signal(g.ins[2].signal);
        blk.lines.push_back("if (" + ref(g.ins[1].signal) + ") begin");
        blk.lines.push_back("  case (" + ref(addr.id) + ")");
        for (std::size_t i = 0; i < g.outs.size(); ++i) {
            std::string lhs = ref(g.outs[i].signal);
            blk.targets.push_back(lhs);
            std::uint32_t w = c_.signal(g.outs[i].signal).width;
            blk.lines.push_back("    " + std::to_string(addr.width) + "'d" + std::to_string(i) +
                                ": " + lhs + " <= " + ext_edge(g.ins[3], w) + ";");
        }
        blk.lines.push_back("    default: ;");
        blk.lines.push_back("  endcase");
        blk.lines.push_back("end");
        blk.idents = take_idents();
        for (const Writer& wr : g.outs) mark_reg(wr.signal);
        unit_->always.push_back(std::move(blk));
    }

    void mark_reg(SignalId s) {
        for (auto& n : unit_->nets)
            if (n.name == scope_.names[s]) n.is_reg = true;
    }

    // ----- module emission -----------------------------------------------------
    bool read_inside(SignalId s, ModuleId m) const {
        for (GateId g : c_.signal(s).reader_gates)
            if (c_.inside(c_.gate(g).owner, m)) return true;
        return false;
    }

    std::vector<Port> unit_ports(ModuleId m) {
        std::vector<Port> ports = c_.module(m).ports;
        if (m != top_) return ports;
        // top-level emission: named loose ends become ports
        auto has = [&](SignalId s) {
            for (const Port& p : ports)
                if (p.signal == s) return true;
            return false;
        };
        for (SignalId s : c_.module(m).signals) {
            const SignalData& sd = c_.signal(s);
            if (sd.name_hint.empty() || has(s)) continue;
            if (!sd.writer && read_inside(s, m))
                ports.push_back(Port{s, true});
            else if (sd.writer && !read_inside(s, m))
                ports.push_back(Port{s, false});
        }
        return ports;
    }

    // Port names as the module's own unit will claim them (ports first,
    // claimed in order from a fresh namespace).
    std::vector<std::string> claimed_port_names(ModuleId m) {
        Scope s;
        std::vector<std::string> out;
        for (const Port& p : c_.module(m).ports) {
            const SignalData& sd = c_.signal(p.signal);
            out.push_back(
                s.claim(sd.name_hint.empty() ? "s" + std::to_string(sd.id) : sd.name_hint));
        }
        return out;
    }

    void emit_module(ModuleId m) {
        units_.emplace_back();
        std::size_t unit_index = units_.size() - 1;
        VerilogUnit& unit = units_[unit_index];
        unit.name = module_names_[m];

        scope_ = Scope{};
        unit_ = &unit;
        std::vector<std::string> idents;
        used_idents_ = &idents;
        enum_names_.clear();

        std::vector<Port> ports = unit_ports(m);
        for (const Port& p : ports) {
            const SignalData& s = c_.signal(p.signal);
            std::string name = scope_.claim(s.name_hint.empty() ? "s" + std::to_string(s.id)
                                                                : s.name_hint);
            scope_.names[p.signal] = name;
            unit.ports.push_back(VerilogUnit::PortDecl{name, p.is_input, s.width});
            unit.nets.push_back(VerilogUnit::NetDecl{name, s.width, false, true});
        }
        auto declare = [&](SignalId s) {
            if (scope_.names.count(s) || const_inline(s)) return;
            const SignalData& sd = c_.signal(s);
            std::string name =
                scope_.claim(sd.name_hint.empty() ? "t" + std::to_string(anon_counter_++)
                                                  : sd.name_hint);
            scope_.names[s] = name;
            unit.nets.push_back(VerilogUnit::NetDecl{name, sd.width, false, false});
        };
        anon_counter_ = 0;
        for (SignalId s : c_.module(m).signals) declare(s);
        for (ModuleId child : c_.module(m).children)
            for (const Port& p : c_.module(child).ports) declare(p.signal);

        // undriven named signals with a declared value read it constantly
        for (SignalId s : c_.module(m).signals) {
            const SignalData& sd = c_.signal(s);
            bool is_port = false;
            for (const Port& p : ports) is_port = is_port || p.signal == s;
            if (is_port || sd.writer || sd.name_hint.empty() || sd.init.is_all_x()) continue;
            if (sd.reader_gates.empty() && !sd.tracked) continue;
            emit_assign(s, literal_text(sd.init), sd.width);
        }

        for (GateId gid : c_.module(m).gates) {
            const Gate& g = c_.gate(gid);
            switch (g.kind) {
                case GateKind::Mux: emit_mux(static_cast<const MuxGate&>(g)); break;
                case GateKind::Reg: emit_reg(static_cast<const RegGate&>(g)); break;
                case GateKind::Latch: emit_latch(static_cast<const LatchGate&>(g)); break;
                case GateKind::Tri: emit_tri(static_cast<const TriGate&>(g)); break;
                case GateKind::Select: emit_select(static_cast<const SelectGate&>(g)); break;
                case GateKind::DynSelect: {
                    SignalId out = g.outs[0].signal;
                    auto& ds = static_cast<const DynSelectGate&>(g);
                    std::string rhs = ref(g.ins[0].signal) + "[" + ref(g.ins[1].signal) +
                                      " +: " + std::to_string(ds.count) + "]";
                    emit_assign(out, std::move(rhs), ds.count);
                    break;
                }
                case GateKind::Split: emit_split(static_cast<const SplitGate&>(g)); break;
                case GateKind::Alias:
                    emit_assign(g.outs[0].signal, ref(g.ins[0].signal),
                                c_.signal(g.ins[0].signal).width);
                    break;
                case GateKind::MemRead: emit_mem_read(static_cast<const MemReadGate&>(g)); break;
                case GateKind::MemWrite:
                    emit_mem_write(static_cast<const MemWriteGate&>(g));
                    break;
                default: emit_comb(static_cast<const CombGate&>(g)); break;
            }
        }

        for (ModuleId child : c_.module(m).children) {
            VerilogUnit::Instance inst;
            inst.module_name = module_names_[child];
            inst.inst_name = "u_" + module_names_[child];
            std::vector<std::string> port_names = claimed_port_names(child);
            const auto& child_ports = c_.module(child).ports;
            for (std::size_t i = 0; i < child_ports.size(); ++i) {
                const SignalData& sd = c_.signal(child_ports[i].signal);
                inst.conns.emplace_back(port_names[i], ref(child_ports[i].signal), sd.width);
            }
            inst.idents = take_idents();
            unit.instances.push_back(std::move(inst));
        }

        // recurse after finishing this unit's state
        std::vector<ModuleId> children = c_.module(m).children;
        for (ModuleId child : children) emit_module(child);
    }

    const Circuit& c_;
    ModuleId top_;
    std::vector<VerilogUnit> units_;
    std::map<ModuleId, std::string> module_names_;
    std::map<std::string, int> module_name_use_;
    Scope scope_;
    VerilogUnit* unit_ = nullptr;
    std::vector<std::string>* used_idents_ = nullptr;
    std::map<const EnumDef*, std::vector<std::string>> enum_names_;
    int anon_counter_ = 0;
};

}  // namespace

std::string VerilogUnit::render() const {
    std::ostringstream os;
    os << "module " << name << " (\n";
    for (std::size_t i = 0; i < ports.size(); ++i) {
        const PortDecl& p = ports[i];
        bool is_reg = false;
        for (const NetDecl& n : nets)
            if (n.name == p.name) is_reg = n.is_reg;
        os << "  " << (p.is_input ? "input  wire " : (is_reg ? "output reg  " : "output wire "))
           << width_decl(p.width) << p.name << (i + 1 < ports.size() ? "," : "") << "\n";
    }
    os << ");\n";
    for (const std::string& lp : localparams) os << "  " << lp << "\n";
    for (const NetDecl& n : nets) {
        if (n.is_port) continue;
        os << "  " << (n.is_reg ? "reg  " : "wire ") << width_decl(n.width) << n.name << ";\n";
    }
    for (const Assign& a : assigns) os << "  assign " << a.lhs << " = " << a.rhs << ";\n";
    for (const AlwaysBlock& b : always) {
        os << "  " << b.header << " begin\n";
        for (const std::string& line : b.lines) os << "    " << line << "\n";
        os << "  end\n";
    }
    for (const Instance& inst : instances) {
        os << "  " << inst.module_name << " " << inst.inst_name << " (\n";
        for (std::size_t i = 0; i < inst.conns.size(); ++i) {
            const auto& [port, expr, width] = inst.conns[i];
            (void)width;
            os << "    ." << port << "(" << expr << ")" << (i + 1 < inst.conns.size() ? "," : "")
               << "\n";
        }
        os << "  );\n";
    }
    os << "endmodule\n";
    return os.str();
}

std::vector<VerilogUnit> emit_verilog_units(const Circuit& c, ModuleId top) {
    Emitter e(c, top);
    return e.run();
}

std::string emit_verilog(const Circuit& c, ModuleId top) {
    std::string out;
    auto units = emit_verilog_units(c, top);
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i) out += "\n";
        out += units[i].render();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lint

std::vector<std::string> lint_verilog(const std::vector<VerilogUnit>& units) {
    std::vector<std::string> probs;
    std::map<std::string, const VerilogUnit*> by_name;
    for (const VerilogUnit& u : units) {
        if (by_name.count(u.name)) probs.push_back("duplicate module name " + u.name);
        by_name[u.name] = &u;
    }
    for (const VerilogUnit& u : units) {
        std::map<std::string, int> declared;
        for (const auto& n : u.nets) declared[n.name] += 1;
        for (const auto& [name, count] : declared)
            if (count > 1)
                probs.push_back(u.name + ": identifier '" + name + "' declared " +
                                std::to_string(count) + " times");
        auto check_ident = [&](const std::string& id, const char* where) {
            if (!declared.count(id))
                probs.push_back(u.name + ": undeclared identifier '" + id + "' in " + where);
        };
        std::map<std::string, int> drivers;
        for (const auto& a : u.assigns) {
            check_ident(a.lhs, "assign lhs");
            for (const auto& id : a.idents)
                if (id != a.lhs) check_ident(id, "assign rhs");
            drivers[a.lhs] += 1;
            if (a.width != a.rhs_width)
                probs.push_back(u.name + ": assign to '" + a.lhs + "' width " +
                                std::to_string(a.width) + " from width " +
                                std::to_string(a.rhs_width));
        }
        for (const auto& b : u.always) {
            std::set<std::string> targets(b.targets.begin(), b.targets.end());
            for (const auto& t : targets) {
                check_ident(t, "always target");
                drivers[t] += 1;
            }
            for (const auto& id : b.idents) check_ident(id, "always block");
        }
        for (const auto& inst : u.instances) {
            auto it = by_name.find(inst.module_name);
            if (it == by_name.end()) {
                probs.push_back(u.name + ": instance of unknown module " + inst.module_name);
                continue;
            }
            const VerilogUnit& child = *it->second;
            for (const auto& [port, expr, width] : inst.conns) {
                const VerilogUnit::PortDecl* pd = nullptr;
                for (const auto& p : child.ports)
                    if (p.name == port) pd = &p;
                if (!pd) {
                    probs.push_back(u.name + ": connection to unknown port " +
                                    inst.module_name + "." + port);
                    continue;
                }
                if (pd->width != width)
                    probs.push_back(u.name + ": port width mismatch on " + inst.module_name +
                                    "." + port);
                bool is_literal = expr.find('\'') != std::string::npos;
                if (!is_literal) {
                    check_ident(expr, "instance connection");
                    if (!pd->is_input) drivers[expr] += 1;
                }
            }
        }
        for (const auto& [name, count] : drivers)
            if (count > 1)
                probs.push_back(u.name + ": net '" + name + "' has " + std::to_string(count) +
                                " drivers");
    }
    return probs;
}

}  // namespace hgl
