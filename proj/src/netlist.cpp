#include "hgl/netlist.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hgl/gates.hpp"

namespace hgl {

// ---------------------------------------------------------------------------
// EnumDef

std::size_t EnumDef::intern(const std::string& name) {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name) return i;
    if (frozen_) throw Error("enum is frozen; cannot intern new state '" + name + "'");
    states_.push_back(name);
    return states_.size() - 1;
}

std::optional<std::size_t> EnumDef::lookup(const std::string& name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name) return i;
    return std::nullopt;
}

void EnumDef::freeze() {
    if (frozen_) return;
    if (states_.empty()) throw Error("enum frozen with no states");
    std::size_t n = states_.size();
    if (encoding_ == Encoding::Onehot) {
        width_ = static_cast<std::uint32_t>(n);
    } else {
        std::uint32_t w = 1;
        while ((std::size_t{1} << w) < n) ++w;
        width_ = w;
    }
    frozen_ = true;
}

std::uint32_t EnumDef::width() const {
    if (!frozen_) throw Error("enum width queried before freeze");
    return width_;
}

Logic EnumDef::code(std::size_t index) const {
    if (!frozen_) throw Error("enum code queried before freeze");
    if (index >= states_.size()) throw Error("enum state index out of range");
    if (encoding_ == Encoding::Onehot) {
        Logic l(width_);
        l.set_bit(static_cast<std::uint32_t>(index), 1);
        return l;
    }
    std::uint64_t v = index;
    if (encoding_ == Encoding::Gray) v = v ^ (v >> 1);
    return Logic::from_uint(v, width_);
}

// ---------------------------------------------------------------------------
// SignalType

TypeRef SignalType::uint_t(std::uint32_t w) {
    auto t = std::make_shared<SignalType>();
    t->kind = Kind::UInt;
    t->width = w;
    return t;
}

TypeRef SignalType::sint_t(std::uint32_t w) {
    auto t = std::make_shared<SignalType>();
    t->kind = Kind::SInt;
    t->width = w;
    return t;
}

TypeRef SignalType::vector_t(TypeRef elem, std::uint32_t length) {
    auto t = std::make_shared<SignalType>();
    t->kind = Kind::Vector;
    t->elem = std::move(elem);
    t->length = length;
    t->width = t->elem->bit_width() * length;
    return t;
}

TypeRef SignalType::struct_t(std::vector<StructField> fields) {
    auto t = std::make_shared<SignalType>();
    t->kind = Kind::Struct;
    std::sort(fields.begin(), fields.end(),
              [](const StructField& a, const StructField& b) { return a.offset < b.offset; });
    std::uint32_t end = 0;
    for (const auto& f : fields) {
        if (f.offset < end)
            throw Error("struct fields overlap at '" + f.name + "'");
        end = f.offset + f.type->bit_width();
    }
    t->fields = std::move(fields);
    t->width = end ? end : 1;
    return t;
}

TypeRef SignalType::enum_t(std::shared_ptr<EnumDef> def) {
    auto t = std::make_shared<SignalType>();
    t->kind = Kind::Enum;
    t->enum_def = std::move(def);
    return t;
}

TypeRef SignalType::mem_t(TypeRef elem, std::vector<std::uint32_t> dims) {
    auto t = std::make_shared<SignalType>();
    t->kind = Kind::Mem;
    t->elem = std::move(elem);
    t->dims = std::move(dims);
    std::uint64_t total = t->elem->bit_width();
    for (auto d : t->dims) total *= d;
    t->width = static_cast<std::uint32_t>(total);
    return t;
}

std::uint32_t SignalType::bit_width() const {
    if (kind == Kind::Enum) return enum_def->width();
    return width;
}

// ---------------------------------------------------------------------------
// SignalData

void SignalData::set_current(const Logic& l) {
    if (l.width() != width) throw Error("set_current width mismatch");
    cur_v = l.v_words();
    cur_x = l.x_words();
}

// ---------------------------------------------------------------------------
// Circuit

const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Not: return "not";
        case GateKind::And: return "and";
        case GateKind::Or: return "or";
        case GateKind::Xor: return "xor";
        case GateKind::LogicalNot: return "lnot";
        case GateKind::LogicalAnd: return "land";
        case GateKind::LogicalOr: return "lor";
        case GateKind::ReduceAnd: return "rand";
        case GateKind::ReduceOr: return "ror";
        case GateKind::ReduceXor: return "rxor";
        case GateKind::Add: return "add";
        case GateKind::Sub: return "sub";
        case GateKind::Mul: return "mul";
        case GateKind::Div: return "div";
        case GateKind::Mod: return "mod";
        case GateKind::Eq: return "eq";
        case GateKind::Lt: return "lt";
        case GateKind::Gt: return "gt";
        case GateKind::Cat: return "cat";
        case GateKind::Select: return "select";
        case GateKind::DynSelect: return "dynselect";
        case GateKind::Split: return "split";
        case GateKind::Mux: return "mux";
        case GateKind::Reg: return "reg";
        case GateKind::Latch: return "latch";
        case GateKind::Tri: return "tri";
        case GateKind::MemRead: return "memread";
        case GateKind::MemWrite: return "memwrite";
        case GateKind::Alias: return "alias";
    }
    return "?";
}

Circuit::Circuit() {
    ModuleDef root;
    root.id = 0;
    root.name = "top";
    modules_.push_back(std::move(root));
    module_stack_.push_back(0);
}

SignalId Circuit::add_signal(std::uint32_t width, TypeRef type, std::string name_hint) {
    return add_signal(width, std::move(type), std::move(name_hint), Logic::all_x(width));
}

SignalId Circuit::add_signal(std::uint32_t width, TypeRef type, std::string name_hint,
                             const Logic& init) {
    if (frozen_) throw Error("cannot add signals to a frozen circuit");
    if (width == 0) throw Error("signal width must be >= 1");
    if (init.width() != width) throw Error("init width mismatch for '" + name_hint + "'");
    auto s = std::make_unique<SignalData>();
    s->id = static_cast<SignalId>(signals_.size());
    s->width = width;
    s->init = init;
    s->cur_v = init.v_words();
    s->cur_x = init.x_words();
    s->name_hint = std::move(name_hint);
    s->type = type ? std::move(type) : SignalType::uint_t(width);
    s->owner = module_stack_.back();
    modules_[s->owner].signals.push_back(s->id);
    signals_.push_back(std::move(s));
    return signals_.back()->id;
}

SignalId Circuit::add_enum_signal(std::shared_ptr<EnumDef> def, std::string name_hint) {
    SignalId id = add_signal(1, SignalType::enum_t(def), std::move(name_hint), Logic::all_x(1));
    register_enum(std::move(def));
    return id;
}

GateId Circuit::add_gate(std::unique_ptr<Gate> gate) {
    if (frozen_) throw Error("cannot add gates to a frozen circuit");
    gate->id = static_cast<GateId>(gates_.size());
    gate->owner = module_stack_.back();
    modules_[gate->owner].gates.push_back(gate->id);
    gates_.push_back(std::move(gate));
    return gates_.back()->id;
}

void Circuit::read(GateId gate, SignalId sig, TypeRef type, EdgeSense sense) {
    Gate& g = *gates_[gate];
    SignalData& s = *signals_[sig];
    if (!type) type = s.type;
    g.ins.push_back(Reader{sig, gate, type, sense});
    s.reader_gates.push_back(gate);
    if (sense != EdgeSense::Passive) s.sensitive_fanout.push_back(gate);
    if (s.x_nonzero()) g.x_count += 1;
}

void Circuit::write(GateId gate, SignalId sig, TypeRef type) {
    Gate& g = *gates_[gate];
    SignalData& s = *signals_[sig];
    if (s.writer) {
        const Gate& other = *gates_[*s.writer];
        throw Error("multiple drivers on signal '" + s.name_hint + "' (s" +
                    std::to_string(sig) + "): gate g" + std::to_string(other.id) + " (" +
                    other.describe() + ") and gate g" + std::to_string(gate) + " (" +
                    g.describe() + ")");
    }
    if (!type) type = s.type;
    s.writer = gate;
    g.outs.push_back(Writer{gate, sig, type});
}

void Circuit::connect(SignalId a, SignalId b) {
    if (frozen_) throw Error("cannot connect signals in a frozen circuit");
    connects_.emplace_back(a, b);
}

ModuleId Circuit::module_begin(const std::string& name) {
    if (frozen_) throw Error("cannot open modules in a frozen circuit");
    ModuleDef def;
    def.id = static_cast<ModuleId>(modules_.size());
    def.name = name;
    def.parent = module_stack_.back();
    modules_[def.parent].children.push_back(def.id);
    modules_.push_back(std::move(def));
    module_stack_.push_back(modules_.back().id);
    return modules_.back().id;
}

void Circuit::module_end() {
    if (module_stack_.size() <= 1) throw Error("module_end without module_begin");
    module_stack_.pop_back();
}

void Circuit::register_enum(std::shared_ptr<EnumDef> def) {
    for (const auto& e : enums_)
        if (e == def) return;
    enums_.push_back(std::move(def));
}

void Circuit::mark_port(SignalId s, bool is_input) {
    signals_[s]->port_mark = is_input ? 1 : 2;
}

bool Circuit::inside(ModuleId node, ModuleId ancestor) const {
    while (true) {
        if (node == ancestor) return true;
        if (node == 0) return false;
        node = modules_[node].parent;
    }
}

// ---------------------------------------------------------------------------
// Freeze

void Circuit::resolve_connects() {
    if (connects_.empty()) return;
    std::vector<SignalId> parent(signals_.size());
    for (SignalId i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](SignalId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : connects_) {
        if (signals_[a]->width != signals_[b]->width)
            throw Error("connect width mismatch: '" + signals_[a]->name_hint + "' vs '" +
                        signals_[b]->name_hint + "'");
        parent[find(a)] = find(b);
    }
    std::map<SignalId, std::vector<SignalId>> groups;
    for (auto [a, b] : connects_) {
        groups[find(a)];
        (void)b;
    }
    for (SignalId i = 0; i < parent.size(); ++i) {
        auto it = groups.find(find(i));
        if (it != groups.end()) it->second.push_back(i);
    }
    for (auto& [key, members] : groups) {
        (void)key;
        std::vector<SignalId> driven;
        for (SignalId s : members)
            if (signals_[s]->writer) driven.push_back(s);
        if (driven.size() > 1)
            throw Error("connect group has multiple drivers: '" +
                        signals_[driven[0]]->name_hint + "' and '" +
                        signals_[driven[1]]->name_hint + "'");
        if (driven.empty()) continue;
        SignalId d = driven[0];
        for (SignalId s : members) {
            if (s == d) continue;
            auto alias = std::make_unique<AliasGate>(0);
            Gate* raw = alias.get();
            // own the alias where the undriven end lives
            module_stack_.push_back(signals_[s]->owner);
            GateId gid = add_gate(std::move(alias));
            module_stack_.pop_back();
            (void)raw;
            read(gid, d, nullptr, EdgeSense::Level);
            write(gid, s, nullptr);
        }
    }
}

void Circuit::freeze_enums() {
    for (auto& def : enums_) def->freeze();
    for (auto& sp : signals_) {
        SignalData& s = *sp;
        if (s.type->kind == SignalType::Kind::Enum) {
            std::uint32_t w = s.type->enum_def->width();
            s.width = w;
            if (s.init.width() != w) s.init = Logic::all_x(w);
        }
        if (s.sym_init) s.init = s.sym_enum->code(s.sym_state);
        s.cur_v = s.init.v_words();
        s.cur_x = s.init.x_words();
    }
}

void Circuit::infer_ports() {
    struct Refs {
        std::vector<ModuleId> where;
        ModuleId driver = 0;
        bool driver_external = false;
        bool has_writer = false;
        bool ext_write = false, ext_read = false;
    };
    for (auto& m : modules_) m.ports.clear();
    for (auto& sp : signals_) {
        SignalData& s = *sp;
        Refs r;
        r.where.push_back(s.owner);
        if (s.writer) {
            r.has_writer = true;
            r.driver = gates_[*s.writer]->owner;
            r.where.push_back(r.driver);
        } else if (s.port_mark == 1) {
            r.driver_external = true;
        } else {
            r.driver = s.owner;
        }
        for (GateId g : s.reader_gates) r.where.push_back(gates_[g]->owner);

        if (s.port_mark == 0) {
            for (GateId g : s.reader_gates)
                if (!inside(gates_[g]->owner, s.owner)) r.ext_read = true;
            if (s.writer && !inside(gates_[*s.writer]->owner, s.owner)) r.ext_write = true;
            if (r.ext_read && r.ext_write)
                throw Error("signal '" + s.name_hint +
                            "' is both written and read across its module boundary; add an "
                            "explicit port direction");
        }

        // The net spans every module from each reference up to the common
        // ancestor; it crosses a module boundary when references exist on
        // both sides.
        for (ModuleId m = 1; m < modules_.size(); ++m) {
            bool in = false, out = false;
            for (ModuleId w : r.where)
                (inside(w, m) ? in : out) = true;
            bool marked_here = s.port_mark != 0 && s.owner == m;
            if (!(in && out) && !marked_here) continue;
            bool is_input;
            if (marked_here)
                is_input = s.port_mark == 1;
            else if (r.driver_external)
                is_input = true;
            else
                is_input = !inside(r.driver, m);
            auto& ports = modules_[m].ports;
            bool dup = false;
            for (auto& p : ports)
                if (p.signal == s.id) dup = true;
            if (!dup) ports.push_back(Port{s.id, is_input});
        }
    }
    for (auto& m : modules_)
        std::sort(m.ports.begin(), m.ports.end(),
                  [](const Port& a, const Port& b) { return a.signal < b.signal; });
}

void Circuit::freeze() {
    if (frozen_) throw Error("circuit already frozen");
    resolve_connects();
    freeze_enums();
    for (auto& g : gates_) g->on_freeze(*this);
    // Recompute X counts: widths may have changed during enum resolution.
    for (auto& g : gates_) {
        g->x_count = 0;
        for (const Reader& r : g->ins)
            if (signals_[r.signal]->x_nonzero()) g->x_count += 1;
    }
    infer_ports();
    auto violations = audit();
    if (!violations.empty()) {
        std::string msg = "freeze audit failed:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw Error(msg);
    }
    frozen_ = true;
}

// ---------------------------------------------------------------------------
// Audit and dump

std::vector<std::string> Circuit::audit() const {
    std::vector<std::string> out;
    auto complain = [&](std::string m) { out.push_back(std::move(m)); };

    std::vector<int> writer_count(signals_.size(), 0);
    for (const auto& g : gates_) {
        for (const Writer& w : g->outs) {
            if (w.signal >= signals_.size()) {
                complain("gate g" + std::to_string(g->id) + " writes dangling signal");
                continue;
            }
            writer_count[w.signal] += 1;
            if (!signals_[w.signal]->writer || *signals_[w.signal]->writer != g->id)
                complain("signal s" + std::to_string(w.signal) + " writer edge inconsistent");
        }
        bool has_passive = false;
        int expected_x = 0;
        for (const Reader& r : g->ins) {
            if (r.signal >= signals_.size()) {
                complain("gate g" + std::to_string(g->id) + " reads dangling signal");
                continue;
            }
            const SignalData& s = *signals_[r.signal];
            if (r.sense == EdgeSense::Passive) has_passive = true;
            if (s.x_nonzero()) expected_x += 1;
            std::uint32_t tw = 0;
            bool resolvable = true;
            if (r.type->kind == SignalType::Kind::Enum && !r.type->enum_def->frozen())
                resolvable = false;
            if (resolvable) tw = r.type->bit_width();
            if (resolvable && tw != s.width)
                complain("gate g" + std::to_string(g->id) + " edge type width " +
                         std::to_string(tw) + " != signal s" + std::to_string(r.signal) +
                         " width " + std::to_string(s.width));
        }
        if (has_passive && !g->always_full)
            complain("gate g" + std::to_string(g->id) +
                     " has a non-triggering input but is not always_full");
        if (!g->always_full && g->x_count != expected_x)
            complain("gate g" + std::to_string(g->id) + " X_count " +
                     std::to_string(g->x_count) + " != expected " + std::to_string(expected_x));
    }
    for (SignalId i = 0; i < signals_.size(); ++i) {
        const SignalData& s = *signals_[i];
        if (writer_count[i] > 1)
            complain("signal s" + std::to_string(i) + " has multiple drivers");
        if (s.writer && writer_count[i] == 0)
            complain("signal s" + std::to_string(i) + " writer edge dangling");
        if (s.width == 0) complain("signal s" + std::to_string(i) + " has width 0");
        if (s.cur_v.size() != words::count(s.width))
            complain("signal s" + std::to_string(i) + " plane size mismatch");
        for (std::size_t w = 0; w < s.cur_v.size(); ++w)
            if (s.cur_v[w] & s.cur_x[w])
                complain("signal s" + std::to_string(i) + " planes not canonical");
    }
    return out;
}

std::string Circuit::dump() const {
    std::ostringstream os;
    for (const auto& sp : signals_) {
        const SignalData& s = *sp;
        os << "signal s" << s.id << " w" << s.width << " \"" << s.name_hint << "\"";
        os << " init=" << s.init.str();
        if (s.writer)
            os << " writer=g" << *s.writer;
        else
            os << " writer=-";
        os << " readers=[";
        for (std::size_t i = 0; i < s.reader_gates.size(); ++i)
            os << (i ? "," : "") << "g" << s.reader_gates[i];
        os << "]";
        if (s.port_mark) os << (s.port_mark == 1 ? " input" : " output");
        os << "\n";
    }
    for (const auto& gp : gates_) {
        const Gate& g = *gp;
        os << "gate g" << g.id << " " << g.describe() << " delay=" << g.delay;
        if (g.always_full) os << " full";
        os << " ins=[";
        for (std::size_t i = 0; i < g.ins.size(); ++i) {
            os << (i ? "," : "") << "s" << g.ins[i].signal;
            switch (g.ins[i].sense) {
                case EdgeSense::Level: break;
                case EdgeSense::Posedge: os << ":pos"; break;
                case EdgeSense::Negedge: os << ":neg"; break;
                case EdgeSense::Passive: os << ":passive"; break;
            }
        }
        os << "] outs=[";
        for (std::size_t i = 0; i < g.outs.size(); ++i)
            os << (i ? "," : "") << "s" << g.outs[i].signal;
        os << "]\n";
    }
    for (const auto& m : modules_) {
        os << "module m" << m.id << " \"" << m.name << "\"";
        if (m.id != 0) os << " parent=m" << m.parent;
        os << " ports=[";
        for (std::size_t i = 0; i < m.ports.size(); ++i)
            os << (i ? "," : "") << (m.ports[i].is_input ? "in " : "out ") << "s"
               << m.ports[i].signal;
        os << "]\n";
    }
    return os.str();
}

}  // namespace hgl
