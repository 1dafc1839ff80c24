#pragma once

// Circuit graph: SignalData and Gate nodes joined by Reader/Writer edges.
// A signal can drive any number of gates but has at most one writer. Types
// live on the edges, so the same data can be viewed under different types.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hgl/logic.hpp"

namespace hgl {

using SignalId = std::uint32_t;
using GateId = std::uint32_t;
using ModuleId = std::uint32_t;

class SimCore;
class Circuit;

enum class Encoding { Binary, Onehot, Gray };

// State-name table of an enumerated type. States are interned on first use
// and the bit width stays open until freeze.
class EnumDef {
public:
    explicit EnumDef(Encoding enc) : encoding_(enc) {}

    std::size_t intern(const std::string& name);
    std::optional<std::size_t> lookup(const std::string& name) const;
    void freeze();

    bool frozen() const { return frozen_; }
    Encoding encoding() const { return encoding_; }
    std::size_t state_count() const { return states_.size(); }
    const std::vector<std::string>& states() const { return states_; }
    std::uint32_t width() const;
    Logic code(std::size_t index) const;  // requires frozen()

private:
    Encoding encoding_;
    std::vector<std::string> states_;
    bool frozen_ = false;
    std::uint32_t width_ = 0;
};

struct SignalType;
using TypeRef = std::shared_ptr<const SignalType>;

struct StructField {
    std::string name;
    std::uint32_t offset;
    TypeRef type;
};

struct SignalType {
    enum class Kind { UInt, SInt, Vector, Struct, Enum, Mem };

    Kind kind = Kind::UInt;
    std::uint32_t width = 0;  // enum width stays 0 until its def freezes

    TypeRef elem;                      // Vector / Mem
    std::uint32_t length = 0;          // Vector
    std::vector<std::uint32_t> dims;   // Mem
    std::vector<StructField> fields;   // Struct
    std::shared_ptr<EnumDef> enum_def; // Enum

    static TypeRef uint_t(std::uint32_t w);
    static TypeRef sint_t(std::uint32_t w);
    static TypeRef vector_t(TypeRef elem, std::uint32_t length);
    static TypeRef struct_t(std::vector<StructField> fields);
    static TypeRef enum_t(std::shared_ptr<EnumDef> def);
    static TypeRef mem_t(TypeRef elem, std::vector<std::uint32_t> dims);

    bool is_signed() const { return kind == Kind::SInt; }
    std::uint32_t bit_width() const;  // resolves enum width, validates struct
};

enum class EdgeSense { Level, Posedge, Negedge, Passive };

struct Reader {
    SignalId signal;
    GateId gate;
    TypeRef type;
    EdgeSense sense;
};

struct Writer {
    GateId gate;
    SignalId signal;
    TypeRef type;
};

enum class GateKind {
    Not, And, Or, Xor,
    LogicalNot, LogicalAnd, LogicalOr,
    ReduceAnd, ReduceOr, ReduceXor,
    Add, Sub, Mul, Div, Mod,
    Eq, Lt, Gt,
    Cat, Select, DynSelect, Split,
    Mux, Reg, Latch, Tri,
    MemRead, MemWrite,
    Alias,
};

const char* gate_kind_name(GateKind k);

class Gate {
public:
    Gate(GateKind kind, std::uint32_t delay) : kind(kind), delay(delay) {}
    virtual ~Gate() = default;

    // Full three-state evaluation: computes both output planes.
    virtual void eval_full(SimCore& sim) = 0;
    // Binary evaluation: computes and schedules only the value plane.
    virtual void eval_fast(SimCore& sim) = 0;
    virtual std::string describe() const { return gate_kind_name(kind); }
    // Called by Circuit::freeze after enums are resolved.
    virtual void on_freeze(Circuit&) {}
    // Called when a simulation (re)starts, after signals return to init.
    virtual void on_sim_reset(SimCore&) {}

    GateKind kind;
    GateId id = 0;
    ModuleId owner = 0;
    std::vector<Reader> ins;
    std::vector<Writer> outs;
    std::uint32_t delay = 1;
    // Set for gates the optimizer must never run on the binary path: gates
    // with non-triggering inputs (registers, latches) and gates that can
    // produce X from binary inputs (dividers, dynamic/out-of-range selects,
    // tri-states, netlists with X defaults).
    bool always_full = false;

    // Simulator bookkeeping (owned by the running SimCore).
    std::int32_t x_count = 0;
    bool x_changed = false;
    bool waiting = false;
};

struct SignalData {
    SignalId id = 0;
    std::uint32_t width = 0;
    // Current value as raw planes; the simulator owns these during a run.
    std::vector<std::uint64_t> cur_v;
    std::vector<std::uint64_t> cur_x;
    Logic init;
    std::optional<GateId> writer;
    // One entry per sensitive reader edge; a gate reading the signal through
    // two edges appears twice.
    std::vector<GateId> sensitive_fanout;
    std::vector<GateId> reader_gates;  // every reader edge, passive included
    std::string name_hint;
    TypeRef type;
    ModuleId owner = 0;
    // Constant signals carrying an enum state get their value at freeze.
    std::shared_ptr<EnumDef> sym_enum;
    std::size_t sym_state = 0;
    bool sym_init = false;
    bool tracked = false;
    bool watched = false;     // 1-bit edge watch for tasks/assertions
    std::uint8_t port_mark = 0;  // 0 none, 1 explicit Input, 2 explicit Output
    bool dirty = false;          // set while an update slot is in flight

    Logic current_logic() const { return Logic::from_planes(width, cur_v, cur_x); }
    bool x_nonzero() const { return words::any(cur_x.data(), cur_x.size()); }
    void set_current(const Logic& l);
};

struct Port {
    SignalId signal;
    bool is_input;
};

struct ModuleDef {
    ModuleId id = 0;
    std::string name;
    ModuleId parent = 0;
    std::vector<ModuleId> children;
    std::vector<SignalId> signals;
    std::vector<GateId> gates;
    std::vector<Port> ports;  // filled by freeze()
};

class Circuit {
public:
    Circuit();

    // --- construction ---------------------------------------------------
    SignalId add_signal(std::uint32_t width, TypeRef type, std::string name_hint);
    SignalId add_signal(std::uint32_t width, TypeRef type, std::string name_hint,
                        const Logic& init);
    // Enum-typed signal whose width resolves at freeze time.
    SignalId add_enum_signal(std::shared_ptr<EnumDef> def, std::string name_hint);

    GateId add_gate(std::unique_ptr<Gate> gate);
    // Registers a reader edge; sense Passive keeps the gate out of the
    // signal's trigger fanout.
    void read(GateId gate, SignalId signal, TypeRef type, EdgeSense sense);
    void write(GateId gate, SignalId signal, TypeRef type);
    // Nondirectional link, resolved to a single driver at freeze.
    void connect(SignalId a, SignalId b);

    ModuleId module_begin(const std::string& name);
    void module_end();
    ModuleId current_module() const { return module_stack_.back(); }
    // Temporarily redirects ownership of new nodes (used for root-owned
    // infrastructure like default clocks).
    void scope_push(ModuleId m) { module_stack_.push_back(m); }
    void scope_pop() { module_stack_.pop_back(); }

    void register_enum(std::shared_ptr<EnumDef> def);
    void mark_port(SignalId s, bool is_input);

    // --- elaboration ----------------------------------------------------
    // Resolves connects and enums, fixes widths, infers ports, audits.
    void freeze();
    bool frozen() const { return frozen_; }

    // Recomputes every module's port list from boundary crossings and
    // explicit marks; idempotent, normally invoked by freeze().
    void infer_ports();

    // Structural invariant check; returns human-readable violations.
    std::vector<std::string> audit() const;
    // Deterministic listing of the whole graph, for debugging and goldens.
    std::string dump() const;

    // --- access ----------------------------------------------------------
    SignalData& signal(SignalId id) { return *signals_[id]; }
    const SignalData& signal(SignalId id) const { return *signals_[id]; }
    Gate& gate(GateId id) { return *gates_[id]; }
    const Gate& gate(GateId id) const { return *gates_[id]; }
    ModuleDef& module(ModuleId id) { return modules_[id]; }
    const ModuleDef& module(ModuleId id) const { return modules_[id]; }
    std::size_t signal_count() const { return signals_.size(); }
    std::size_t gate_count() const { return gates_.size(); }
    std::size_t module_count() const { return modules_.size(); }
    ModuleId root() const { return 0; }

    bool inside(ModuleId node, ModuleId ancestor) const;

private:
    void resolve_connects();
    void freeze_enums();

    std::vector<std::unique_ptr<SignalData>> signals_;
    std::vector<std::unique_ptr<Gate>> gates_;
    std::vector<ModuleDef> modules_;
    std::vector<ModuleId> module_stack_;
    std::vector<std::pair<SignalId, SignalId>> connects_;
    std::vector<std::shared_ptr<EnumDef>> enums_;
    bool frozen_ = false;
};

}  // namespace hgl
