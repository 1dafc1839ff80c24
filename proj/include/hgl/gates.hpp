#pragma once

// Concrete gate nodes. Every gate implements the pair of simulation
// functions: eval_full computes both planes with three-state semantics,
// eval_fast computes the value plane for binary inputs.

#include "hgl/netlist.hpp"

namespace hgl {

// Combinational operator gate; operands of different widths are extended to
// the widest one, each by its own edge type's signedness.
class CombGate : public Gate {
public:
    CombGate(GateKind kind, std::uint32_t delay) : Gate(kind, delay) {}
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;

    bool signed_cmp = false;  // Lt/Gt compare as signed
};

// Static part select [low, low+count). A range reaching past the input width
// produces X bits, so such gates run on the full path.
class SelectGate : public Gate {
public:
    SelectGate(std::uint32_t low, std::uint32_t count, std::uint32_t delay)
        : Gate(GateKind::Select, delay), low(low), count(count) {}
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
    void on_freeze(Circuit& c) override;

    std::uint32_t low;
    std::uint32_t count;
};

// Dynamic part select: ins[0] = source, ins[1] = index.
class DynSelectGate : public Gate {
public:
    DynSelectGate(std::uint32_t count, std::uint32_t delay)
        : Gate(GateKind::DynSelect, delay), count(count) {
        always_full = true;  // can produce X from binary inputs
    }
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;

    std::uint32_t count;
};

// Fans a signal out into per-bit outputs.
class SplitGate : public Gate {
public:
    explicit SplitGate(std::uint32_t delay) : Gate(GateKind::Split, delay) {}
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
};

// One test of a priority-assignment condition stack.
struct CondTest {
    enum class Kind { Truthy, NotTruthy, EqLit, MatchPat };
    Kind kind = Kind::Truthy;
    std::uint32_t in_index = 0;  // reader edge of the tested signal
    Logic lit;                   // EqLit comparison value
    std::optional<BitPat> pat;   // MatchPat
    bool negate = false;         // invert EqLit/MatchPat (switch default arm)
    // Pre-freeze symbolic enum label, resolved into `lit`.
    std::shared_ptr<EnumDef> sym_enum;
    std::size_t sym_state = 0;
};

struct MuxSlice {
    enum class Kind { Whole, Static, Dyn };
    Kind kind = Kind::Whole;
    std::uint32_t low = 0;
    std::uint32_t count = 0;
    std::uint32_t idx_in = 0;  // reader edge of the index signal (Dyn)
};

// One recorded assignment: all tests must hold for the value to apply.
struct MuxEntry {
    std::vector<CondTest> tests;
    MuxSlice slice;
    std::uint32_t value_in = 0;  // reader edge of the value signal
};

// Shared behaviour of netlist gates that resolve recorded assignments.
class NetGate : public Gate {
public:
    NetGate(GateKind kind, std::uint32_t delay) : Gate(kind, delay) {}

    std::vector<MuxEntry> entries;
    // Subjects of `unique` switches; an X subject forces an all-X result.
    std::vector<std::uint32_t> unique_subject_ins;

    // Priority resolution over the recorded assignments. Entries apply in
    // order, later ones overriding earlier ones; an X condition merges the
    // taken and skipped alternatives.
    Logic fold_full(SimCore& sim, const Logic& fallback) const;
    // Binary counterpart; valid only when every involved input is binary.
    void fold_fast(SimCore& sim, std::vector<std::uint64_t>& acc) const;

    void on_freeze(Circuit& c) override;

protected:
    Logic test_eval3(SimCore& sim, const CondTest& t) const;
    bool test_eval2(SimCore& sim, const CondTest& t) const;
};

// Combinational wire with priority assignments (the `when`/`switch`
// condition gate). Default value is the declared init literal, X if none.
class MuxGate : public NetGate {
public:
    explicit MuxGate(std::uint32_t delay) : NetGate(GateKind::Mux, delay) {}
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
    void on_freeze(Circuit& c) override;

    Logic default_value;  // sized to the output at freeze
    bool has_default = false;
    std::shared_ptr<EnumDef> sym_default_enum;  // enum-typed wire default
    std::size_t sym_default_state = 0;
};

// Edge-triggered register. ins[0] = clock; ins[1] = reset when present;
// everything else is passive, so the gate always runs the full path.
class RegGate : public NetGate {
public:
    RegGate(bool clk_pos, std::uint32_t delay) : NetGate(GateKind::Reg, delay), clk_pos(clk_pos) {
        always_full = true;
    }
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
    void on_freeze(Circuit& c) override;
    void on_sim_reset(SimCore& sim) override;

    bool clk_pos = true;
    bool has_reset = false;
    bool rst_level = false;  // active level
    bool async_reset = true;
    Logic reset_value;
    std::shared_ptr<EnumDef> sym_reset_enum;  // reset to an enum state
    std::size_t sym_reset_state = 0;

    int prev_clk = 0;  // sampled at last execution: 0, 1, or 2 for X
};

// Level-sensitive transparent latch. ins[0] = enable; the gate also reads
// its own output through a passive edge (the hold path).
class LatchGate : public NetGate {
public:
    explicit LatchGate(std::uint32_t delay) : NetGate(GateKind::Latch, delay) {
        always_full = true;
    }
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
};

// Tri-state wire: drives the resolved value when enable is 1, otherwise the
// output reads all-X (undriven).
class TriGate : public NetGate {
public:
    explicit TriGate(std::uint32_t delay) : NetGate(GateKind::Tri, delay) {
        always_full = true;
    }
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
};

// Memory read port: ins[0] = address, ins[1..] = word signals.
class MemReadGate : public Gate {
public:
    explicit MemReadGate(std::uint32_t delay) : Gate(GateKind::MemRead, delay) {
        always_full = true;
    }
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
};

// Memory write port: ins = clock, enable, address, data (clock sensitive,
// the rest passive); outs = every word of the array.
class MemWriteGate : public Gate {
public:
    MemWriteGate(bool clk_pos, std::uint32_t delay)
        : Gate(GateKind::MemWrite, delay), clk_pos(clk_pos) {
        always_full = true;
    }
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
    void on_sim_reset(SimCore& sim) override;

    bool clk_pos = true;
    int prev_clk = 0;
};

// Identity driver created when resolving nondirectional connects.
class AliasGate : public Gate {
public:
    explicit AliasGate(std::uint32_t delay) : Gate(GateKind::Alias, delay) {}
    void eval_full(SimCore& sim) override;
    void eval_fast(SimCore& sim) override;
};

// Edge classification for clocked gates.
enum class EdgeState { None, Definite, Possible };
EdgeState classify_edge(int prev, int cur, bool positive);

}  // namespace hgl
