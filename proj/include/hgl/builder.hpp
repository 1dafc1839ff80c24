#pragma once

// Construction API on top of the circuit graph: typed signal declaration,
// operator application, conditional priority assignment, netlists, clock
// domains, modules with inferred ports, a top-down parameter tree, and
// vectorized arrays.

#include <functional>
#include <map>
#include <variant>

#include "hgl/gates.hpp"
#include "hgl/netlist.hpp"

namespace hgl {

class Builder;

// Handle to a signal inside the circuit under construction.
class Signal {
public:
    Signal() = default;
    Signal(Builder* b, SignalId id) : b_(b), id_(id) {}
    bool valid() const { return b_ != nullptr; }
    SignalId id() const;
    std::uint32_t width() const;
    TypeRef type() const;
    Builder& builder() const;

private:
    Builder* b_ = nullptr;
    SignalId id_ = 0;
};

struct ClockDomain {
    Signal clock;
    bool clk_pos = true;
    bool has_reset = false;
    Signal reset;
    bool rst_level = false;
    bool async_reset = true;
};

// Tree container whose leaves are signals; vectorized operations map over
// matching shapes and broadcast scalars.
class HArray {
public:
    HArray() = default;
    HArray(Signal s) : leaf_(s), is_leaf_(true) {}  // NOLINT: implicit by design

    static HArray list(std::vector<HArray> items);
    static HArray bundle(std::vector<std::pair<std::string, HArray>> fields);

    bool is_leaf() const { return is_leaf_; }
    Signal sig() const;
    std::size_t size() const { return items_.size(); }
    HArray& at(std::size_t i);
    const HArray& at(std::size_t i) const;
    HArray& field(const std::string& name);
    const HArray& field(const std::string& name) const;
    const std::string& name_at(std::size_t i) const { return names_[i]; }

    // arr[from:to] over the outer dimension; negative indices count from
    // the end, as in slicing.
    HArray slice(std::ptrdiff_t from, std::ptrdiff_t to) const;
    // column select: [:, name]
    HArray col(const std::string& name) const;
    std::vector<Signal> leaves() const;

private:
    friend class Builder;
    Signal leaf_;
    bool is_leaf_ = false;
    std::vector<HArray> items_;
    std::vector<std::string> names_;
};

using ParamValue = std::variant<std::int64_t, std::string>;

// Configuration tree: values plus name-pattern matchers activated when a
// module of a matching name is entered; inherited top-down.
class ParamNode {
public:
    std::shared_ptr<ParamNode> matcher(const std::string& pattern);
    void set(const std::string& key, ParamValue v) { values_[key] = std::move(v); }

    const std::map<std::string, ParamValue>& values() const { return values_; }
    const std::vector<std::pair<std::string, std::shared_ptr<ParamNode>>>& matchers() const {
        return matchers_;
    }
    static bool pattern_match(const std::string& pattern, const std::string& name);

private:
    std::map<std::string, ParamValue> values_;
    std::vector<std::pair<std::string, std::shared_ptr<ParamNode>>> matchers_;
};

class Builder {
public:
    explicit Builder(Circuit& c);

    Circuit& circuit() { return c_; }

    // --- declarations -----------------------------------------------------
    Signal sig_uint(std::uint32_t w, const std::string& name);  // undriven, reads X
    Signal sig_uint(std::uint32_t w, const std::string& name, std::uint64_t init);
    Signal sig_sint(std::uint32_t w, const std::string& name, std::int64_t init);
    Signal sig_typed(TypeRef type, const std::string& name, const Logic& init);
    Signal lit(const Logic& value);
    Signal lit(std::uint64_t value, std::uint32_t w);
    Signal enum_lit(const std::shared_ptr<EnumDef>& def, const std::string& state);

    // --- netlists -----------------------------------------------------------
    Signal wire(std::uint32_t w, const std::string& name);
    Signal wire(std::uint32_t w, const std::string& name, const Logic& init);
    Signal reg(std::uint32_t w, const std::string& name, const Logic& init);
    Signal reg_typed(TypeRef type, const std::string& name, const Logic& init);
    Signal reg_enum(const std::shared_ptr<EnumDef>& def, const std::string& name);
    Signal latch(Signal enable, std::uint32_t w, const std::string& name);
    Signal wtri(Signal enable, Signal driver, const std::string& name);

    // --- operators ----------------------------------------------------------
    Signal op2(GateKind kind, Signal a, Signal b);
    Signal op1(GateKind kind, Signal a);
    Signal eq(Signal a, Signal b), ne(Signal a, Signal b);
    Signal lt(Signal a, Signal b), gt(Signal a, Signal b);
    Signal le(Signal a, Signal b), ge(Signal a, Signal b);
    Signal reduce_or(Signal a), reduce_and(Signal a), reduce_xor(Signal a);
    Signal logical_not(Signal a), logical_and(Signal a, Signal b), logical_or(Signal a, Signal b);
    Signal cat(const std::vector<Signal>& parts);  // first part at the LSB
    Signal select(Signal a, std::uint32_t low, std::uint32_t count);
    Signal dyn_select(Signal a, Signal idx, std::uint32_t count);
    Signal bit(Signal a, std::uint32_t i) { return select(a, i, 1); }
    HArray split(Signal a);
    Signal field(Signal a, const std::string& name);  // struct field view

    // --- assignment (the <== operator) ---------------------------------------
    void assign(Signal target, Signal value);
    void assign(Signal target, std::uint64_t value);
    void assign(Signal target, const Logic& value);
    void assign(Signal target, const std::string& enum_state);
    void assign_slice(Signal target, std::uint32_t low, std::uint32_t count, Signal value);
    void assign_dyn(Signal target, Signal idx, std::uint32_t count, Signal value);

    // --- conditions -----------------------------------------------------------
    void when_begin(Signal cond);
    void elsewhen(Signal cond);
    void otherwise();
    void when_end();
    void switch_begin(Signal subject, bool unique = false);
    void case_begin(const Logic& label);
    void case_begin(const BitPat& label);
    void case_begin(const std::string& enum_state);
    void case_default();
    void switch_end();

    // --- clock domains ----------------------------------------------------------
    ClockDomain make_domain(Signal clk, bool clk_pos, Signal rst, bool rst_level,
                            bool async_reset);
    ClockDomain make_domain(Signal clk, bool clk_pos);
    void domain_push(const ClockDomain& d) { domains_.push_back(d); }
    void domain_pop() { domains_.pop_back(); }
    const ClockDomain& domain();  // creates the default domain on first use
    // Set once something used the implicit clock/reset pair.
    const std::optional<ClockDomain>& default_domain() const { return default_domain_; }

    // --- modules and parameters ---------------------------------------------------
    ModuleId module_begin(const std::string& name);
    void module_end();
    template <typename F>
    ModuleId module(const std::string& name, F&& body) {
        ModuleId m = module_begin(name);
        body();
        module_end();
        return m;
    }
    void mark_input(Signal s);
    void mark_output(Signal s);
    void connect(Signal a, Signal b);  // the <=> operator

    void set_config(std::shared_ptr<ParamNode> root);
    std::optional<ParamValue> param(const std::string& key) const;
    std::int64_t param_int(const std::string& key, std::int64_t fallback) const;

    // --- vectorized operations ------------------------------------------------------
    HArray vec_op(GateKind kind, const HArray& a, const HArray& b);
    void vec_assign(const HArray& target, const HArray& value);

    // --- memories ----------------------------------------------------------------
    struct Mem {
        std::vector<Signal> words;
        TypeRef type;
    };
    Mem mem(std::uint32_t elem_width, std::uint32_t n, const std::string& name);
    Signal mem_read(const Mem& m, Signal addr);
    void mem_write(const Mem& m, Signal addr, Signal data, Signal en);

    std::uint32_t default_delay = 1;

private:
    struct WhenFrame {
        std::vector<SignalId> prior;
        std::optional<SignalId> current;
        bool in_otherwise = false;
    };
    struct CaseLabel {
        std::optional<Logic> lit;
        std::optional<BitPat> pat;
        std::optional<std::size_t> enum_idx;
        bool is_default = false;
    };
    struct SwitchFrame {
        SignalId subject;
        bool unique = false;
        std::shared_ptr<EnumDef> enum_def;
        std::optional<CaseLabel> current;
        std::vector<CaseLabel> seen;  // for default-case negation
    };
    struct Frame {
        bool is_switch;
        WhenFrame when;
        SwitchFrame sw;
    };

    NetGate* target_net(Signal target);
    std::vector<CondTest> capture_tests(NetGate* g, EdgeSense sense);
    std::uint32_t add_entry_edge(NetGate* g, SignalId s, EdgeSense sense, bool target_signed);
    void push_entry(Signal target, MuxSlice slice, SignalId value);
    Signal new_out(std::uint32_t w, bool is_signed, GateId g);
    SwitchFrame* innermost_switch();

    Circuit& c_;
    std::vector<Frame> frames_;
    std::vector<ClockDomain> domains_;
    std::optional<ClockDomain> default_domain_;

    struct ParamScope {
        std::vector<std::shared_ptr<ParamNode>> nodes;
    };
    std::vector<ParamScope> param_scopes_;
};

// Operator sugar used by generator code.
Signal operator&(Signal a, Signal b);
Signal operator|(Signal a, Signal b);
Signal operator^(Signal a, Signal b);
Signal operator~(Signal a);
Signal operator+(Signal a, Signal b);
Signal operator-(Signal a, Signal b);
Signal operator*(Signal a, Signal b);
Signal operator/(Signal a, Signal b);
Signal operator%(Signal a, Signal b);

}  // namespace hgl
