#pragma once

// Synthesizable Verilog emission from the frozen graph. Each module
// definition becomes one Verilog module; combinational gates emit as
// continuous assigns, priority netlists as always blocks mirroring the
// recorded assignment order, registers as clocked always blocks.

#include <map>

#include "hgl/gates.hpp"
#include "hgl/netlist.hpp"

namespace hgl {

struct VerilogUnit {
    struct PortDecl {
        std::string name;
        bool is_input;
        std::uint32_t width;
    };
    struct NetDecl {
        std::string name;
        std::uint32_t width;
        bool is_reg;     // driven from an always block
        bool is_port;
    };
    struct Assign {
        std::string lhs;
        std::uint32_t width;
        std::string rhs;
        std::uint32_t rhs_width;
        std::vector<std::string> idents;  // identifiers the rhs references
    };
    struct AlwaysBlock {
        std::string header;              // "always @*" or the clocked form
        std::vector<std::string> lines;  // already-indented body
        std::vector<std::string> targets;
        std::vector<std::string> idents;
    };
    struct Instance {
        std::string module_name;
        std::string inst_name;
        // port name -> connected expression (a net name or a literal)
        std::vector<std::tuple<std::string, std::string, std::uint32_t>> conns;
        std::vector<std::string> idents;
    };

    std::string name;
    std::vector<PortDecl> ports;
    std::vector<NetDecl> nets;
    std::vector<std::string> localparams;
    std::vector<Assign> assigns;
    std::vector<AlwaysBlock> always;
    std::vector<Instance> instances;

    std::string render() const;
};

// Emits the module and all submodules, top first. Requires a frozen circuit.
std::vector<VerilogUnit> emit_verilog_units(const Circuit& c, ModuleId top);
std::string emit_verilog(const Circuit& c, ModuleId top);

// Structural checks over emitted units: identifiers declared exactly once,
// no net with more than one driver, assignment widths agree.
std::vector<std::string> lint_verilog(const std::vector<VerilogUnit>& units);

}  // namespace hgl
