#pragma once

// Bundled demonstration designs used by the CLI, the test suites, and the
// benchmark: a full adder, ripple-carry and Kogge-Stone adders, a coin
// vending machine FSM, a Wallace tree multiplier, and a seeded random
// combinational DAG generator.

#include <random>

#include "hgl/builder.hpp"

namespace hgl::examples {

struct FullAdderHandles {
    ModuleId m;
    Signal a, b, cin, s, cout;
};
FullAdderHandles full_adder(Builder& b);

struct AdderHandles {
    ModuleId m;
    std::uint32_t width;
    Signal x, y, out;
};
// Width comes from the parameter tree key "w" when present, else `fallback_w`.
AdderHandles ripple_carry(Builder& b, std::uint32_t fallback_w = 32);
AdderHandles kogge_stone(Builder& b, std::uint32_t fallback_w = 64);

// Carry-lookahead sum of two equal-width signals, width + 1 bits out.
Signal kogge_stone_sum(Builder& b, Signal x, Signal y);

struct VendingHandles {
    ModuleId m;
    Signal nickel, dime, valid, state;
    std::shared_ptr<EnumDef> states;
};
VendingHandles vending_machine(Builder& b);

// Reference model for the vending machine: state indices follow interning
// order (sIdle, s5, s10, s15, sOk).
int vending_next_state(int state, bool nickel, bool dime);
inline bool vending_valid(int state) { return state == 4; }

struct WallaceHandles {
    ModuleId m;
    std::uint32_t width;
    Signal a, b, product;
};
WallaceHandles wallace_multiplier(Builder& b, std::uint32_t w);

struct DagHandles {
    ModuleId m;
    std::vector<Signal> inputs;
    std::vector<Signal> sinks;
};
// Deterministic random combinational DAG of at most `max_gates` gates.
DagHandles random_dag(Builder& b, std::uint64_t seed, int max_gates, int dag_index = 0);

}  // namespace hgl::examples
