#pragma once

// One-stop handle for a build/simulate/verify run: owns the circuit and
// builder, freezes the graph, runs the simulator with tasks and optional
// waveform recording, and collects check results.

#include <optional>

#include "hgl/builder.hpp"
#include "hgl/sim.hpp"
#include "hgl/task.hpp"
#include "hgl/vcd.hpp"

namespace hgl {

struct SessionOptions {
    std::uint64_t seed = 1;
    Strategy strategy = Strategy::Optimized;
    std::uint64_t clock_period = 256;
    bool reset_pulse = true;  // hold the default reset active for one period
};

class Session {
public:
    explicit Session(SessionOptions opt = {});

    Circuit& circuit() { return circuit_; }
    Builder& builder() { return builder_; }
    const SessionOptions& options() const { return opt_; }

    // Freezes the circuit, starts the simulator and the default clock.
    void elaborate();
    bool elaborated() const { return sim_ != nullptr; }

    SimCore& sim();
    TaskRuntime& tasks();
    VcdRecorder& vcd();

    void track(ModuleId m);
    void track(Signal s);

    TaskHandle spawn(SimTask&& t) { return tasks().spawn(std::move(t)); }
    // Runs until every listed task finished (or the slot bound is hit);
    // returns true when all finished.
    bool join_run(const std::vector<TaskHandle>& handles, std::uint64_t max_slots);
    std::uint64_t run_until(std::uint64_t t_end) { return sim().run_until(t_end); }

    ResultLedger& ledger() { return tasks().ledger(); }
    void dump_vcd(const std::string& path) { vcd().write_file(path); }
    std::string vcd_text() { return vcd().text(); }

private:
    SessionOptions opt_;
    Circuit circuit_;
    Builder builder_;
    std::unique_ptr<SimCore> sim_;
    std::unique_ptr<TaskRuntime> tasks_;
    std::unique_ptr<VcdRecorder> vcd_;
    std::vector<ModuleId> pending_track_modules_;
    std::vector<SignalId> pending_track_signals_;
};

}  // namespace hgl
