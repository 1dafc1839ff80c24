#include "hgl/session.hpp"

namespace hgl {

Session::Session(SessionOptions opt) : opt_(opt), builder_(circuit_) {}

void Session::elaborate() {
    if (sim_) throw Error("session already elaborated");
    circuit_.freeze();
    sim_ = std::make_unique<SimCore>(circuit_, opt_.strategy);
    tasks_ = std::make_unique<TaskRuntime>(*sim_, opt_.seed);
    vcd_ = std::make_unique<VcdRecorder>(*sim_);
    for (ModuleId m : pending_track_modules_) vcd_->track_module(m);
    for (SignalId s : pending_track_signals_) vcd_->track(s);
    pending_track_modules_.clear();
    pending_track_signals_.clear();

    if (builder_.default_domain()) {
        const ClockDomain& d = *builder_.default_domain();
        tasks_->spawn_clock(d.clock.id(), opt_.clock_period);
        if (d.has_reset && opt_.reset_pulse) {
            Logic active = Logic::from_uint(d.rst_level ? 1 : 0, 1);
            Logic inactive = Logic::from_uint(d.rst_level ? 0 : 1, 1);
            sim_->drive_at(d.reset.id(), active, sim_->now());
            sim_->drive_at(d.reset.id(), inactive, sim_->now() + opt_.clock_period);
        }
    }
}

SimCore& Session::sim() {
    if (!sim_) throw Error("session not elaborated yet");
    return *sim_;
}

TaskRuntime& Session::tasks() {
    sim();
    return *tasks_;
}

VcdRecorder& Session::vcd() {
    sim();
    return *vcd_;
}

void Session::track(ModuleId m) {
    if (vcd_)
        vcd_->track_module(m);
    else
        pending_track_modules_.push_back(m);
}

void Session::track(Signal s) {
    if (vcd_)
        vcd_->track(s.id());
    else
        pending_track_signals_.push_back(s.id());
}

bool Session::join_run(const std::vector<TaskHandle>& handles, std::uint64_t max_slots) {
    std::uint64_t ran = 0;
    auto all_done = [&] {
        for (const TaskHandle& h : handles)
            if (!tasks().done(h)) return false;
        return true;
    };
    while (!all_done()) {
        if (ran >= max_slots || !sim().step_time()) return false;
        ran += 1;
    }
    return true;
}

}  // namespace hgl
