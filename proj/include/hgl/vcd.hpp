#pragma once

// Value-change-dump recording. Tracked signals are captured at the end of
// every time slot (delta sub-slots collapse into their parent slot), with x
// characters for unknown bits. The change stream is buffered so the file can
// be written after the run.

#include <sstream>

#include "hgl/sim.hpp"

namespace hgl {

class VcdRecorder : public ISimClient {
public:
    explicit VcdRecorder(SimCore& sim);

    // Marks one signal for recording; anonymous signals get an s<id> name.
    void track(SignalId s);
    // Tracks every named signal of the module and its submodules.
    void track_module(ModuleId m);

    // Full VCD text: header, scope tree, initial values, change records.
    std::string text() const;
    void write_file(const std::string& path) const;

    bool on_subslot(std::uint64_t, const std::vector<EdgeFire>&) override { return false; }
    void on_time_end(std::uint64_t t) override;

private:
    struct Tracked {
        SignalId signal;
        std::string id_code;
        std::string last;  // last dumped value rendering
    };

    static std::string render(const SignalData& s);
    std::string code_for(std::size_t n) const;

    SimCore& sim_;
    std::vector<Tracked> tracked_;
    std::vector<int> index_of_;  // signal id -> tracked index (-1 untracked)
    std::ostringstream changes_;
    std::uint64_t last_change_time_ = kNever;
    bool initialized_ = false;
    std::vector<std::pair<SignalId, std::string>> initial_;
};

}  // namespace hgl
