#pragma once

// Event-driven three-state simulator. Each time slot runs an update phase
// (apply signal events, maintain per-gate X bookkeeping) and an execute
// phase (run triggered gates once, picking the binary fast path whenever no
// unknown input is present or changing). Zero-delay activity lands in delta
// sub-slots of the same time.

#include <cstring>
#include <limits>
#include <map>
#include <vector>

#include "hgl/gates.hpp"
#include "hgl/netlist.hpp"

namespace hgl {

enum class Strategy { Optimized, AlwaysFull, BinaryOnly };

inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

// Word payload of an event; inline up to 256 bits.
class SmallWords {
public:
    SmallWords() = default;
    SmallWords(const std::uint64_t* d, std::size_t n) { assign(d, n); }
    SmallWords(const SmallWords& o) { assign(o.data(), o.size()); }
    SmallWords(SmallWords&&) = default;
    SmallWords& operator=(const SmallWords& o) {
        if (this != &o) assign(o.data(), o.size());
        return *this;
    }
    SmallWords& operator=(SmallWords&&) = default;

    void assign(const std::uint64_t* d, std::size_t n) {
        n_ = static_cast<std::uint32_t>(n);
        if (n > kInline && (!spill_ || cap_ < n)) {
            spill_ = std::make_unique<std::uint64_t[]>(n);
            cap_ = static_cast<std::uint32_t>(n);
        }
        std::memcpy(data(), d, n * sizeof(std::uint64_t));
    }
    const std::uint64_t* data() const { return n_ <= kInline ? inl_ : spill_.get(); }
    std::uint64_t* data() { return n_ <= kInline ? inl_ : spill_.get(); }
    std::size_t size() const { return n_; }

    bool equals(const std::vector<std::uint64_t>& v) const {
        return v.size() == n_ && std::memcmp(v.data(), data(), n_ * sizeof(std::uint64_t)) == 0;
    }

private:
    static constexpr std::uint32_t kInline = 4;
    std::uint32_t n_ = 0;
    std::uint32_t cap_ = 0;
    std::uint64_t inl_[kInline] = {};
    std::unique_ptr<std::uint64_t[]> spill_;
};

struct Event {
    SignalId signal;
    bool x_plane;
    SmallWords words;
};

struct SimStats {
    std::uint64_t events_scheduled = 0;
    std::uint64_t events_scheduled_x = 0;  // unknown-plane events scheduled
    std::uint64_t events_applied = 0;
    std::uint64_t value_updates = 0;
    std::uint64_t x_updates = 0;
    std::uint64_t execs_fast = 0;
    std::uint64_t execs_full = 0;
    std::uint64_t slots = 0;
    std::uint64_t subslots = 0;
    // Overhead accounting: one plane-type branch per applied event, one
    // path decision per gate execution.
    std::uint64_t plane_branches = 0;
    std::uint64_t path_checks = 0;

    std::string text() const;
};

struct EdgeFire {
    SignalId signal;
    int old_bit;  // 0 / 1 / 2 for X
    int new_bit;
};

class ISimClient {
public:
    virtual ~ISimClient() = default;
    // Earliest time this client needs a slot even without pending events.
    virtual std::uint64_t next_wake() const { return kNever; }
    // Runs after the execute phase of every sub-slot; edges lists the fired
    // transitions of watched signals. Returns true to request another
    // delta sub-slot at the same time.
    virtual bool on_subslot(std::uint64_t t, const std::vector<EdgeFire>& edges) {
        (void)t;
        (void)edges;
        return false;
    }
    // Runs once after the last sub-slot of a time slot.
    virtual void on_time_end(std::uint64_t t) { (void)t; }
};

class SimCore {
public:
    SimCore(Circuit& circuit, Strategy strategy);

    // Returns every signal to its init value and primes the power-on slot
    // where each gate evaluates once.
    void reset();

    void schedule(SignalId s, bool x_plane, const std::uint64_t* w, std::size_t n,
                  std::uint64_t at);
    // Drives a signal from outside the circuit (testbench): both planes are
    // scheduled for the next delta sub-slot, or a later absolute time.
    void drive(SignalId s, const Logic& value);
    void drive_at(SignalId s, const Logic& value, std::uint64_t at);

    // Executes one full time slot (all its delta sub-slots). Returns false
    // when nothing is pending.
    bool step_time();
    // Runs until no activity remains at times <= t_end; returns slots run.
    std::uint64_t run_until(std::uint64_t t_end);
    // Runs at most max_slots time slots; returns slots run.
    std::uint64_t run_slots(std::uint64_t max_slots);
    bool idle() const;

    std::uint64_t now() const { return t_; }
    Strategy strategy() const { return strategy_; }
    void set_strategy(Strategy s) {
        strategy_ = s;
        reset();
    }

    const SignalData& sig(SignalId s) const { return circuit_.signal(s); }
    Logic value_of(SignalId s) const { return circuit_.signal(s).current_logic(); }

    // Output helpers used by gate evaluations.
    void out_full(const Gate& g, std::size_t out_idx, const Logic& v);
    void out_fast(const Gate& g, std::size_t out_idx, const std::uint64_t* w, std::size_t n);

    void add_client(ISimClient* c) { clients_.push_back(c); }
    void watch(SignalId s);

    // Scratch buffers for the binary fast path; reused across evaluations.
    std::vector<std::uint64_t>& scratch(int i) { return scratch_[i]; }

    SimStats& stats() { return stats_; }
    const SimStats& stats() const { return stats_; }
    Circuit& circuit() { return circuit_; }

    // Audit hook: recomputes every gate's expected X_count from its inputs
    // and reports mismatches (always_full gates exempt).
    std::vector<std::string> audit_x_counts() const;

private:
    void update_phase(std::vector<Event>& events);
    void execute_phase();
    void run_gate(Gate& g);

    Circuit& circuit_;
    Strategy strategy_;
    SimStats stats_;

    std::uint64_t t_ = 0;
    bool primed_ = false;
    std::map<std::uint64_t, std::vector<Event>> future_;
    std::vector<Event> delta_;
    std::vector<Gate*> triggered_;
    std::vector<EdgeFire> fired_;
    std::vector<SignalId> dirty_;
    std::vector<ISimClient*> clients_;
    std::vector<std::uint64_t> scratch_[4];

    friend class VcdRecorder;
    const std::vector<SignalId>& dirty_signals() const { return dirty_; }
};

}  // namespace hgl
