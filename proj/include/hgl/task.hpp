#pragma once

// Coroutine-based simulation tasks. Tasks interleave with gate simulation:
// a task resumed in a slot reads post-update values and schedules stimulus
// into delta sub-slots or later slots. Triggers cover time delays, signal
// edges, counted clock edges, and joining child tasks.

#include <coroutine>
#include <map>
#include <random>

#include "hgl/sim.hpp"

namespace hgl {

class TaskRuntime;

class SimTask {
public:
    struct promise_type {
        TaskRuntime* rt = nullptr;
        std::uint32_t id = 0;

        SimTask get_return_object() {
            return SimTask(std::coroutine_handle<promise_type>::from_promise(*this));
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        void return_void() {}
        void unhandled_exception();
    };

    SimTask() = default;
    explicit SimTask(std::coroutine_handle<promise_type> h) : h_(h) {}
    SimTask(SimTask&& o) noexcept : h_(o.h_) { o.h_ = nullptr; }
    SimTask& operator=(SimTask&& o) noexcept {
        if (this != &o) {
            if (h_) h_.destroy();
            h_ = o.h_;
            o.h_ = nullptr;
        }
        return *this;
    }
    SimTask(const SimTask&) = delete;
    SimTask& operator=(const SimTask&) = delete;
    ~SimTask() {
        if (h_) h_.destroy();
    }

private:
    friend class TaskRuntime;
    std::coroutine_handle<promise_type> h_;
};

struct TaskHandle {
    std::uint32_t id = ~0u;
    bool valid() const { return id != ~0u; }
};

// Awaitables. A failed wait registration (say joining a task twice) is
// recorded as a task failure in the ledger and the task continues; await
// paths never throw (gcc 11 mishandles throwing await_resume).

struct Delay {
    std::uint64_t slots;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<SimTask::promise_type> h) const;
    void await_resume() const noexcept {}
};

// dir: +1 posedge, -1 negedge, 0 any change
struct EdgeWait {
    SignalId sig;
    int dir;
    std::uint64_t count = 1;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<SimTask::promise_type> h) const noexcept;
    void await_resume() const noexcept {}
};

// Trivially destructible on purpose: gcc 11 destroys the co_await temporary
// operand twice (fixed in gcc 12), which is fatal for owning members.
struct Join {
    static constexpr std::size_t kMaxJoin = 8;
    TaskHandle tasks[kMaxJoin];
    std::size_t count = 0;

    Join(std::initializer_list<TaskHandle> hs) {
        for (const TaskHandle& h : hs) {
            if (count == kMaxJoin) throw Error("join of more than 8 tasks");
            tasks[count++] = h;
        }
    }
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<SimTask::promise_type> h) const noexcept;
    void await_resume() const noexcept {}
};

// Shared pass/fail record for task checks and assertions; failures are
// collected, not fatal.
struct ResultLedger {
    struct Entry {
        std::uint64_t time;
        bool pass;
        std::string message;
    };
    std::vector<Entry> entries;
    std::uint64_t passes = 0;
    std::uint64_t failures = 0;

    void record(std::uint64_t time, bool pass, std::string msg);
    std::string report(std::size_t max_failures = 10) const;
};

class TaskRuntime : public ISimClient {
public:
    TaskRuntime(SimCore& sim, std::uint64_t seed);

    TaskHandle spawn(SimTask&& task);
    bool done(TaskHandle h) const;
    std::size_t live_tasks() const { return live_; }

    // A free-running clock: period/2 low then period/2 high, forever.
    TaskHandle spawn_clock(SignalId clk, std::uint64_t period);

    // Queues a task for resumption in the next delta sub-slot.
    void resume_soon(std::uint32_t id) { delta_ready_.push_back(id); }

    // testbench helpers ------------------------------------------------------
    Logic getv(SignalId s) const { return sim_.value_of(s); }
    // Drives a test-controlled signal in the next delta sub-slot. Only
    // signals without a gate driver (or behind a tri-state) accept it.
    void setv(SignalId s, const Logic& v);
    // Uniform random binary value of the signal's width; drives and returns it.
    Logic setr(SignalId s);
    void assert_eq(const Logic& actual, const Logic& expected, const std::string& what);

    ResultLedger& ledger() { return ledger_; }
    const ResultLedger& ledger() const { return ledger_; }
    std::mt19937_64& rng() { return rng_; }
    SimCore& sim() { return sim_; }

    // ISimClient
    std::uint64_t next_wake() const override;
    bool on_subslot(std::uint64_t t, const std::vector<EdgeFire>& edges) override;

private:
    friend struct Delay;
    friend struct EdgeWait;
    friend struct Join;
    friend struct SimTask::promise_type;

    void wait_delay(std::uint32_t task, std::uint64_t slots);
    void wait_edge(std::uint32_t task, SignalId sig, int dir, std::uint64_t count);
    void wait_join(std::uint32_t task, std::vector<std::uint32_t> children);
    void finish(std::uint32_t task);
    void task_failed(std::uint32_t task, const std::string& what);

    struct Task {
        std::coroutine_handle<SimTask::promise_type> h;
        bool done = false;
        bool join_consumed = false;
        std::vector<std::uint32_t> joiners;
        std::size_t join_pending = 0;
    };

    SimCore& sim_;
    std::mt19937_64 rng_;
    ResultLedger ledger_;
    std::vector<Task> tasks_;
    std::size_t live_ = 0;
    std::uint64_t cur_time_ = kNever;

    std::vector<std::uint32_t> delta_ready_;
    std::map<std::uint64_t, std::vector<std::uint32_t>> delay_wake_;
    struct EdgeWaiter {
        std::uint32_t task;
        SignalId sig;
        int dir;
        std::uint64_t remaining;
    };
    std::vector<EdgeWaiter> edge_waiters_;
};

}  // namespace hgl
