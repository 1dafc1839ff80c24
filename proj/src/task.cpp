#include "hgl/task.hpp"

#include <algorithm>
#include <sstream>

namespace hgl {

void SimTask::promise_type::unhandled_exception() {
    if (!rt) throw;
    try {
        throw;
    } catch (const std::exception& e) {
        rt->task_failed(id, e.what());
    } catch (...) {
        rt->task_failed(id, "unknown exception");
    }
}

void Delay::await_suspend(std::coroutine_handle<SimTask::promise_type> h) const {
    h.promise().rt->wait_delay(h.promise().id, slots);
}

// Awaits always suspend: gcc 11 double-destroys the awaitable temporary when
// await_suspend returns false. A failed registration resumes the task in the
// next delta sub-slot instead.
void EdgeWait::await_suspend(std::coroutine_handle<SimTask::promise_type> h) const noexcept {
    TaskRuntime* rt = h.promise().rt;
    try {
        rt->wait_edge(h.promise().id, sig, dir, count);
    } catch (const std::exception& e) {
        rt->task_failed(h.promise().id, e.what());
        rt->resume_soon(h.promise().id);
    }
}

void Join::await_suspend(std::coroutine_handle<SimTask::promise_type> h) const noexcept {
    TaskRuntime* rt = h.promise().rt;
    try {
        std::vector<std::uint32_t> ids;
        for (std::size_t i = 0; i < count; ++i) ids.push_back(tasks[i].id);
        rt->wait_join(h.promise().id, std::move(ids));
    } catch (const std::exception& e) {
        rt->task_failed(h.promise().id, e.what());
        rt->resume_soon(h.promise().id);
    }
}

void ResultLedger::record(std::uint64_t time, bool pass, std::string msg) {
    (pass ? passes : failures) += 1;
    entries.push_back(Entry{time, pass, std::move(msg)});
}

std::string ResultLedger::report(std::size_t max_failures) const {
    std::ostringstream os;
    os << "checks=" << (passes + failures) << " pass=" << passes << " fail=" << failures
       << "\n";
    std::size_t shown = 0;
    for (const Entry& e : entries) {
        if (e.pass) continue;
        if (shown == max_failures) {
            os << "  ... more failures omitted\n";
            break;
        }
        os << "  FAIL @" << e.time << ": " << e.message << "\n";
        shown += 1;
    }
    return os.str();
}

TaskRuntime::TaskRuntime(SimCore& sim, std::uint64_t seed) : sim_(sim), rng_(seed) {
    sim_.add_client(this);
}

TaskHandle TaskRuntime::spawn(SimTask&& task) {
    if (!task.h_) throw Error("spawn of an empty task");
    std::uint32_t id = static_cast<std::uint32_t>(tasks_.size());
    Task t;
    t.h = task.h_;
    task.h_ = nullptr;
    t.h.promise().rt = this;
    t.h.promise().id = id;
    tasks_.push_back(t);
    live_ += 1;
    delta_ready_.push_back(id);
    return TaskHandle{id};
}

TaskHandle TaskRuntime::spawn_clock(SignalId clk, std::uint64_t period) {
    if (period < 2) throw Error("clock period must be at least 2 slots");
    auto gen = [](TaskRuntime& rt, SignalId sig, std::uint64_t half,
                  std::uint64_t rest) -> SimTask {
        while (true) {
            co_await Delay{half};
            rt.setv(sig, Logic::from_uint(1, 1));
            co_await Delay{rest};
            rt.setv(sig, Logic::zeros(1));
        }
    };
    return spawn(gen(*this, clk, period / 2, period - period / 2));
}

bool TaskRuntime::done(TaskHandle h) const {
    if (!h.valid() || h.id >= tasks_.size()) throw Error("invalid task handle");
    return tasks_[h.id].done;
}

void TaskRuntime::setv(SignalId s, const Logic& v) {
    const SignalData& sd = sim_.sig(s);
    if (sd.writer) {
        const Gate& g = sim_.circuit().gate(*sd.writer);
        if (g.kind != GateKind::Tri)
            throw Error("setv on gate-driven signal '" + sd.name_hint +
                        "': it already has a driver");
    }
    sim_.drive(s, v);
}

Logic TaskRuntime::setr(SignalId s) {
    const SignalData& sd = sim_.sig(s);
    std::vector<std::uint64_t> w(words::count(sd.width));
    for (auto& word : w) word = rng_();
    Logic v = Logic::from_planes(sd.width, std::move(w), {});
    setv(s, v);
    return v;
}

void TaskRuntime::assert_eq(const Logic& actual, const Logic& expected,
                            const std::string& what) {
    bool pass = actual == expected;
    std::string msg = what;
    if (!pass) msg += ": got " + actual.str() + ", expected " + expected.str();
    ledger_.record(sim_.now(), pass, msg);
}

void TaskRuntime::wait_delay(std::uint32_t task, std::uint64_t slots) {
    if (slots == 0)
        delta_ready_.push_back(task);
    else
        delay_wake_[sim_.now() + slots].push_back(task);
}

void TaskRuntime::wait_edge(std::uint32_t task, SignalId sig, int dir, std::uint64_t count) {
    if (count == 0) {
        delta_ready_.push_back(task);
        return;
    }
    sim_.watch(sig);
    edge_waiters_.push_back(EdgeWaiter{task, sig, dir, count});
}

void TaskRuntime::wait_join(std::uint32_t task, std::vector<std::uint32_t> children) {
    for (std::uint32_t c : children) {
        if (c >= tasks_.size()) throw Error("join of an invalid task");
        if (tasks_[c].join_consumed) throw Error("task joined twice");
    }
    std::size_t pending = 0;
    for (std::uint32_t c : children) {
        Task& child = tasks_[c];
        child.join_consumed = true;
        if (!child.done) {
            child.joiners.push_back(task);
            pending += 1;
        }
    }
    if (pending == 0)
        delta_ready_.push_back(task);
    else
        tasks_[task].join_pending = pending;
}

void TaskRuntime::finish(std::uint32_t task) {
    Task& t = tasks_[task];
    t.done = true;
    live_ -= 1;
    for (std::uint32_t j : t.joiners) {
        Task& joiner = tasks_[j];
        if (--joiner.join_pending == 0) delta_ready_.push_back(j);
    }
    t.joiners.clear();
    if (t.h) {
        t.h.destroy();
        t.h = nullptr;
    }
}

void TaskRuntime::task_failed(std::uint32_t task, const std::string& what) {
    ledger_.record(sim_.now(), false, "task " + std::to_string(task) + " threw: " + what);
}

std::uint64_t TaskRuntime::next_wake() const {
    std::uint64_t w = kNever;
    if (!delta_ready_.empty()) w = sim_.now();
    if (!delay_wake_.empty()) w = std::min(w, delay_wake_.begin()->first);
    return w;
}

bool TaskRuntime::on_subslot(std::uint64_t t, const std::vector<EdgeFire>& edges) {
    std::vector<std::uint32_t> ready = std::move(delta_ready_);
    delta_ready_.clear();

    if (t != cur_time_) {
        cur_time_ = t;
        auto it = delay_wake_.find(t);
        if (it != delay_wake_.end()) {
            for (std::uint32_t id : it->second) ready.push_back(id);
            delay_wake_.erase(it);
        }
    }

    for (const EdgeFire& e : edges) {
        for (std::size_t i = 0; i < edge_waiters_.size();) {
            EdgeWaiter& w = edge_waiters_[i];
            bool hit = false;
            if (w.sig == e.signal) {
                if (w.dir > 0)
                    hit = e.new_bit == 1 && e.old_bit != 1;
                else if (w.dir < 0)
                    hit = e.new_bit == 0 && e.old_bit != 0;
                else
                    hit = true;
            }
            if (hit && --w.remaining == 0) {
                ready.push_back(w.task);
                edge_waiters_[i] = edge_waiters_.back();
                edge_waiters_.pop_back();
            } else {
                ++i;
            }
        }
    }

    if (ready.empty()) return !delta_ready_.empty();

    // resumption order within a slot is spawn order
    std::sort(ready.begin(), ready.end());
    ready.erase(std::unique(ready.begin(), ready.end()), ready.end());
    for (std::uint32_t id : ready) {
        // a resumed task may spawn and reallocate tasks_, so copy the handle
        if (tasks_[id].done || !tasks_[id].h) continue;
        auto h = tasks_[id].h;
        h.resume();
        if (h.done()) finish(id);
    }
    return !delta_ready_.empty();
}

}  // namespace hgl
