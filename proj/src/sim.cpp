#include "hgl/sim.hpp"

#include <algorithm>
#include <sstream>

namespace hgl {

std::string SimStats::text() const {
    std::ostringstream os;
    os << "events_applied=" << events_applied << "\n";
    os << "events_scheduled=" << events_scheduled << "\n";
    os << "events_scheduled_x=" << events_scheduled_x << "\n";
    os << "execs_fast=" << execs_fast << "\n";
    os << "execs_full=" << execs_full << "\n";
    os << "path_checks=" << path_checks << "\n";
    os << "plane_branches=" << plane_branches << "\n";
    os << "slots=" << slots << "\n";
    os << "subslots=" << subslots << "\n";
    os << "value_updates=" << value_updates << "\n";
    os << "x_updates=" << x_updates << "\n";
    return os.str();
}

SimCore::SimCore(Circuit& circuit, Strategy strategy) : circuit_(circuit), strategy_(strategy) {
    if (!circuit.frozen()) throw Error("SimCore requires a frozen circuit");
    reset();
}

void SimCore::reset() {
    t_ = 0;
    future_.clear();
    delta_.clear();
    triggered_.clear();
    fired_.clear();
    stats_ = SimStats{};
    for (SignalId i = 0; i < circuit_.signal_count(); ++i) {
        SignalData& s = circuit_.signal(i);
        s.cur_v = s.init.v_words();
        s.cur_x = s.init.x_words();
        // The binary strategy has no unknown plane to maintain.
        if (strategy_ == Strategy::BinaryOnly) std::fill(s.cur_x.begin(), s.cur_x.end(), 0);
        s.dirty = false;
    }
    dirty_.clear();
    for (GateId i = 0; i < circuit_.gate_count(); ++i) {
        Gate& g = circuit_.gate(i);
        g.waiting = false;
        g.x_count = 0;
        for (const Reader& r : g.ins)
            if (circuit_.signal(r.signal).x_nonzero()) g.x_count += 1;
        // An output still holding power-on X needs one full pass to clear
        // its unknown plane before the fast path may take over.
        g.x_changed = false;
        for (const Writer& w : g.outs)
            if (circuit_.signal(w.signal).x_nonzero()) g.x_changed = true;
        g.on_sim_reset(*this);
    }
    primed_ = true;
}

void SimCore::schedule(SignalId s, bool x_plane, const std::uint64_t* w, std::size_t n,
                       std::uint64_t at) {
    if (at < t_) throw Error("event scheduled into the past");
    stats_.events_scheduled += 1;
    if (x_plane) stats_.events_scheduled_x += 1;
    Event ev{s, x_plane, SmallWords(w, n)};
    if (at == t_)
        delta_.push_back(std::move(ev));
    else
        future_[at].push_back(std::move(ev));
}

void SimCore::drive(SignalId s, const Logic& value) { drive_at(s, value, t_); }

void SimCore::drive_at(SignalId s, const Logic& value, std::uint64_t at) {
    const SignalData& sd = circuit_.signal(s);
    if (value.width() != sd.width)
        throw Error("drive width mismatch on '" + sd.name_hint + "'");
    schedule(s, false, value.v_data(), value.word_count(), at);
    schedule(s, true, value.x_data(), value.word_count(), at);
}

void SimCore::out_full(const Gate& g, std::size_t out_idx, const Logic& v) {
    const Writer& w = g.outs[out_idx];
    const SignalData& s = circuit_.signal(w.signal);
    if (v.width() != s.width)
        throw Error("gate g" + std::to_string(g.id) + " produced width " +
                    std::to_string(v.width()) + " for signal of width " + std::to_string(s.width));
    std::uint64_t at = t_ + g.delay;
    schedule(w.signal, false, v.v_data(), v.word_count(), at);
    schedule(w.signal, true, v.x_data(), v.word_count(), at);
}

void SimCore::out_fast(const Gate& g, std::size_t out_idx, const std::uint64_t* w,
                       std::size_t n) {
    const Writer& wr = g.outs[out_idx];
    schedule(wr.signal, false, w, n, t_ + g.delay);
}

void SimCore::watch(SignalId s) {
    SignalData& sd = circuit_.signal(s);
    if (sd.width != 1) throw Error("edge watch requires a 1-bit signal");
    sd.watched = true;
}

namespace {
int tri_bit_of(const SignalData& s) {
    if (s.cur_x[0] & 1) return 2;
    return static_cast<int>(s.cur_v[0] & 1);
}
}  // namespace

void SimCore::update_phase(std::vector<Event>& events) {
    for (Event& ev : events) {
        stats_.events_applied += 1;
        SignalData& s = circuit_.signal(ev.signal);
        int old_bit = s.watched ? tri_bit_of(s) : -1;
        stats_.plane_branches += 1;  // the one branch on the target plane
        if (ev.x_plane) {
            if (ev.words.equals(s.cur_x)) continue;
            bool was = s.x_nonzero();
            std::copy(ev.words.data(), ev.words.data() + ev.words.size(), s.cur_x.begin());
            int dx = (s.x_nonzero() ? 1 : 0) - (was ? 1 : 0);
            stats_.x_updates += 1;
            for (GateId gid : s.sensitive_fanout) {
                Gate& g = circuit_.gate(gid);
                g.x_count += dx;
                g.x_changed = true;
                g.waiting = true;
                triggered_.push_back(&g);
            }
        } else {
            if (ev.words.equals(s.cur_v)) continue;
            std::copy(ev.words.data(), ev.words.data() + ev.words.size(), s.cur_v.begin());
            stats_.value_updates += 1;
            for (GateId gid : s.sensitive_fanout) {
                Gate& g = circuit_.gate(gid);
                g.waiting = true;
                triggered_.push_back(&g);
            }
        }
        if (!s.dirty) {
            s.dirty = true;
            dirty_.push_back(s.id);
        }
        if (s.watched) {
            int new_bit = tri_bit_of(s);
            if (new_bit != old_bit) fired_.push_back(EdgeFire{s.id, old_bit, new_bit});
        }
    }
}

void SimCore::execute_phase() {
    for (std::size_t i = 0; i < triggered_.size(); ++i) {
        Gate* g = triggered_[i];
        if (!g->waiting) continue;  // duplicate entry
        g->waiting = false;
        stats_.path_checks += 1;
        bool full;
        switch (strategy_) {
            case Strategy::AlwaysFull: full = true; break;
            case Strategy::BinaryOnly: full = false; break;
            default: full = g->always_full || g->x_count > 0 || g->x_changed; break;
        }
        if (full) {
            g->eval_full(*this);
            g->x_changed = false;
            stats_.execs_full += 1;
        } else {
            g->eval_fast(*this);
            stats_.execs_fast += 1;
        }
    }
    triggered_.clear();
}

bool SimCore::step_time() {
    std::uint64_t next = kNever;
    if (primed_ || !delta_.empty()) next = t_;
    if (!future_.empty()) next = std::min(next, future_.begin()->first);
    for (ISimClient* c : clients_) next = std::min(next, c->next_wake());
    if (next == kNever) return false;

    t_ = next;
    stats_.slots += 1;
    std::vector<Event> cur;
    if (!delta_.empty()) {
        cur = std::move(delta_);
        delta_.clear();
    }
    if (!future_.empty() && future_.begin()->first == t_) {
        auto it = future_.begin();
        if (cur.empty())
            cur = std::move(it->second);
        else
            for (Event& e : it->second) cur.push_back(std::move(e));
        future_.erase(it);
    }
    if (primed_) {
        // power-on: every gate evaluates once from its init inputs
        for (GateId i = 0; i < circuit_.gate_count(); ++i) {
            Gate& g = circuit_.gate(i);
            g.waiting = true;
            triggered_.push_back(&g);
        }
        primed_ = false;
    }

    while (true) {
        stats_.subslots += 1;
        fired_.clear();
        update_phase(cur);
        execute_phase();
        bool more = false;
        for (ISimClient* c : clients_) more = c->on_subslot(t_, fired_) || more;
        cur.clear();
        if (!delta_.empty()) {
            cur = std::move(delta_);
            delta_.clear();
            more = true;
        }
        if (!more) break;
    }
    for (ISimClient* c : clients_) c->on_time_end(t_);
    for (SignalId s : dirty_) circuit_.signal(s).dirty = false;
    dirty_.clear();
    t_ += 1;
    return true;
}

bool SimCore::idle() const {
    if (primed_ || !delta_.empty() || !future_.empty()) return false;
    for (ISimClient* c : clients_)
        if (c->next_wake() != kNever) return false;
    return true;
}

std::uint64_t SimCore::run_until(std::uint64_t t_end) {
    std::uint64_t n = 0;
    while (true) {
        std::uint64_t next = kNever;
        if (primed_ || !delta_.empty()) next = t_;
        if (!future_.empty()) next = std::min(next, future_.begin()->first);
        for (ISimClient* c : clients_) next = std::min(next, c->next_wake());
        if (next == kNever || next > t_end) break;
        step_time();
        n += 1;
    }
    return n;
}

std::uint64_t SimCore::run_slots(std::uint64_t max_slots) {
    std::uint64_t n = 0;
    while (n < max_slots && step_time()) n += 1;
    return n;
}

std::vector<std::string> SimCore::audit_x_counts() const {
    std::vector<std::string> out;
    for (GateId i = 0; i < circuit_.gate_count(); ++i) {
        const Gate& g = circuit_.gate(i);
        if (g.always_full) continue;
        std::int32_t expected = 0;
        for (const Reader& r : g.ins)
            if (circuit_.signal(r.signal).x_nonzero()) expected += 1;
        if (g.x_count != expected)
            out.push_back("gate g" + std::to_string(i) + " X_count " + std::to_string(g.x_count) +
                          " != expected " + std::to_string(expected));
    }
    return out;
}

}  // namespace hgl
