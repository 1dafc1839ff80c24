#include "hgl/assertion.hpp"

#include <algorithm>

namespace hgl {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    if (a == kUnbounded || b == kUnbounded) return kUnbounded;
    return a + b;
}

PatternPtr mk(Pattern p) { return std::make_shared<Pattern>(std::move(p)); }

}  // namespace

std::uint64_t Pattern::max_duration() const {
    switch (kind) {
        case Kind::WaitN: return n;
        case Kind::WaitRange: return n;
        case Kind::EdgeOf:
        case Kind::Until: return kUnbounded;
        case Kind::Capture:
        case Kind::SignalTrue:
        case Kind::Cmp:
        case Kind::Rose:
        case Kind::Fell: return 0;
        case Kind::Not: return a->max_duration();
        case Kind::And:
        case Kind::Or: return std::max(a->max_duration(), b->max_duration());
        case Kind::Seq:
        case Kind::Implies: return sat_add(a->max_duration(), b->max_duration());
    }
    return 0;
}

void Pattern::collect_signals(std::set<SignalId>& out) const {
    switch (kind) {
        case Kind::EdgeOf:
        case Kind::Until:
        case Kind::Capture:
        case Kind::SignalTrue:
        case Kind::Cmp:
        case Kind::Rose:
        case Kind::Fell:
            out.insert(sig);
            break;
        default:
            break;
    }
    if (a) a->collect_signals(out);
    if (b) b->collect_signals(out);
}

namespace pat {

PatternPtr wait(std::uint64_t n) {
    Pattern p;
    p.kind = Pattern::Kind::WaitN;
    p.n = n;
    return mk(std::move(p));
}

PatternPtr wait(std::uint64_t m, std::uint64_t n) {
    if (m > n) throw Error("wait range is inverted");
    Pattern p;
    p.kind = Pattern::Kind::WaitRange;
    p.m = m;
    p.n = n;
    return mk(std::move(p));
}

PatternPtr edge_of(SignalId s) {
    Pattern p;
    p.kind = Pattern::Kind::EdgeOf;
    p.sig = s;
    return mk(std::move(p));
}

PatternPtr until(SignalId s, const Logic& v) {
    Pattern p;
    p.kind = Pattern::Kind::Until;
    p.sig = s;
    p.lit = v;
    return mk(std::move(p));
}

PatternPtr capture(const std::string& name, SignalId s) {
    Pattern p;
    p.kind = Pattern::Kind::Capture;
    p.name = name;
    p.sig = s;
    return mk(std::move(p));
}

PatternPtr repeat(PatternPtr p, std::uint64_t n) {
    if (n == 0 || n > 256) throw Error("repeat count out of range");
    // each iteration starts one tick after the previous one
    PatternPtr acc = p;
    for (std::uint64_t i = 1; i < n; ++i) acc = seq(acc, seq(wait(1), p));
    return acc;
}

PatternPtr repeat(PatternPtr p, std::uint64_t m, std::uint64_t n) {
    if (m > n || n > 256) throw Error("repeat range out of range");
    PatternPtr acc;
    for (std::uint64_t k = std::max<std::uint64_t>(m, 1); k <= n; ++k) {
        PatternPtr r = repeat(p, k);
        acc = acc ? or_p(acc, r) : r;
    }
    if (m == 0) acc = acc ? or_p(wait(0), acc) : wait(0);
    return acc;
}

PatternPtr not_p(PatternPtr p) {
    if (p->max_duration() == kUnbounded)
        throw Error("negation needs a bounded pattern");
    Pattern r;
    r.kind = Pattern::Kind::Not;
    r.a = std::move(p);
    return mk(std::move(r));
}

PatternPtr and_p(PatternPtr p, PatternPtr q) {
    Pattern r;
    r.kind = Pattern::Kind::And;
    r.a = std::move(p);
    r.b = std::move(q);
    return mk(std::move(r));
}

PatternPtr seq(PatternPtr p, PatternPtr q) {
    Pattern r;
    r.kind = Pattern::Kind::Seq;
    r.a = std::move(p);
    r.b = std::move(q);
    return mk(std::move(r));
}

PatternPtr seq(std::initializer_list<PatternPtr> ps) {
    PatternPtr acc;
    for (const PatternPtr& p : ps) acc = acc ? seq(acc, p) : p;
    if (!acc) throw Error("empty sequence");
    return acc;
}

PatternPtr or_p(PatternPtr p, PatternPtr q) {
    Pattern r;
    r.kind = Pattern::Kind::Or;
    r.a = std::move(p);
    r.b = std::move(q);
    return mk(std::move(r));
}

PatternPtr implies(PatternPtr p, PatternPtr q) {
    Pattern r;
    r.kind = Pattern::Kind::Implies;
    r.a = std::move(p);
    r.b = std::move(q);
    return mk(std::move(r));
}

PatternPtr truthy(SignalId s) {
    Pattern p;
    p.kind = Pattern::Kind::SignalTrue;
    p.sig = s;
    return mk(std::move(p));
}

PatternPtr cmp(Pattern::CmpOp op, SignalId s, const Logic& v) {
    Pattern p;
    p.kind = Pattern::Kind::Cmp;
    p.op = op;
    p.sig = s;
    p.lit = v;
    return mk(std::move(p));
}

PatternPtr cmp_captured(Pattern::CmpOp op, SignalId s, const std::string& name) {
    Pattern p;
    p.kind = Pattern::Kind::Cmp;
    p.op = op;
    p.sig = s;
    p.name = name;
    return mk(std::move(p));
}

PatternPtr rose(SignalId s) {
    Pattern p;
    p.kind = Pattern::Kind::Rose;
    p.sig = s;
    return mk(std::move(p));
}

PatternPtr fell(SignalId s) {
    Pattern p;
    p.kind = Pattern::Kind::Fell;
    p.sig = s;
    return mk(std::move(p));
}

}  // namespace pat

// ---------------------------------------------------------------------------
// Evaluation

const Logic& SampleRow::at(SignalId s) const {
    auto it = values.find(s);
    if (it == values.end()) throw Error("signal not sampled by this assertion context");
    return it->second;
}

namespace {

// history rows: row k+1 holds the samples of tick k; row 0 the pre-history.
std::uint64_t ticks_of(const std::vector<SampleRow>& history) {
    return history.empty() ? 0 : history.size() - 1;
}

bool definitely_true(const Logic& l) {
    return !l.has_x() && !l.is_zero();
}

bool cmp_holds(Pattern::CmpOp op, const Logic& sample, const Logic& rhs_raw) {
    Logic rhs = rhs_raw.width() == sample.width()
                    ? rhs_raw
                    : logic_resize(rhs_raw, sample.width(), false);
    switch (op) {
        case Pattern::CmpOp::Eq: return definitely_true(logic_eq(sample, rhs));
        case Pattern::CmpOp::Ne: return logic_eq(sample, rhs) == Logic::zeros(1);
        case Pattern::CmpOp::Lt: return definitely_true(logic_lt_u(sample, rhs));
        case Pattern::CmpOp::Gt: return definitely_true(logic_gt_u(sample, rhs));
    }
    return false;
}

}  // namespace

EvalOut eval_pattern(const Pattern& p, std::uint64_t start, const CaptureEnv& env,
                     const std::vector<SampleRow>& history) {
    std::uint64_t H = ticks_of(history);
    EvalOut out;
    auto row = [&](std::uint64_t tick) -> const SampleRow& { return history[tick + 1]; };

    switch (p.kind) {
        case Pattern::Kind::WaitN:
            out.ends.emplace_back(start + p.n, env);
            return out;
        case Pattern::Kind::WaitRange:
            for (std::uint64_t k = p.m; k <= p.n; ++k) out.ends.emplace_back(start + k, env);
            return out;
        case Pattern::Kind::EdgeOf: {
            for (std::uint64_t k = start + 1; k < H; ++k) {
                if (row(k).at(p.sig) != row(k - 1).at(p.sig)) {
                    out.ends.emplace_back(k, env);
                    return out;
                }
            }
            out.pending = true;
            return out;
        }
        case Pattern::Kind::Until: {
            for (std::uint64_t k = start; k < H; ++k) {
                if (row(k).at(p.sig) == logic_resize(p.lit, row(k).at(p.sig).width(), false)) {
                    out.ends.emplace_back(k, env);
                    return out;
                }
            }
            out.pending = true;
            return out;
        }
        case Pattern::Kind::Capture: {
            if (start >= H) {
                out.pending = true;
                return out;
            }
            CaptureEnv e2 = env;
            e2[p.name] = row(start).at(p.sig);
            out.ends.emplace_back(start, std::move(e2));
            return out;
        }
        case Pattern::Kind::SignalTrue: {
            if (start >= H) {
                out.pending = true;
                return out;
            }
            if (definitely_true(logic_reduce(row(start).at(p.sig), ReduceKind::Or)))
                out.ends.emplace_back(start, env);
            return out;
        }
        case Pattern::Kind::Cmp: {
            if (start >= H) {
                out.pending = true;
                return out;
            }
            Logic rhs = p.lit;
            if (!p.name.empty()) {
                auto it = env.find(p.name);
                if (it == env.end()) return out;  // nothing captured: no match
                rhs = it->second;
            }
            if (cmp_holds(p.op, row(start).at(p.sig), rhs)) out.ends.emplace_back(start, env);
            return out;
        }
        case Pattern::Kind::Rose:
        case Pattern::Kind::Fell: {
            if (start >= H) {
                out.pending = true;
                return out;
            }
            int prev = history[start].at(p.sig).bit(0);
            int cur = row(start).at(p.sig).bit(0);
            bool hit = p.kind == Pattern::Kind::Rose ? (prev == 0 && cur == 1)
                                                     : (prev == 1 && cur == 0);
            if (hit) out.ends.emplace_back(start, env);
            return out;
        }
        case Pattern::Kind::Not: {
            EvalOut sub = eval_pattern(*p.a, start, env, history);
            if (!sub.ends.empty()) return out;  // matched: negation fails
            if (sub.pending) {
                out.pending = true;
                return out;
            }
            out.ends.emplace_back(start + p.a->max_duration(), env);
            return out;
        }
        case Pattern::Kind::And: {
            EvalOut ea = eval_pattern(*p.a, start, env, history);
            EvalOut eb = eval_pattern(*p.b, start, env, history);
            bool fail_a = ea.ends.empty() && !ea.pending;
            bool fail_b = eb.ends.empty() && !eb.pending;
            if (fail_a || fail_b) return out;
            for (const auto& [e1, v1] : ea.ends)
                for (const auto& [e2, v2] : eb.ends) {
                    CaptureEnv merged = v1;
                    for (const auto& kv : v2) merged[kv.first] = kv.second;
                    out.ends.emplace_back(std::max(e1, e2), std::move(merged));
                }
            out.pending = ea.pending || eb.pending;
            return out;
        }
        case Pattern::Kind::Seq: {
            EvalOut ea = eval_pattern(*p.a, start, env, history);
            out.pending = ea.pending;
            for (const auto& [e, v] : ea.ends) {
                EvalOut eb = eval_pattern(*p.b, e, v, history);
                out.pending = out.pending || eb.pending;
                for (auto& r : eb.ends) out.ends.push_back(std::move(r));
            }
            return out;
        }
        case Pattern::Kind::Or: {
            EvalOut ea = eval_pattern(*p.a, start, env, history);
            EvalOut eb = eval_pattern(*p.b, start, env, history);
            out.ends = std::move(ea.ends);
            for (auto& r : eb.ends) out.ends.push_back(std::move(r));
            out.pending = ea.pending || eb.pending;
            return out;
        }
        case Pattern::Kind::Implies: {
            EvalOut ea = eval_pattern(*p.a, start, env, history);
            if (ea.ends.empty() && !ea.pending) {
                out.ends.emplace_back(start, env);  // vacuous pass
                return out;
            }
            bool pending = ea.pending;
            std::vector<std::pair<std::uint64_t, CaptureEnv>> results;
            for (const auto& [e, v] : ea.ends) {
                EvalOut eb = eval_pattern(*p.b, e, v, history);
                if (eb.ends.empty() && !eb.pending) return out;  // falsified, final
                if (eb.ends.empty())
                    pending = true;
                else
                    for (auto& r : eb.ends) results.push_back(std::move(r));
            }
            if (pending) {
                out.pending = true;
                return out;  // confirmed ends only once fully decided
            }
            out.ends = std::move(results);
            return out;
        }
    }
    return out;
}

AttemptState Attempt::step(const std::vector<SampleRow>& history) {
    if (state_ != AttemptState::Running) return state_;
    EvalOut r = eval_pattern(*pattern_, start_, {}, history);
    if (!r.ends.empty())
        state_ = AttemptState::Success;
    else if (!r.pending)
        state_ = AttemptState::Fail;
    return state_;
}

std::vector<AttemptState> evaluate_on_trace(const PatternPtr& p,
                                            const std::vector<SampleRow>& history) {
    std::vector<AttemptState> out;
    for (std::uint64_t tick = 0; tick < ticks_of(history); ++tick) {
        Attempt a(p, tick);
        out.push_back(a.step(history));
    }
    return out;
}

// ---------------------------------------------------------------------------
// AssertionContext

AssertionContext::AssertionContext(SimCore& sim, ResultLedger& ledger, SignalId trigger,
                                   bool trigger_pos)
    : sim_(sim), ledger_(ledger), trigger_(trigger), trigger_pos_(trigger_pos) {
    sim_.watch(trigger);
    sim_.add_client(this);
}

void AssertionContext::set_disable(SignalId sig, bool active_level) {
    has_disable_ = true;
    disable_ = sig;
    disable_level_ = active_level;
    if (!shadow_.count(sig)) shadow_.emplace(sig, sim_.value_of(sig));
    sampled_.insert(sig);
}

void AssertionContext::check(const std::string& name, PatternPtr p) {
    std::set<SignalId> sigs;
    p->collect_signals(sigs);
    for (SignalId s : sigs) {
        sampled_.insert(s);
        if (!shadow_.count(s)) shadow_.emplace(s, sim_.value_of(s));
    }
    properties_.push_back(Property{name, std::move(p), {}});
}

void AssertionContext::sample_now() {
    SampleRow row;
    for (SignalId s : sampled_) row.values.emplace(s, shadow_.at(s));
    history_.push_back(std::move(row));
}

bool AssertionContext::on_subslot(std::uint64_t t, const std::vector<EdgeFire>& edges) {
    for (const EdgeFire& e : edges) {
        if (e.signal != trigger_) continue;
        bool fired = trigger_pos_ ? (e.old_bit == 0 && e.new_bit == 1)
                                  : (e.old_bit == 1 && e.new_bit == 0);
        if (!fired) continue;

        if (has_disable_) {
            const Logic& d = shadow_.at(disable_);
            bool active = !d.has_x() && (d.bit(0) == (disable_level_ ? 1 : 0));
            if (active) {
                for (Property& prop : properties_) {
                    for (Attempt& a : prop.attempts)
                        if (a.state() == AttemptState::Running) killed_ += 1;
                    prop.attempts.clear();
                }
                continue;
            }
        }

        if (history_.empty()) sample_now();  // the pre-trigger snapshot
        sample_now();
        std::uint64_t tick = history_.size() - 2;

        for (Property& prop : properties_) {
            for (Attempt& a : prop.attempts) {
                if (a.state() != AttemptState::Running) continue;
                AttemptState s = a.step(history_);
                if (s != AttemptState::Running)
                    ledger_.record(t, s == AttemptState::Success,
                                   prop.name + " attempt@" + std::to_string(a.start_tick()));
            }
            prop.attempts.emplace_back(prop.pattern, tick);
            started_ += 1;
            AttemptState s = prop.attempts.back().step(history_);
            if (s != AttemptState::Running)
                ledger_.record(t, s == AttemptState::Success,
                               prop.name + " attempt@" + std::to_string(tick));
        }
    }
    return false;
}

void AssertionContext::on_time_end(std::uint64_t) {
    for (SignalId s : sampled_) shadow_.at(s) = sim_.value_of(s);
}

std::uint64_t AssertionContext::attempts_incomplete() const {
    std::uint64_t n = 0;
    for (const Property& prop : properties_)
        for (const Attempt& a : prop.attempts)
            if (a.state() == AttemptState::Running) n += 1;
    return n;
}

}  // namespace hgl
