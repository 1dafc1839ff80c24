#pragma once

// Concurrent assertions: a pattern algebra matched against sampled signal
// values across clock edges, like regular expressions over time. Properties
// are checked by spawning one matching attempt per trigger edge; sampling is
// preponed (values as of just before the slot's updates).

#include <map>
#include <set>

#include "hgl/sim.hpp"
#include "hgl/task.hpp"

namespace hgl {

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

struct Pattern {
    enum class Kind {
        WaitN,       // advance n ticks
        WaitRange,   // advance m..n ticks (any alternative)
        EdgeOf,      // wait until the next sampled change of a signal
        Until,       // wait until a signal samples equal to a value
        Capture,     // cache the sampled value under a name
        Not,         // succeeds when a bounded pattern cannot match
        And,         // both from the same tick
        Seq,         // q starts where p ended
        Or,          // either
        Implies,     // antecedent failure is a (vacuous) success
        SignalTrue,  // sampled value is non-zero
        Cmp,         // compare a sample against a literal or a captured name
        Rose,        // 0 -> 1 between consecutive samples
        Fell,        // 1 -> 0
    };
    enum class CmpOp { Eq, Ne, Lt, Gt };

    Kind kind;
    std::uint64_t m = 0, n = 0;
    SignalId sig = 0;
    Logic lit;
    std::string name;
    CmpOp op = CmpOp::Eq;
    PatternPtr a, b;

    // Longest number of ticks the pattern can span; kUnbounded for waits
    // without a horizon.
    std::uint64_t max_duration() const;
    void collect_signals(std::set<SignalId>& out) const;
};

// Pattern constructors.
namespace pat {
PatternPtr wait(std::uint64_t n);
PatternPtr wait(std::uint64_t m, std::uint64_t n);
PatternPtr edge_of(SignalId s);
PatternPtr until(SignalId s, const Logic& v);
PatternPtr capture(const std::string& name, SignalId s);
PatternPtr repeat(PatternPtr p, std::uint64_t n);
PatternPtr repeat(PatternPtr p, std::uint64_t m, std::uint64_t n);
PatternPtr not_p(PatternPtr p);  // rejects unbounded operands
PatternPtr and_p(PatternPtr p, PatternPtr q);
PatternPtr seq(PatternPtr p, PatternPtr q);
PatternPtr seq(std::initializer_list<PatternPtr> ps);
PatternPtr or_p(PatternPtr p, PatternPtr q);
PatternPtr implies(PatternPtr p, PatternPtr q);
PatternPtr truthy(SignalId s);
PatternPtr cmp(Pattern::CmpOp op, SignalId s, const Logic& v);
PatternPtr cmp_captured(Pattern::CmpOp op, SignalId s, const std::string& name);
PatternPtr rose(SignalId s);
PatternPtr fell(SignalId s);
}  // namespace pat

// One sampled row per trigger edge.
struct SampleRow {
    std::map<SignalId, Logic> values;
    const Logic& at(SignalId s) const;
};

using CaptureEnv = std::map<std::string, Logic>;

enum class AttemptState { Running, Success, Fail };

// Online matcher over a growing sample history. `history[0]` holds the
// pre-trigger samples; the attempt's tick k reads history[k + 1].
class Attempt {
public:
    Attempt(PatternPtr p, std::size_t start_tick) : pattern_(std::move(p)), start_(start_tick) {}

    // Re-evaluates against the history (shared, indexed from the context).
    AttemptState step(const std::vector<SampleRow>& history);
    AttemptState state() const { return state_; }
    std::size_t start_tick() const { return start_; }

private:
    PatternPtr pattern_;
    std::size_t start_;
    AttemptState state_ = AttemptState::Running;
};

// Evaluation core, exposed for property tests: matches `p` starting at tick
// `start` against `ticks` sampled rows (row index = tick + 1; row 0 is the
// pre-history sample). Returns the set of end ticks; `pending` reports
// whether more samples could still change the outcome.
struct EvalOut {
    std::vector<std::pair<std::uint64_t, CaptureEnv>> ends;
    bool pending = false;
};
EvalOut eval_pattern(const Pattern& p, std::uint64_t start, const CaptureEnv& env,
                     const std::vector<SampleRow>& history);

// Evaluates every trigger-edge attempt of a property over a complete trace:
// the verdict list has one entry per spawn tick.
std::vector<AttemptState> evaluate_on_trace(const PatternPtr& p,
                                            const std::vector<SampleRow>& history);

class AssertionContext : public ISimClient {
public:
    AssertionContext(SimCore& sim, ResultLedger& ledger, SignalId trigger, bool trigger_pos);
    void set_disable(SignalId sig, bool active_level);
    void check(const std::string& name, PatternPtr p);

    std::uint64_t attempts_started() const { return started_; }
    std::uint64_t attempts_killed() const { return killed_; }
    std::uint64_t attempts_incomplete() const;

    bool on_subslot(std::uint64_t t, const std::vector<EdgeFire>& edges) override;
    void on_time_end(std::uint64_t t) override;

private:
    void sample_now();

    struct Property {
        std::string name;
        PatternPtr pattern;
        std::vector<Attempt> attempts;
    };

    SimCore& sim_;
    ResultLedger& ledger_;
    SignalId trigger_;
    bool trigger_pos_;
    bool has_disable_ = false;
    SignalId disable_ = 0;
    bool disable_level_ = false;

    std::set<SignalId> sampled_;
    std::map<SignalId, Logic> shadow_;  // values at the end of the previous slot
    std::vector<SampleRow> history_;    // row 0: pre-trigger snapshot
    std::vector<Property> properties_;
    std::uint64_t started_ = 0;
    std::uint64_t killed_ = 0;
    bool fired_this_slot_ = false;
};

}  // namespace hgl
