#pragma once

// Candidate option mining from execution-trace batches.
//
// For every logged position i, the actions at i, i+1, ... are appended to a
// growing sequence and each prefix is registered as a candidate option for
// state(i). Growth stops at the option length bound, right after a step
// whose next state satisfies the goal predicate, at an episode boundary, or
// where the available records end.

#include <functional>
#include <map>
#include <ostream>
#include <vector>

#include "autocop/core.hpp"
#include "autocop/trace_log.hpp"

namespace autocop {

/// Orders action sequences by length, then lexicographically.
struct SequenceOrder {
    bool operator()(const ActionSequence& a, const ActionSequence& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

struct OptionCandidate {
    StateKey initiation_state;
    ActionSequence actions;
    double cumulative_reward = 0.0;  // latest occurrence
    double discounted_reward = 0.0;  // latest occurrence, sum of gamma^t * r_t
    std::uint64_t execution_count = 0;

    std::size_t length() const noexcept { return actions.size(); }
    bool operator==(const OptionCandidate&) const = default;
};

struct ExtractionRules {
    std::size_t max_option_length = 8;
    std::function<bool(const StateKey&)> is_goal;  // empty: no goal states
    /// Discount for OptionCandidate::discounted_reward.
    double gamma = 1.0;
};

class OptionStore {
public:
    using CandidateSet = std::map<ActionSequence, OptionCandidate, SequenceOrder>;

    /// Registers one occurrence of `actions` starting in `state`.
    void record(const StateKey& state, const ActionSequence& actions, double cumulative_reward,
                double discounted_reward) {
        auto& set = by_state_[state];
        auto [it, inserted] = set.try_emplace(actions);
        if (inserted) {
            it->second.initiation_state = state;
            it->second.actions = actions;
        }
        it->second.cumulative_reward = cumulative_reward;
        it->second.discounted_reward = discounted_reward;
        ++it->second.execution_count;
    }

    /// Candidates for `state`, ordered by length then lexicographically;
    /// empty for states never seen.
    const CandidateSet& candidates_for(const StateKey& state) const {
        static const CandidateSet empty;
        auto it = by_state_.find(state);
        return it == by_state_.end() ? empty : it->second;
    }

    const std::map<StateKey, CandidateSet>& states() const noexcept { return by_state_; }

    /// Number of candidates with at least `min_length` actions.
    std::size_t candidate_count(std::size_t min_length = 1) const {
        std::size_t n = 0;
        for (const auto& [_, set] : by_state_)
            for (const auto& [seq, _c] : set) n += seq.size() >= min_length;
        return n;
    }

    /// Number of states holding a candidate with at least `min_length` actions.
    std::size_t state_count(std::size_t min_length = 1) const {
        std::size_t n = 0;
        for (const auto& [_, set] : by_state_) {
            for (const auto& [seq, _c] : set) {
                if (seq.size() >= min_length) {
                    ++n;
                    break;
                }
            }
        }
        return n;
    }

    bool empty() const noexcept { return by_state_.empty(); }

    /// Human-readable dump:
    ///   state: [60,0,1]
    ///   reward:-0.2 count:3 -> actions: ["steerLeft","steerRight"]
    void write(std::ostream& out) const {
        bool first = true;
        for (const auto& [state, set] : by_state_) {
            if (!first) out << '\n';
            first = false;
            out << "state: [" << state.canonical() << "]\n";
            for (const auto& [seq, c] : set) {
                out << "reward:" << format_real(c.cumulative_reward) << " count:" << c.execution_count
                    << " -> actions: [";
                for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? ",\"" : "\"") << seq[i] << '"';
                out << "]\n";
            }
        }
    }

    bool operator==(const OptionStore&) const = default;

private:
    std::map<StateKey, CandidateSet> by_state_;
};

/// Folds one trace batch into `store`. Only the batch's primary records act
/// as start positions; lookahead records only extend sequences.
inline void extract_batch(OptionStore& store, const TraceBatch& batch, const ExtractionRules& rules) {
    if (rules.max_option_length == 0) throw Error(Errc::ConfigError, "max option length must be positive");
    const auto records = batch.records;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].step != records[i - 1].step + 1)
            throw Error(Errc::SequenceError, "batch records are not consecutive at step " +
                                                 std::to_string(records[i].step));

    for (std::size_t i = 0; i < batch.primary; ++i) {
        const TraceRecord& start = records[i];
        if (rules.is_goal && rules.is_goal(start.state)) continue;
        ActionSequence seq;
        double reward = 0.0, discounted = 0.0, discount = 1.0;
        for (std::size_t j = 0; j < rules.max_option_length && i + j < records.size(); ++j) {
            const TraceRecord& r = records[i + j];
            if (r.episode != start.episode) break;
            seq.push_back(r.action);
            reward += r.reward;
            discounted += discount * r.reward;
            discount *= rules.gamma;
            store.record(start.state, seq, reward, discounted);
            if (rules.is_goal && rules.is_goal(r.next_state)) break;
        }
    }
}

/// Runs extraction over a whole trace in batches of `batch_size`, with the
/// lookahead needed for options that span a batch boundary.
inline void extract_trace(OptionStore& store, const Trace& trace, std::size_t batch_size,
                          const ExtractionRules& rules) {
    TraceCursor cursor;
    while (cursor.last_batch_end < trace.size())
        extract_batch(store, trace.read_batch(cursor, batch_size, rules.max_option_length - 1), rules);
}

}  // namespace autocop
