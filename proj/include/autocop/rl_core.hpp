#pragma once

// Tabular Q-learning over primitive actions and options.

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "autocop/core.hpp"
#include "autocop/random.hpp"

namespace autocop {

/// A primitive action or an option (a fixed primitive-action sequence).
///
/// The total order used for deterministic tie-breaking puts primitives
/// before options; primitives compare by name, options by length and then
/// lexicographically by their action names.
struct AugmentedAction {
    enum class Kind : std::uint8_t { Primitive, Option };

    Kind kind = Kind::Primitive;
    ActionSequence actions;

    static AugmentedAction primitive(ActionId id) { return {Kind::Primitive, {std::move(id)}}; }
    static AugmentedAction option(ActionSequence seq) { return {Kind::Option, std::move(seq)}; }

    bool is_option() const noexcept { return kind == Kind::Option; }
    std::size_t length() const noexcept { return actions.size(); }

    /// `steerLeft` for primitives, `[steerLeft,steerRight]` for options.
    std::string key() const {
        if (kind == Kind::Primitive) return actions.front();
        return "[" + join(actions, ",") + "]";
    }

    static AugmentedAction parse(std::string_view text) {
        if (text.empty()) throw Error(Errc::ParseError, "empty action key");
        if (text.front() != '[') return primitive(std::string(text));
        if (text.back() != ']' || text.size() < 3)
            throw Error(Errc::ParseError, "malformed option key '" + std::string(text) + "'");
        ActionSequence seq;
        for (auto part : split(text.substr(1, text.size() - 2), ',')) seq.emplace_back(part);
        return option(std::move(seq));
    }

    friend bool operator==(const AugmentedAction&, const AugmentedAction&) = default;
    friend std::strong_ordering operator<=>(const AugmentedAction& a, const AugmentedAction& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        if (auto c = a.actions.size() <=> b.actions.size(); c != 0) return c;
        return a.actions <=> b.actions;
    }
};

enum class OptionDiscount {
    PerStep,  ///< bootstrap with gamma^k for an option that consumed k steps
    Flat,     ///< bootstrap with gamma regardless of option length
};

struct LearningParams {
    double alpha = 0.1;
    double gamma = 0.6;
    double epsilon_explore = 0.2;
    double epsilon_exploit = 0.001;
    std::uint64_t exploration_steps = 0;
    OptionDiscount option_discount = OptionDiscount::PerStep;

    /// Two-phase schedule: explore until `exploration_steps`, then exploit.
    double epsilon_at(std::uint64_t step) const {
        return step < exploration_steps ? epsilon_explore : epsilon_exploit;
    }

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::ConfigError, "alpha must be in (0,1]");
        if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(Errc::ConfigError, "gamma must be in [0,1)");
        if (!(epsilon_explore >= 0.0 && epsilon_explore <= 1.0) ||
            !(epsilon_exploit >= 0.0 && epsilon_exploit <= 1.0))
            throw Error(Errc::ConfigError, "epsilon values must be in [0,1]");
        if (epsilon_exploit > epsilon_explore)
            throw Error(Errc::ConfigError, "exploit epsilon must not exceed explore epsilon");
    }
};

class QTable {
public:
    struct Entry {
        double value = 0.0;
        std::uint64_t updates = 0;
    };
    using Row = std::map<AugmentedAction, Entry>;

    /// Q(s, a); unseen pairs are 0.
    double value(const StateKey& s, const AugmentedAction& a) const {
        const Entry* e = find(s, a);
        return e ? e->value : 0.0;
    }

    std::uint64_t updates(const StateKey& s, const AugmentedAction& a) const {
        const Entry* e = find(s, a);
        return e ? e->updates : 0;
    }

    void set(const StateKey& s, const AugmentedAction& a, double v) { rows_[s][a].value = v; }

    Entry& entry(const StateKey& s, const AugmentedAction& a) { return rows_[s][a]; }

    const Row* row(const StateKey& s) const {
        auto it = rows_.find(s);
        return it == rows_.end() ? nullptr : &it->second;
    }

    /// max over `available` of Q(s, .); 0 when `available` is empty.
    double max_value(const StateKey& s, std::span<const AugmentedAction> available) const {
        if (available.empty()) return 0.0;
        const Row* r = row(s);
        double best = -INFINITY;
        for (const auto& a : available) {
            double v = 0.0;
            if (r) {
                if (auto it = r->find(a); it != r->end()) v = it->second.value;
            }
            best = std::max(best, v);
        }
        return best;
    }

    std::size_t state_count() const noexcept { return rows_.size(); }

    /// One `state<TAB>actionKey<TAB>value` line per stored pair, sorted.
    void write(std::ostream& out) const {
        std::map<StateKey, const Row*> sorted;
        for (const auto& [s, r] : rows_) sorted.emplace(s, &r);
        for (const auto& [s, r] : sorted)
            for (const auto& [a, e] : *r)
                out << s.canonical() << '\t' << a.key() << '\t' << format_real(e.value) << '\n';
    }

    static QTable read(std::istream& in) {
        QTable q;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto cols = split(line, '\t');
            if (cols.size() != 3) throw Error(Errc::ParseError, "q-table line needs 3 columns: " + line);
            q.set(StateKey(std::string(cols[0])), AugmentedAction::parse(cols[1]), parse_real(cols[2]));
        }
        return q;
    }

    bool operator==(const QTable& other) const {
        if (rows_.size() != other.rows_.size()) return false;
        for (const auto& [s, r] : rows_) {
            auto it = other.rows_.find(s);
            if (it == other.rows_.end() || it->second.size() != r.size()) return false;
            for (const auto& [a, e] : r) {
                auto jt = it->second.find(a);
                if (jt == it->second.end() || jt->second.value != e.value) return false;
            }
        }
        return true;
    }

private:
    const Entry* find(const StateKey& s, const AugmentedAction& a) const {
        const Row* r = row(s);
        if (!r) return nullptr;
        auto it = r->find(a);
        return it == r->end() ? nullptr : &it->second;
    }

    std::unordered_map<StateKey, Row, StateKeyHash> rows_;
};

/// Q-learning update for an action that consumed `k` environment steps:
///
///   Q(s,a) += alpha * (reward + discount * max_a' Q(s',a') - Q(s,a))
///
/// with discount = gamma^k (PerStep) or gamma (Flat). `reward` is the
/// discounted return collected inside the action. An empty `next_available`
/// marks a terminal transition (no bootstrap). Returns the new value.
inline double update_q(QTable& q, const StateKey& s, const AugmentedAction& a, double reward,
                       const StateKey& s_next, std::span<const AugmentedAction> next_available,
                       unsigned k, const LearningParams& params) {
    if (!std::isfinite(reward)) throw Error(Errc::InvalidReward, "reward must be finite");
    if (k == 0) throw Error(Errc::InvalidReward, "an action consumes at least one step");
    const double discount = params.option_discount == OptionDiscount::PerStep
                                ? std::pow(params.gamma, static_cast<double>(k))
                                : params.gamma;
    const double bootstrap = q.max_value(s_next, next_available);
    auto& e = q.entry(s, a);
    e.value += params.alpha * (reward + discount * bootstrap - e.value);
    ++e.updates;
    return e.value;
}

/// Greedy choice over `available`; ties go to the smallest action in the
/// AugmentedAction order.
inline const AugmentedAction& argmax_q(const QTable& q, const StateKey& s,
                                       std::span<const AugmentedAction> available) {
    if (available.empty()) throw Error(Errc::NoActions, "no actions available in " + s.canonical());
    const QTable::Row* r = q.row(s);
    const AugmentedAction* best = nullptr;
    double best_value = 0.0;
    for (const auto& a : available) {
        double v = 0.0;
        if (r) {
            if (auto it = r->find(a); it != r->end()) v = it->second.value;
        }
        if (!best || v > best_value || (v == best_value && a < *best)) {
            best = &a;
            best_value = v;
        }
    }
    return *best;
}

/// With probability epsilon a uniform member of `available`, else argmax_q.
/// Always consumes one draw for the coin and, when exploring, one for the
/// index, so runs are reproducible for a given seed.
inline const AugmentedAction& select_epsilon_greedy(const QTable& q, const StateKey& s,
                                                    std::span<const AugmentedAction> available,
                                                    double epsilon, Rng& rng) {
    if (available.empty()) throw Error(Errc::NoActions, "no actions available in " + s.canonical());
    if (rng.uniform01() < epsilon) return available[rng.index(available.size())];
    return argmax_q(q, s, available);
}

}  // namespace autocop
