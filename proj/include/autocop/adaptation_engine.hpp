#pragma once

// Option-level learning, adaptation selection, stub generation and the
// adaptive run-time loop.

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "autocop/cop_runtime.hpp"
#include "autocop/core.hpp"
#include "autocop/environment.hpp"
#include "autocop/option_extractor.hpp"
#include "autocop/random.hpp"
#include "autocop/rl_core.hpp"

namespace autocop {

struct Adaptation {
    ContextId context;
    ActionSequence actions;
    StateKey source_state;
    double q_value = 0.0;

    bool operator==(const Adaptation&) const = default;
};

struct OptionExecutionResult {
    double discounted_return = 0.0;
    unsigned steps = 0;
    StateKey final_state;
    bool terminal = false;
    std::vector<double> rewards;
    std::vector<std::string> events;
};

enum class RewardSource {
    Environment,    ///< the environment's reward
    FixedPositive,  ///< a constant positive reward per executed action
    Frequency,      ///< 1 per encountered state-action pair
};

inline double source_reward(RewardSource source, double env_reward, double fixed_positive = 1.0) {
    switch (source) {
        case RewardSource::Environment: return env_reward;
        case RewardSource::FixedPositive: return fixed_positive;
        case RewardSource::Frequency: return 1.0;
    }
    return env_reward;
}

/// Counters accumulated by the learning and adaptive loops.
struct Metrics {
    std::string environment;
    std::uint64_t decision_points = 0;
    std::uint64_t executed_actions = 0;
    std::uint64_t adaptation_actuations = 0;
    std::uint64_t episodes = 0;
    /// Environment event tag -> number of steps on which it fired.
    std::map<std::string, std::uint64_t> events;
    /// Environment event tag -> number of decision points whose sensed state
    /// showed it (monitor view; steps inside an adaptation are not sensed).
    std::map<std::string, std::uint64_t> sensed_events;
    std::vector<std::uint64_t> episode_decision_points;
    std::vector<std::uint64_t> episode_executed_actions;
    std::uint64_t options_extracted = 0;
    std::uint64_t states_with_options = 0;
    std::uint64_t adaptations_generated = 0;

    std::uint64_t event(const std::string& tag) const {
        auto it = events.find(tag);
        return it == events.end() ? 0 : it->second;
    }
    std::uint64_t sensed(const std::string& tag) const {
        auto it = sensed_events.find(tag);
        return it == sensed_events.end() ? 0 : it->second;
    }
};

/// Called for every primitive step: (state, action, outcome).
using StepObserver = std::function<void(const StateKey&, const ActionId&, const StepOutcome&)>;

inline constexpr const char* kDefaultTarget = "agent";

/// Runs the adaptation bound to the sensed state's context to completion:
/// activate, execute every action in order, deactivate. Stops early only if
/// the environment reports episode termination.
template <Environment E>
OptionExecutionResult execute_adaptation(E& env, ContextRegistry& registry, double gamma,
                                         const StepObserver& observer = {}) {
    const StateKey state = env.sense();
    const ContextId ctx = ContextId::for_state(state);
    registry.activate(ctx);
    const Behavior behavior = registry.dispatch(state);
    const auto* adaptation = std::get_if<BehavioralAdaptation>(&behavior);
    if (!adaptation) {
        registry.deactivate(ctx);
        throw Error(Errc::WrongContext, "no adaptation dispatched for " + state.canonical());
    }

    OptionExecutionResult result;
    result.final_state = state;
    double discount = 1.0;
    for (const auto& action : adaptation->actions) {
        const StateKey before = env.sense();
        StepOutcome outcome = env.step(action);
        if (observer) observer(before, action, outcome);
        result.rewards.push_back(outcome.reward);
        result.discounted_return += discount * outcome.reward;
        discount *= gamma;
        ++result.steps;
        result.final_state = outcome.next;
        result.events.insert(result.events.end(), outcome.events.begin(), outcome.events.end());
        if (outcome.terminal) {
            result.terminal = true;
            break;
        }
    }
    registry.deactivate(ctx);
    return result;
}

/// Executes a candidate option through `registry`, binding it to its
/// initiation context first.
template <Environment E>
OptionExecutionResult execute_option(E& env, const OptionCandidate& option, ContextRegistry& registry,
                                     double gamma, const StepObserver& observer = {}) {
    if (env.sense() != option.initiation_state)
        throw Error(Errc::WrongContext, "option starts in " + option.initiation_state.canonical() +
                                            " but the environment is in " + env.sense().canonical());
    registry.adapt(ContextId::for_state(option.initiation_state), BehavioralAdaptation(option.actions),
                   kDefaultTarget);
    return execute_adaptation(env, registry, gamma, observer);
}

/// Primitive actions plus the multi-step candidates of each state, cached.
class ActionSpace {
public:
    ActionSpace(std::span<const ActionId> primitives, const OptionStore& store) : store_(&store) {
        for (const auto& p : primitives) primitives_.push_back(AugmentedAction::primitive(p));
    }

    std::span<const AugmentedAction> available(const StateKey& s) {
        auto it = cache_.find(s);
        if (it != cache_.end()) return it->second;
        std::vector<AugmentedAction> actions = primitives_;
        for (const auto& [seq, c] : store_->candidates_for(s))
            if (seq.size() >= 2) actions.push_back(AugmentedAction::option(seq));
        return cache_.emplace(s, std::move(actions)).first->second;
    }

    std::span<const AugmentedAction> primitives() const { return primitives_; }

private:
    const OptionStore* store_;
    std::vector<AugmentedAction> primitives_;
    std::unordered_map<StateKey, std::vector<AugmentedAction>, StateKeyHash> cache_;
};

/// Length of a learning or evaluation run: decision points for continuing
/// environments, episodes for episodic ones.
struct Budget {
    std::uint64_t units = 0;
    /// Safety cap on decision points within one episode (episodic only).
    std::uint64_t max_episode_decisions = 1000;
};

struct LearningOptions {
    RewardSource reward_source = RewardSource::Environment;
    double fixed_positive_reward = 1.0;
};

/// Starting values for option learning: every multi-step candidate gets the
/// discounted return of its latest logged occurrence (no bootstrap term).
/// Pairs already in the table are left alone. Primitives keep the default 0.
inline void seed_option_values(QTable& q, const OptionStore& store) {
    for (const auto& [state, set] : store.states()) {
        for (const auto& [seq, c] : set) {
            if (seq.size() < 2) continue;
            auto a = AugmentedAction::option(seq);
            if (q.updates(state, a) == 0 && q.value(state, a) == 0.0) q.set(state, a, c.discounted_reward);
        }
    }
}

/// Epsilon-greedy Q-learning over primitives and the store's options.
///
/// At each decision point the sensed state's primitives and multi-step
/// candidates are available. A selected option runs to completion and is
/// updated with its discounted return and k = steps taken; a primitive is
/// one step with k = 1. With an empty store this is plain primitive
/// Q-learning. Returns the counters of the run.
template <Environment E>
Metrics learn_options(E& env, const OptionStore& store, QTable& q, const LearningParams& params,
                      const Budget& budget, Rng& rng, const StepObserver& observer = {},
                      const LearningOptions& options = {}) {
    params.validate();
    ActionSpace space(env.primitive_actions(), store);
    Metrics metrics;
    metrics.environment = env.name();

    auto count_step = [&](const StateKey& s, const ActionId& a, const StepOutcome& o) {
        ++metrics.executed_actions;
        for (const auto& e : o.events) ++metrics.events[e];
        if (observer) observer(s, a, o);
    };

    auto decide = [&](std::uint64_t schedule_index) -> bool {
        const StateKey s = env.sense();
        ++metrics.decision_points;
        const auto available = space.available(s);
        const AugmentedAction chosen = select_epsilon_greedy(q, s, available, params.epsilon_at(schedule_index), rng);
        if (chosen.is_option()) {
            ContextRegistry scratch;
            OptionCandidate option{s, chosen.actions, 0.0, 1};
            OptionExecutionResult r = execute_option(env, option, scratch, params.gamma, count_step);
            double ret = 0.0, discount = 1.0;
            for (double rw : r.rewards) {
                ret += discount * source_reward(options.reward_source, rw, options.fixed_positive_reward);
                discount *= params.gamma;
            }
            ++metrics.adaptation_actuations;
            const auto next = r.terminal ? std::span<const AugmentedAction>{} : space.available(r.final_state);
            update_q(q, s, chosen, ret, r.final_state, next, r.steps, params);
            return r.terminal;
        }
        StepOutcome o = env.step(chosen.actions.front());
        count_step(s, chosen.actions.front(), o);
        const auto next = o.terminal ? std::span<const AugmentedAction>{} : space.available(o.next);
        update_q(q, s, chosen, source_reward(options.reward_source, o.reward, options.fixed_positive_reward), o.next,
                 next, 1, params);
        return o.terminal;
    };

    if (!env.episodic()) {
        for (std::uint64_t t = 0; t < budget.units; ++t) decide(t);
        return metrics;
    }
    for (std::uint64_t ep = 0; ep < budget.units; ++ep) {
        env.reset();
        const std::uint64_t dp_before = metrics.decision_points, act_before = metrics.executed_actions;
        for (std::uint64_t d = 0; d < budget.max_episode_decisions; ++d)
            if (decide(ep)) break;
        ++metrics.episodes;
        metrics.episode_decision_points.push_back(metrics.decision_points - dp_before);
        metrics.episode_executed_actions.push_back(metrics.executed_actions - act_before);
    }
    return metrics;
}

/// One adaptation per non-goal state whose greedy augmented action is a
/// multi-step option valued above `min_value`. Only pairs that received at
/// least one learning update compete; an option never tried has no value
/// estimate.
inline std::vector<Adaptation> select_adaptations(const OptionStore& store, const QTable& q,
                                                  std::span<const ActionId> primitives,
                                                  const std::function<bool(const StateKey&)>& is_goal,
                                                  double min_value = 0.0) {
    std::vector<Adaptation> out;
    for (const auto& [state, set] : store.states()) {
        if (is_goal && is_goal(state)) continue;
        std::vector<AugmentedAction> tried;
        for (const auto& p : primitives) {
            auto a = AugmentedAction::primitive(p);
            if (q.updates(state, a) > 0) tried.push_back(std::move(a));
        }
        for (const auto& [seq, _] : set) {
            if (seq.size() < 2) continue;
            auto a = AugmentedAction::option(seq);
            if (q.updates(state, a) > 0) tried.push_back(std::move(a));
        }
        if (tried.empty()) continue;
        const AugmentedAction& best = argmax_q(q, state, tried);
        if (!best.is_option()) continue;
        if (!(q.value(state, best) > min_value)) continue;
        out.push_back({ContextId::for_state(state), best.actions, state, q.value(state, best)});
    }
    return out;
}

/// Installs adaptations into a registry (all inactive).
inline void install(ContextRegistry& registry, std::span<const Adaptation> adaptations,
                    const std::string& target = kDefaultTarget) {
    for (const auto& a : adaptations) registry.adapt(a.context, BehavioralAdaptation(a.actions), target);
}

/// COP stub in Context Traits syntax for one adaptation.
inline std::string emit_stub(const Adaptation& adaptation, const std::string& target_name) {
    const std::string& ctx = adaptation.context.name;
    std::string out;
    out += ctx + " = new cop.Context({ name: \"" + ctx + "\"})\n";
    out += "BA" + ctx + " = Trait({\n";
    out += "  option: function(){\n";
    for (const auto& action : adaptation.actions) out += "    this." + action + "();\n";
    out += "  }\n";
    out += "})\n";
    out += ctx + ".adapt(" + target_name + ", BA" + ctx + ")\n";
    return out;
}

/// `state<TAB>actions<TAB>qValue` per adaptation.
inline void write_manifest(std::ostream& out, std::span<const Adaptation> adaptations) {
    for (const auto& a : adaptations)
        out << a.source_state.canonical() << '\t' << join(a.actions, ",") << '\t' << format_real(a.q_value) << '\n';
}

inline std::vector<Adaptation> read_manifest(std::istream& in) {
    std::vector<Adaptation> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split(line, '\t');
        if (cols.size() != 3) throw Error(Errc::ParseError, "manifest line needs 3 columns: " + line);
        Adaptation a;
        a.source_state = StateKey(std::string(cols[0]));
        a.context = ContextId::for_state(a.source_state);
        for (auto part : split(cols[1], ',')) a.actions.emplace_back(part);
        a.q_value = parse_real(cols[2]);
        out.push_back(std::move(a));
    }
    return out;
}

/// Run-time loop with generated adaptations installed in `registry`.
///
/// At each decision point the sensed state's context is looked up; a bound
/// context is activated and its adaptation executed to completion, else an
/// epsilon-greedy primitive is taken from `q` (no learning).
template <Environment E>
Metrics run_adaptive_phase(E& env, ContextRegistry& registry, const QTable& q, double epsilon, double gamma,
                           const Budget& budget, Rng& rng, const StepObserver& observer = {}) {
    std::vector<AugmentedAction> primitives;
    for (const auto& p : env.primitive_actions()) primitives.push_back(AugmentedAction::primitive(p));
    Metrics metrics;
    metrics.environment = env.name();

    auto count_step = [&](const StateKey& s, const ActionId& a, const StepOutcome& o) {
        ++metrics.executed_actions;
        for (const auto& e : o.events) ++metrics.events[e];
        if (observer) observer(s, a, o);
    };

    auto decide = [&]() -> bool {
        const StateKey s = env.sense();
        ++metrics.decision_points;
        if (registry.is_bound(ContextId::for_state(s))) {
            ++metrics.adaptation_actuations;
            OptionExecutionResult r = execute_adaptation(env, registry, gamma, count_step);
            return r.terminal;
        }
        const AugmentedAction& chosen = select_epsilon_greedy(q, s, primitives, epsilon, rng);
        StepOutcome o = env.step(chosen.actions.front());
        count_step(s, chosen.actions.front(), o);
        // The monitor only sees the state reached by a primitive decision.
        for (const auto& e : o.events) ++metrics.sensed_events[e];
        return o.terminal;
    };

    if (!env.episodic()) {
        for (std::uint64_t t = 0; t < budget.units; ++t) decide();
        return metrics;
    }
    for (std::uint64_t ep = 0; ep < budget.units; ++ep) {
        env.reset();
        const std::uint64_t dp_before = metrics.decision_points, act_before = metrics.executed_actions;
        for (std::uint64_t d = 0; d < budget.max_episode_decisions; ++d)
            if (decide()) break;
        ++metrics.episodes;
        metrics.episode_decision_points.push_back(metrics.decision_points - dp_before);
        metrics.episode_executed_actions.push_back(metrics.executed_actions - act_before);
    }
    return metrics;
}

}  // namespace autocop
