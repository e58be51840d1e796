#pragma once

#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "autocop/core.hpp"

namespace autocop {

/// One primitive step as seen by the learners.
struct StepOutcome {
    StateKey next;
    double reward = 0.0;
    bool terminal = false;
    std::vector<std::string> events;
};

/// A simulated system the adaptation loop can sense and act on.
///
/// Episodic environments signal task completion through
/// StepOutcome::terminal; the driver then calls reset().
template <class E>
concept Environment = requires(E& env, const E& cenv, const ActionId& action, const StateKey& key) {
    { cenv.sense() } -> std::same_as<StateKey>;
    { env.step(action) } -> std::same_as<StepOutcome>;
    { cenv.primitive_actions() } -> std::convertible_to<std::span<const ActionId>>;
    { cenv.is_goal(key) } -> std::same_as<bool>;
    { cenv.episodic() } -> std::same_as<bool>;
    { cenv.name() } -> std::convertible_to<std::string>;
    env.reset();
};

}  // namespace autocop
