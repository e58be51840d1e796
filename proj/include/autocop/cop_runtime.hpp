#pragma once

// First-class contexts and behavioral adaptations.
//
// A ContextRegistry binds contexts to behavioral adaptations (ordered
// primitive-action sequences) and keeps a stack of active contexts.
// Activation is strictly LIFO: the adaptation loop brackets each adaptation
// execution with activate()/deactivate() on a single context.

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "autocop/core.hpp"

namespace autocop {

struct ContextId {
    std::string name;

    ContextId() = default;
    explicit ContextId(std::string n) : name(std::move(n)) {
        if (name.empty()) throw Error(Errc::UnknownContext, "context name must be non-empty");
    }

    static ContextId for_state(const StateKey& state) { return ContextId(state.context_name()); }

    auto operator<=>(const ContextId&) const = default;
};

struct BehavioralAdaptation {
    ActionSequence actions;

    BehavioralAdaptation() = default;
    explicit BehavioralAdaptation(ActionSequence seq) : actions(std::move(seq)) {
        if (actions.empty())
            throw Error(Errc::InvalidAdaptation, "behavioral adaptation needs at least one action");
    }

    std::size_t length() const noexcept { return actions.size(); }

    /// Checks the sequence against an environment's primitive action set and
    /// the option length bound.
    void validate(std::span<const ActionId> primitives, std::size_t max_option_length) const {
        if (actions.empty() || actions.size() > max_option_length)
            throw Error(Errc::InvalidAdaptation,
                        "adaptation length " + std::to_string(actions.size()) + " outside [1, " +
                            std::to_string(max_option_length) + "]");
        for (const auto& a : actions)
            if (std::find(primitives.begin(), primitives.end(), a) == primitives.end())
                throw Error(Errc::InvalidAdaptation, "'" + a + "' is not a primitive action");
    }

    bool operator==(const BehavioralAdaptation&) const = default;
};

/// Dispatch result when no active context matches: fall back to primitive
/// action selection.
struct BaseBehavior {
    bool operator==(const BaseBehavior&) const = default;
};

using Behavior = std::variant<BaseBehavior, BehavioralAdaptation>;

class ContextRegistry {
public:
    struct Binding {
        BehavioralAdaptation adaptation;
        std::string target;
        bool operator==(const Binding&) const = default;
    };

    /// Binds `ctx` to `adaptation` on `target`. Rebinding to the identical
    /// sequence is a no-op; rebinding to a different one is an error.
    void adapt(const ContextId& ctx, BehavioralAdaptation adaptation, std::string target) {
        if (auto it = bindings_.find(ctx); it != bindings_.end()) {
            if (it->second.adaptation == adaptation) return;
            throw Error(Errc::DuplicateBinding, ctx.name + " is already bound to a different adaptation");
        }
        bindings_.emplace(ctx, Binding{std::move(adaptation), std::move(target)});
    }

    void activate(const ContextId& ctx) {
        if (!bindings_.contains(ctx)) throw Error(Errc::UnknownContext, ctx.name + " is not bound");
        if (is_active(ctx)) throw Error(Errc::DoubleActivation, ctx.name + " is already active");
        active_.push_back(ctx);
    }

    void deactivate(const ContextId& ctx) {
        if (active_.empty() || active_.back() != ctx)
            throw Error(Errc::ActivationOrder, ctx.name + " is not the most recently activated context");
        active_.pop_back();
    }

    /// Resolves the behavior for a sensed state: the adaptation of the
    /// topmost active context named after `state`, else the base behavior.
    Behavior dispatch(const StateKey& state) const {
        const std::string name = state.context_name();
        for (auto it = active_.rbegin(); it != active_.rend(); ++it)
            if (it->name == name) return bindings_.at(*it).adaptation;
        return BaseBehavior{};
    }

    bool is_bound(const ContextId& ctx) const { return bindings_.contains(ctx); }
    bool is_active(const ContextId& ctx) const {
        return std::find(active_.begin(), active_.end(), ctx) != active_.end();
    }

    const Binding* binding(const ContextId& ctx) const {
        auto it = bindings_.find(ctx);
        return it == bindings_.end() ? nullptr : &it->second;
    }

    const std::map<ContextId, Binding>& bindings() const noexcept { return bindings_; }
    const std::vector<ContextId>& active_stack() const noexcept { return active_; }

    bool operator==(const ContextRegistry&) const = default;

private:
    std::map<ContextId, Binding> bindings_;
    std::vector<ContextId> active_;
};

}  // namespace autocop
