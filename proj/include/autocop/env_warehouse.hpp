#pragma once

// Warehouse delivery robot on an n x n grid.
//
// State is [x, y, available]: x is the row (north decreases it), y the
// column (east increases it), available is true while the robot carries no
// package. An episode ends with the first correct dropoff.

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "autocop/core.hpp"
#include "autocop/environment.hpp"
#include "autocop/random.hpp"

namespace autocop::warehouse {

enum class Action { North, South, East, West, Pickup, Dropoff };

inline const std::array<ActionId, 6>& action_names() {
    static const std::array<ActionId, 6> names = {"north", "south", "east", "west", "pickup", "dropoff"};
    return names;
}

inline Action parse_action(const ActionId& id) {
    const auto& names = action_names();
    auto it = std::find(names.begin(), names.end(), id);
    if (it == names.end()) throw Error(Errc::ParseError, "unknown warehouse action '" + id + "'");
    return static_cast<Action>(it - names.begin());
}

struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

struct WarehouseState {
    int x = 0;
    int y = 0;
    bool available = true;

    Cell cell() const { return {x, y}; }
    StateKey key() const { return StateKey::of(x, y, available); }
    std::string canonical_name() const { return key().context_name(); }

    static WarehouseState from_key(const StateKey& key) {
        auto parts = key.components();
        if (parts.size() != 3 || (parts[2] != "true" && parts[2] != "false"))
            throw Error(Errc::ParseError, "warehouse state must be x,y,bool: " + key.canonical());
        return {parse_int<int>(parts[0]), parse_int<int>(parts[1]), parts[2] == "true"};
    }

    auto operator<=>(const WarehouseState&) const = default;
};

struct WarehouseConfig {
    int n = 5;
    Cell start{0, 0};
    Cell pickup{2, 3};
    Cell dropoff{4, 1};
    double reward_dropoff = 20;
    double reward_pickup = 10;
    double reward_incorrect = -10;
    double reward_step = -1;
    /// Draw a fresh pickup cell (never the dropoff cell) every episode.
    bool randomize_pickup = false;

    bool inside(Cell c) const { return c.x >= 0 && c.x < n && c.y >= 0 && c.y < n; }

    void validate() const {
        if (n < 2) throw Error(Errc::ConfigError, "grid size must be at least 2");
        if (!inside(start) || !inside(pickup) || !inside(dropoff))
            throw Error(Errc::ConfigError, "start, pickup and dropoff must lie on the grid");
        if (pickup == dropoff) throw Error(Errc::ConfigError, "pickup and dropoff locations must differ");
    }
};

struct StepResult {
    WarehouseState next;
    double reward = 0.0;
    bool terminal = false;
    std::vector<std::string> events;
};

inline WarehouseState reset(const WarehouseConfig& config) { return {config.start.x, config.start.y, true}; }

/// Moves off the grid leave the robot in place at the ordinary step cost.
/// Pickup/dropoff outside their preconditions cost `reward_incorrect`.
inline StepResult step(const WarehouseState& state, Action action, const WarehouseConfig& config) {
    StepResult out{state, config.reward_step, false, {}};
    WarehouseState& s = out.next;
    auto move = [&](int dx, int dy) {
        Cell target{s.x + dx, s.y + dy};
        if (config.inside(target)) {
            s.x = target.x;
            s.y = target.y;
        } else {
            out.events.emplace_back("boundary");
        }
    };
    switch (action) {
        case Action::North: move(-1, 0); break;
        case Action::South: move(1, 0); break;
        case Action::East: move(0, 1); break;
        case Action::West: move(0, -1); break;
        case Action::Pickup:
            if (s.available && s.cell() == config.pickup) {
                s.available = false;
                out.reward = config.reward_pickup;
                out.events.emplace_back("pickup");
            } else {
                out.reward = config.reward_incorrect;
                out.events.emplace_back("incorrectPickup");
            }
            break;
        case Action::Dropoff:
            if (!s.available && s.cell() == config.dropoff) {
                s.available = true;
                out.reward = config.reward_dropoff;
                out.terminal = true;
                out.events.emplace_back("dropoff");
            } else {
                out.reward = config.reward_incorrect;
                out.events.emplace_back("incorrectDropoff");
            }
            break;
    }
    return out;
}

class Simulator {
public:
    explicit Simulator(WarehouseConfig config = {}, std::uint64_t seed = 0)
        : config_(config), episode_config_(config), rng_(seed) {
        config_.validate();
        reset();
    }

    StateKey sense() const { return state_.key(); }
    const WarehouseState& state() const noexcept { return state_; }

    StepOutcome step(const ActionId& action) {
        StepResult r = warehouse::step(state_, parse_action(action), episode_config_);
        state_ = r.next;
        return {state_.key(), r.reward, r.terminal, std::move(r.events)};
    }

    std::span<const ActionId> primitive_actions() const { return action_names(); }
    bool is_goal(const StateKey&) const { return false; }
    bool episodic() const { return true; }
    std::string name() const { return "warehouse"; }

    void reset() {
        episode_config_ = config_;
        if (config_.randomize_pickup) {
            do {
                episode_config_.pickup = {static_cast<int>(rng_.index(config_.n)),
                                          static_cast<int>(rng_.index(config_.n))};
            } while (episode_config_.pickup == config_.dropoff);
        }
        state_ = warehouse::reset(episode_config_);
    }

    const WarehouseConfig& config() const noexcept { return config_; }
    const WarehouseConfig& episode_config() const noexcept { return episode_config_; }

private:
    WarehouseConfig config_;
    WarehouseConfig episode_config_;
    WarehouseState state_;
    Rng rng_;
};

static_assert(Environment<Simulator>);

}  // namespace autocop::warehouse
