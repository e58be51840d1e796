#pragma once

// Two-lane highway driving assistant.
//
// Observed state is [speed, lane, proximity]: speed in {0,10,...,70} km/h,
// lane 0 (right) or 1 (left), proximity 1..3 for a traffic vehicle that is
// 1..3 steps from a collision, 4 for a clear road. Traffic drives in the
// right lane at a constant speed; at most one vehicle is on the road.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autocop/core.hpp"
#include "autocop/environment.hpp"
#include "autocop/random.hpp"

namespace autocop::driving {

enum class Action { SpeedUp, SlowDown, Straight, SteerLeft, SteerRight };

inline const std::array<ActionId, 5>& action_names() {
    static const std::array<ActionId, 5> names = {"speedUp", "slowDown", "straight", "steerLeft", "steerRight"};
    return names;
}

inline Action parse_action(const ActionId& id) {
    const auto& names = action_names();
    auto it = std::find(names.begin(), names.end(), id);
    if (it == names.end()) throw Error(Errc::ParseError, "unknown driving action '" + id + "'");
    return static_cast<Action>(it - names.begin());
}

inline constexpr int kMaxSpeed = 70;
inline constexpr int kSpeedStep = 10;
inline constexpr int kClearProximity = 4;

struct DrivingState {
    int speed = 0;
    int lane = 0;
    int proximity = kClearProximity;

    bool valid() const {
        return speed >= 0 && speed <= kMaxSpeed && speed % kSpeedStep == 0 && (lane == 0 || lane == 1) &&
               proximity >= 1 && proximity <= kClearProximity;
    }

    StateKey key() const { return StateKey::of(speed, lane, proximity); }
    std::string canonical_name() const { return key().context_name(); }

    static DrivingState from_key(const StateKey& key) {
        auto parts = key.components();
        if (parts.size() != 3) throw Error(Errc::ParseError, "driving state needs 3 components: " + key.canonical());
        DrivingState s{parse_int<int>(parts[0]), parse_int<int>(parts[1]), parse_int<int>(parts[2])};
        if (!s.valid()) throw Error(Errc::ParseError, "driving state out of range: " + key.canonical());
        return s;
    }

    auto operator<=>(const DrivingState&) const = default;
};

struct DrivingConfig {
    int speed_limit = 60;
    int traffic_speed = 30;
    double spawn_probability = 0.10;
    int min_gap_steps = 3;
    double reward_crash = -8;
    double reward_wrong_lane = -5;
    double reward_over_limit = -6;
    double reward_too_slow = -6;
    double reward_clear = 8;
    /// Speeds at or below this are "too slow".
    int too_slow_threshold = 50;
    DrivingState start{0, 0, kClearProximity};

    void validate() const {
        if (!(spawn_probability >= 0.0 && spawn_probability <= 1.0))
            throw Error(Errc::ConfigError, "spawn probability must be in [0,1]");
        auto in_range = [](int v) { return v >= 0 && v <= kMaxSpeed; };
        if (!in_range(speed_limit) || !in_range(traffic_speed) || !in_range(too_slow_threshold))
            throw Error(Errc::ConfigError, "speed thresholds must lie in [0,70]");
        if (min_gap_steps < 0) throw Error(Errc::ConfigError, "min gap must be nonnegative");
        if (!start.valid() || start.proximity != kClearProximity)
            throw Error(Errc::ConfigError, "start state must be a valid clear-road state");
    }
};

/// Per-step conditions. The first five are the reported events; too_slow
/// and clear_road only mark which reward terms applied.
struct DrivingEvents {
    bool crash = false;
    bool lane_violation = false;
    bool speed_violation = false;
    bool vehicle_encountered = false;
    bool vehicle_overtaken = false;
    bool too_slow = false;
    bool clear_road = false;

    std::vector<std::string> tags() const {
        std::vector<std::string> out;
        if (crash) out.emplace_back("crash");
        if (lane_violation) out.emplace_back("laneViolation");
        if (speed_violation) out.emplace_back("speedViolation");
        if (vehicle_encountered) out.emplace_back("vehicleEncountered");
        if (vehicle_overtaken) out.emplace_back("vehicleOvertaken");
        return out;
    }
};

/// Full simulation state: the ego vehicle plus the hidden traffic situation.
struct World {
    int speed = 0;
    int lane = 0;
    /// Steps until collision with the traffic vehicle ahead, if there is one.
    std::optional<int> vehicle_distance;
    /// Steps since the road became clear.
    int steps_since_clear = 0;

    DrivingState observe() const { return {speed, lane, vehicle_distance.value_or(kClearProximity)}; }

    static World start(const DrivingConfig& config) {
        return {config.start.speed, config.start.lane, std::nullopt, config.min_gap_steps};
    }

    bool operator==(const World&) const = default;
};

struct StepResult {
    World world;
    double reward = 0.0;
    DrivingEvents events;
};

inline bool is_goal(const DrivingState& s, const DrivingConfig& config = {}) {
    return s.speed == config.speed_limit && s.lane == 0 && s.proximity == kClearProximity;
}

/// Reward terms for the state reached after a step. Penalties add up; the
/// clear-road bonus applies only when no penalty does.
inline double reward_for(const DrivingState& s, DrivingEvents& ev, const DrivingConfig& config) {
    double reward = 0.0;
    if (ev.crash) reward += config.reward_crash;
    ev.lane_violation = s.lane == 1;
    if (ev.lane_violation) reward += config.reward_wrong_lane;
    ev.speed_violation = s.speed > config.speed_limit;
    if (ev.speed_violation) reward += config.reward_over_limit;
    ev.too_slow = s.speed <= config.too_slow_threshold;
    if (ev.too_slow) reward += config.reward_too_slow;
    ev.clear_road = !ev.crash && !ev.lane_violation && !ev.speed_violation && !ev.too_slow &&
                    s.proximity == kClearProximity;
    if (ev.clear_road) reward += config.reward_clear;
    return reward;
}

/// Advances the world by one primitive action.
///
/// 1. The action changes speed (+-10, clamped) or lane.
/// 2. A vehicle ahead closes by one step per step while the ego vehicle is
///    faster than traffic, holds at equal speed, and falls back when slower
///    (it is gone once it falls back past proximity 3). Reaching distance 0
///    is a crash in the right lane (vehicle removed, ego speed reset to 0)
///    and an overtake in the left lane (vehicle removed).
/// 3. With a clear road for at least `min_gap_steps` steps, a new vehicle
///    appears at proximity 3 with `spawn_probability`.
inline StepResult step(const World& world, Action action, const DrivingConfig& config, Rng& rng) {
    StepResult out{world, 0.0, {}};
    World& w = out.world;
    DrivingEvents& ev = out.events;

    switch (action) {
        case Action::SpeedUp: w.speed = std::min(kMaxSpeed, w.speed + kSpeedStep); break;
        case Action::SlowDown: w.speed = std::max(0, w.speed - kSpeedStep); break;
        case Action::Straight: break;
        case Action::SteerLeft: w.lane = 1; break;
        case Action::SteerRight: w.lane = 0; break;
    }

    bool removed = false;
    if (w.vehicle_distance) {
        int d = *w.vehicle_distance;
        if (w.speed > config.traffic_speed)
            --d;
        else if (w.speed < config.traffic_speed)
            ++d;
        if (d <= 0) {
            if (w.lane == 0) {
                ev.crash = true;
                w.speed = 0;
            } else {
                ev.vehicle_overtaken = true;
            }
            removed = true;
        } else if (d >= kClearProximity) {
            removed = true;
        } else {
            w.vehicle_distance = d;
        }
    }

    if (removed) {
        w.vehicle_distance.reset();
        w.steps_since_clear = 0;
    } else if (!w.vehicle_distance) {
        ++w.steps_since_clear;
        if (w.steps_since_clear >= config.min_gap_steps && rng.bernoulli(config.spawn_probability)) {
            w.vehicle_distance = kClearProximity - 1;
            ev.vehicle_encountered = true;
        }
    }

    out.reward = reward_for(w.observe(), ev, config);
    return out;
}

/// Stateful driving simulator with its own traffic random stream.
class Simulator {
public:
    explicit Simulator(DrivingConfig config = {}, std::uint64_t seed = 0)
        : config_(config), world_(World::start(config_)), rng_(seed) {
        config_.validate();
    }

    StateKey sense() const { return world_.observe().key(); }
    DrivingState observe() const { return world_.observe(); }
    const World& world() const noexcept { return world_; }

    StepOutcome step(const ActionId& action) {
        StepResult r = driving::step(world_, parse_action(action), config_, rng_);
        world_ = r.world;
        return {world_.observe().key(), r.reward, false, r.events.tags()};
    }

    std::span<const ActionId> primitive_actions() const { return action_names(); }
    bool is_goal(const StateKey& key) const { return driving::is_goal(DrivingState::from_key(key), config_); }
    bool episodic() const { return false; }
    std::string name() const { return "driving"; }
    void reset() { world_ = World::start(config_); }
    /// Places the simulator in a given world, e.g. to replay a situation.
    void set_world(const World& world) { world_ = world; }

    const DrivingConfig& config() const noexcept { return config_; }

private:
    DrivingConfig config_;
    World world_;
    Rng rng_;
};

static_assert(Environment<Simulator>);

}  // namespace autocop::driving
