#pragma once

// Experiment driver: configuration, the five-phase pipeline, the
// primitive-only baseline, metric tables, comparison and path rendering.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "autocop/adaptation_engine.hpp"
#include "autocop/core.hpp"
#include "autocop/env_driving.hpp"
#include "autocop/env_warehouse.hpp"
#include "autocop/option_extractor.hpp"
#include "autocop/random.hpp"
#include "autocop/rl_core.hpp"
#include "autocop/trace_log.hpp"

namespace autocop {

enum class EnvKind { Driving, Warehouse };

inline std::string to_string(EnvKind kind) { return kind == EnvKind::Driving ? "driving" : "warehouse"; }

inline EnvKind parse_env_kind(std::string_view text) {
    if (text == "driving") return EnvKind::Driving;
    if (text == "warehouse") return EnvKind::Warehouse;
    throw Error(Errc::ConfigError, "unknown environment '" + std::string(text) + "'");
}

// Random streams per phase. Baseline and pipeline share 1/2 and 5/6.
namespace stream {
inline constexpr std::uint64_t kLearnEnv = 1, kLearnAgent = 2, kOptionEnv = 3, kOptionAgent = 4, kEvalEnv = 5,
                               kEvalAgent = 6;
}

struct ExperimentConfig {
    EnvKind environment = EnvKind::Driving;
    std::uint64_t seed = 1;
    std::uint64_t steps = 8000;   // driving decision points per phase
    std::uint64_t episodes = 600; // warehouse episodes per phase
    std::size_t batch_size = 500;
    /// 0 picks the environment default (8 driving, 11 warehouse).
    std::size_t max_option_length = 0;
    /// exploration_steps 0 means half of the phase budget.
    LearningParams params;
    /// Phase-3 budget; 0 reuses the phase-1 budget.
    std::uint64_t option_budget = 0;
    /// Skip extraction so the option store stays empty.
    bool extract_options = true;
    bool seed_option_values = true;
    double min_adaptation_value = 0.0;
    RewardSource reward_source = RewardSource::Environment;
    double fixed_positive_reward = 1.0;
    std::uint64_t max_episode_decisions = 1000;
    std::string target = kDefaultTarget;
    driving::DrivingConfig driving;
    warehouse::WarehouseConfig warehouse;
    std::string out;

    std::uint64_t budget() const { return environment == EnvKind::Driving ? steps : episodes; }
    std::uint64_t phase3_budget() const { return option_budget ? option_budget : budget(); }

    std::size_t option_length() const {
        if (max_option_length) return max_option_length;
        return environment == EnvKind::Driving ? 8 : 11;
    }

    LearningParams params_for(std::uint64_t phase_budget) const {
        LearningParams p = params;
        if (p.exploration_steps == 0) p.exploration_steps = phase_budget / 2;
        return p;
    }

    void validate() const {
        params.validate();
        if (batch_size == 0) throw Error(Errc::ConfigError, "batch size must be positive");
        if (max_episode_decisions == 0) throw Error(Errc::ConfigError, "episode decision cap must be positive");
        if (target.empty()) throw Error(Errc::ConfigError, "target name must not be empty");
        driving.validate();
        warehouse.validate();
    }

    /// Applies one `key = value` setting.
    void set(std::string_view key, std::string_view value) {
        auto real = [&] { return parse_real(value); };
        auto u64 = [&] { return parse_int<std::uint64_t>(value); };
        auto integer = [&] { return parse_int<int>(value); };
        auto boolean = [&] {
            if (value == "true" || value == "1") return true;
            if (value == "false" || value == "0") return false;
            throw Error(Errc::ParseError, "not a boolean: '" + std::string(value) + "'");
        };
        auto cell = [&] {
            auto parts = split(value, ',');
            if (parts.size() != 2) throw Error(Errc::ParseError, "cell must be x,y: '" + std::string(value) + "'");
            return warehouse::Cell{parse_int<int>(parts[0]), parse_int<int>(parts[1])};
        };
        try {
            if (key == "env" || key == "environment") environment = parse_env_kind(value);
            else if (key == "seed") seed = u64();
            else if (key == "steps") steps = u64();
            else if (key == "episodes") episodes = u64();
            else if (key == "batch_size") batch_size = u64();
            else if (key == "max_option_length") max_option_length = u64();
            else if (key == "alpha") params.alpha = real();
            else if (key == "gamma") params.gamma = real();
            else if (key == "epsilon_explore") params.epsilon_explore = real();
            else if (key == "epsilon_exploit") params.epsilon_exploit = real();
            else if (key == "exploration_steps") params.exploration_steps = u64();
            else if (key == "option_discount") {
                if (value == "per_step") params.option_discount = OptionDiscount::PerStep;
                else if (value == "flat") params.option_discount = OptionDiscount::Flat;
                else throw Error(Errc::ParseError, "option_discount is per_step or flat");
            }
            else if (key == "option_budget") option_budget = u64();
            else if (key == "extract_options") extract_options = boolean();
            else if (key == "seed_option_values") seed_option_values = boolean();
            else if (key == "min_adaptation_value") min_adaptation_value = real();
            else if (key == "reward_source") {
                if (value == "environment") reward_source = RewardSource::Environment;
                else if (value == "fixed_positive") reward_source = RewardSource::FixedPositive;
                else if (value == "frequency") reward_source = RewardSource::Frequency;
                else throw Error(Errc::ParseError, "reward_source is environment, fixed_positive or frequency");
            }
            else if (key == "fixed_positive_reward") fixed_positive_reward = real();
            else if (key == "max_episode_decisions") max_episode_decisions = u64();
            else if (key == "target") target = std::string(value);
            else if (key == "out") out = std::string(value);
            else if (key == "driving.speed_limit") driving.speed_limit = integer();
            else if (key == "driving.traffic_speed") driving.traffic_speed = integer();
            else if (key == "driving.spawn_probability") driving.spawn_probability = real();
            else if (key == "driving.min_gap_steps") driving.min_gap_steps = integer();
            else if (key == "driving.too_slow_threshold") driving.too_slow_threshold = integer();
            else if (key == "driving.reward_crash") driving.reward_crash = real();
            else if (key == "driving.reward_wrong_lane") driving.reward_wrong_lane = real();
            else if (key == "driving.reward_over_limit") driving.reward_over_limit = real();
            else if (key == "driving.reward_too_slow") driving.reward_too_slow = real();
            else if (key == "driving.reward_clear") driving.reward_clear = real();
            else if (key == "warehouse.n") warehouse.n = integer();
            else if (key == "warehouse.start") warehouse.start = cell();
            else if (key == "warehouse.pickup") warehouse.pickup = cell();
            else if (key == "warehouse.dropoff") warehouse.dropoff = cell();
            else if (key == "warehouse.randomize_pickup") warehouse.randomize_pickup = boolean();
            else if (key == "warehouse.reward_dropoff") warehouse.reward_dropoff = real();
            else if (key == "warehouse.reward_pickup") warehouse.reward_pickup = real();
            else if (key == "warehouse.reward_incorrect") warehouse.reward_incorrect = real();
            else if (key == "warehouse.reward_step") warehouse.reward_step = real();
            else throw Error(Errc::ConfigError, "unknown configuration key '" + std::string(key) + "'");
        } catch (const Error& e) {
            if (e.code() == Errc::ConfigError) throw;
            throw Error(Errc::ConfigError, std::string(key) + ": " + e.what());
        }
    }

    /// Flat `key = value` lines; blank lines and `#` comments are skipped.
    void load(std::istream& in) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string_view s) {
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
                return s;
            };
            std::string_view body = trim(line);
            if (body.empty()) continue;
            auto eq = body.find('=');
            if (eq == std::string_view::npos)
                throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
            set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
        }
    }

    void load_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(Errc::ConfigError, "cannot read config file " + path.string());
        load(in);
    }
};

/// Forwards to an environment and logs every primitive step into a trace,
/// numbering episodes by reset() calls for episodic environments.
template <Environment E>
class Recorded {
public:
    Recorded(E& env, Trace& trace) : env_(&env), trace_(&trace) {}

    StateKey sense() const { return env_->sense(); }

    StepOutcome step(const ActionId& action) {
        const StateKey before = env_->sense();
        StepOutcome out = env_->step(action);
        std::optional<std::uint64_t> episode;
        if (env_->episodic()) episode = resets_ ? resets_ - 1 : 0;
        trace_->append({trace_->size(), episode, before, action, out.next, out.reward});
        return out;
    }

    auto primitive_actions() const { return env_->primitive_actions(); }
    bool is_goal(const StateKey& key) const { return env_->is_goal(key); }
    bool episodic() const { return env_->episodic(); }
    std::string name() const { return env_->name(); }

    void reset() {
        env_->reset();
        ++resets_;
    }

private:
    E* env_;
    Trace* trace_;
    std::uint64_t resets_ = 0;
};

struct PipelineResult {
    Metrics learning;         // phase 1
    Metrics option_learning;  // phase 3
    Metrics metrics;          // phase 5, with extraction counters
    Trace trace;              // phase 1
    Trace exploitation;       // phase 5
    OptionStore store;
    std::vector<Adaptation> adaptations;
    QTable primitive_q;
    QTable option_q;
    bool baseline = false;
};

namespace detail {

template <Environment E, class Make>
PipelineResult run_phases(const ExperimentConfig& config, Make make_env, bool with_options) {
    config.validate();
    PipelineResult result;
    result.baseline = !with_options;
    const std::uint64_t budget = config.budget();
    const Budget phase_budget{budget, config.max_episode_decisions};

    // (1) primitive Q-learning with trace capture
    {
        E env = make_env(derive_seed(config.seed, stream::kLearnEnv));
        Recorded<E> recorded(env, result.trace);
        Rng rng(derive_seed(config.seed, stream::kLearnAgent));
        OptionStore none;
        result.learning = learn_options(recorded, none, result.primitive_q, config.params_for(budget), phase_budget,
                                        rng);
    }

    if (with_options) {
        // (2) batch option extraction
        E probe = make_env(0);
        const LearningParams p3 = config.params_for(config.phase3_budget());
        if (config.extract_options) {
            ExtractionRules rules{config.option_length(), [&](const StateKey& k) { return probe.is_goal(k); },
                                  p3.gamma};
            extract_trace(result.store, result.trace, config.batch_size, rules);
        }

        // (3) option-level learning from a fresh table
        {
            E env = make_env(derive_seed(config.seed, stream::kOptionEnv));
            Rng rng(derive_seed(config.seed, stream::kOptionAgent));
            if (config.seed_option_values) seed_option_values(result.option_q, result.store);
            LearningOptions lo{config.reward_source, config.fixed_positive_reward};
            result.option_learning = learn_options(env, result.store, result.option_q, p3,
                                                   Budget{config.phase3_budget(), config.max_episode_decisions},
                                                   rng, {}, lo);
        }

        // (4) adaptation selection
        result.adaptations =
            select_adaptations(result.store, result.option_q, probe.primitive_actions(),
                               [&](const StateKey& k) { return probe.is_goal(k); }, config.min_adaptation_value);
    }

    // (5) exploitation with the adaptations installed
    {
        E env = make_env(derive_seed(config.seed, stream::kEvalEnv));
        Recorded<E> recorded(env, result.exploitation);
        Rng rng(derive_seed(config.seed, stream::kEvalAgent));
        ContextRegistry registry;
        install(registry, result.adaptations, config.target);
        result.metrics = run_adaptive_phase(recorded, registry, result.primitive_q, config.params.epsilon_exploit,
                                            config.params.gamma, phase_budget, rng);
    }
    result.metrics.options_extracted = result.store.candidate_count(2);
    result.metrics.states_with_options = result.store.state_count(2);
    result.metrics.adaptations_generated = result.adaptations.size();
    return result;
}

inline PipelineResult run(const ExperimentConfig& config, bool with_options) {
    if (config.environment == EnvKind::Driving)
        return run_phases<driving::Simulator>(
            config, [&](std::uint64_t s) { return driving::Simulator(config.driving, s); }, with_options);
    return run_phases<warehouse::Simulator>(
        config, [&](std::uint64_t s) { return warehouse::Simulator(config.warehouse, s); }, with_options);
}

}  // namespace detail

/// Phases 1-5: learn primitives, extract, learn options, generate, exploit.
inline PipelineResult run_pipeline(const ExperimentConfig& config) { return detail::run(config, true); }

/// Phases 1 and 5 with primitives only.
inline PipelineResult run_baseline(const ExperimentConfig& config) { return detail::run(config, false); }

// ---- metric tables -------------------------------------------------------

/// Flat named counters of one run, in a fixed order.
struct MetricsTable {
    std::string environment;
    std::vector<std::pair<std::string, double>> rows;

    std::optional<double> find(std::string_view name) const {
        for (const auto& [k, v] : rows)
            if (k == name) return v;
        return std::nullopt;
    }
    double get(std::string_view name) const { return find(name).value_or(0.0); }

    bool operator==(const MetricsTable&) const = default;
};

inline const std::vector<std::string>& driving_event_tags() {
    static const std::vector<std::string> tags = {"crash", "laneViolation", "speedViolation", "vehicleEncountered",
                                                  "vehicleOvertaken"};
    return tags;
}

inline const std::vector<std::string>& warehouse_event_tags() {
    static const std::vector<std::string> tags = {"pickup", "dropoff", "incorrectPickup", "incorrectDropoff",
                                                  "boundary"};
    return tags;
}

inline double ratio_or_zero(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline MetricsTable tabulate(const Metrics& m) {
    MetricsTable t;
    t.environment = m.environment;
    auto add = [&](std::string name, double v) { t.rows.emplace_back(std::move(name), v); };
    const double dp = static_cast<double>(m.decision_points);
    add("decision_points", dp);
    add("executed_actions", static_cast<double>(m.executed_actions));
    add("adaptation_actuations", static_cast<double>(m.adaptation_actuations));
    add("episodes", static_cast<double>(m.episodes));
    add("options_extracted", static_cast<double>(m.options_extracted));
    add("states_with_options", static_cast<double>(m.states_with_options));
    add("adaptations_generated", static_cast<double>(m.adaptations_generated));
    add("actions_per_decision", ratio_or_zero(static_cast<double>(m.executed_actions), dp));
    add("actuations_per_decision", ratio_or_zero(static_cast<double>(m.adaptation_actuations), dp));

    const bool is_driving = m.environment == "driving";
    const auto& tags = is_driving ? driving_event_tags() : warehouse_event_tags();
    for (const auto& tag : tags) add("events." + tag, static_cast<double>(m.event(tag)));
    for (const auto& tag : tags) add("sensed." + tag, static_cast<double>(m.sensed(tag)));

    if (is_driving) {
        const double vehicles = static_cast<double>(m.event("vehicleEncountered"));
        const double crash = static_cast<double>(m.event("crash"));
        const double lane = static_cast<double>(m.event("laneViolation"));
        const double speed = static_cast<double>(m.event("speedViolation"));
        const double lane_seen = static_cast<double>(m.sensed("laneViolation"));
        const double speed_seen = static_cast<double>(m.sensed("speedViolation"));
        add("lane_violations_per_vehicle", ratio_or_zero(lane, vehicles));
        add("violations_per_vehicle", ratio_or_zero(crash + lane + speed, vehicles));
        add("sensed_lane_violations_per_vehicle", ratio_or_zero(lane_seen, vehicles));
        add("sensed_violations_per_vehicle", ratio_or_zero(crash + lane_seen + speed_seen, vehicles));
    } else {
        const auto& dps = m.episode_decision_points;
        const auto& acts = m.episode_executed_actions;
        auto mean = [](const std::vector<std::uint64_t>& v) {
            double s = 0;
            for (auto x : v) s += static_cast<double>(x);
            return v.empty() ? 0.0 : s / static_cast<double>(v.size());
        };
        add("first_episode_decision_points", dps.empty() ? 0.0 : static_cast<double>(dps.front()));
        add("first_episode_executed_actions", acts.empty() ? 0.0 : static_cast<double>(acts.front()));
        add("mean_episode_decision_points", mean(dps));
        add("mean_episode_executed_actions", mean(acts));
    }
    return t;
}

inline void write_metrics_csv(std::ostream& out, const MetricsTable& t) {
    out << "metric,value\n";
    out << "environment," << t.environment << '\n';
    for (const auto& [k, v] : t.rows) out << k << ',' << format_real(v) << '\n';
}

inline MetricsTable read_metrics_csv(std::istream& in) {
    MetricsTable t;
    std::string line;
    if (!std::getline(in, line) || line != "metric,value")
        throw Error(Errc::ParseError, "metrics file must start with 'metric,value'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(Errc::ParseError, "bad metrics line: " + line);
        std::string key = line.substr(0, comma);
        std::string_view value = std::string_view(line).substr(comma + 1);
        if (key == "environment")
            t.environment = std::string(value);
        else
            t.rows.emplace_back(std::move(key), parse_real(value));
    }
    if (t.environment.empty()) throw Error(Errc::ParseError, "metrics file has no environment row");
    return t;
}

struct Comparison {
    std::string csv;
    std::string text;
};

/// Side-by-side counters of a baseline and an adaptive run. The ratio column
/// is adaptive / baseline (1 when both are 0, empty when only the baseline is).
inline Comparison compare_report(const MetricsTable& baseline, const MetricsTable& autocop) {
    if (baseline.environment != autocop.environment)
        throw Error(Errc::ConfigError, "cannot compare " + baseline.environment + " with " + autocop.environment);
    std::vector<std::string> names;
    for (const auto& [k, _] : baseline.rows) names.push_back(k);
    for (const auto& [k, _] : autocop.rows)
        if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);

    auto ratio_text = [](double b, double a) -> std::string {
        if (b == 0.0) return a == 0.0 ? "1" : "";
        return format_real(a / b);
    };

    std::ostringstream csv, text;
    csv << "metric,baseline,autocop,ratio\n";
    std::size_t width = 6;
    for (const auto& n : names) width = std::max(width, n.size());
    text << "environment: " << baseline.environment << '\n';
    text << std::left << std::setw(static_cast<int>(width)) << "metric" << "  " << std::right << std::setw(14)
         << "baseline" << std::setw(14) << "autocop" << std::setw(12) << "ratio" << '\n';
    for (const auto& n : names) {
        const double b = baseline.get(n), a = autocop.get(n);
        const std::string r = ratio_text(b, a);
        csv << n << ',' << format_real(b) << ',' << format_real(a) << ',' << r << '\n';
        text << std::left << std::setw(static_cast<int>(width)) << n << "  " << std::right << std::setw(14)
             << format_short(b) << std::setw(14) << format_short(a) << std::setw(12)
             << (r.empty() ? "-" : format_short(parse_real(r))) << '\n';
    }
    return {csv.str(), text.str()};
}

// ---- warehouse path rendering --------------------------------------------

/// Cells visited in one episode of a warehouse trace, in order of first visit.
inline std::vector<warehouse::Cell> visited_cells(const Trace& trace, std::uint64_t episode) {
    std::vector<warehouse::Cell> out;
    auto add = [&](const StateKey& key) {
        warehouse::WarehouseState s;
        try {
            s = warehouse::WarehouseState::from_key(key);
        } catch (const Error&) {
            throw Error(Errc::ConfigError, "not a warehouse trace: state " + key.canonical());
        }
        if (std::find(out.begin(), out.end(), s.cell()) == out.end()) out.push_back(s.cell());
    };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceRecord& r = trace[i];
        if (!r.episode) throw Error(Errc::ConfigError, "not a warehouse trace: record without episode");
        if (*r.episode != episode) continue;
        add(r.state);
        add(r.next_state);
    }
    return out;
}

/// n x n grid, row x top to bottom: S start, P pickup, D dropoff, * visited.
inline std::string render_path(const Trace& trace, std::uint64_t episode,
                               const warehouse::WarehouseConfig& config = {}) {
    config.validate();
    const auto cells = visited_cells(trace, episode);
    std::string out;
    for (int x = 0; x < config.n; ++x) {
        for (int y = 0; y < config.n; ++y) {
            const warehouse::Cell c{x, y};
            char mark = '.';
            if (std::find(cells.begin(), cells.end(), c) != cells.end()) mark = '*';
            if (c == config.start) mark = 'S';
            if (c == config.pickup) mark = 'P';
            if (c == config.dropoff) mark = 'D';
            if (y) out += ' ';
            out += mark;
        }
        out += '\n';
    }
    return out;
}

// ---- output directory ----------------------------------------------------

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    return out;
}

inline void write_episodes(std::ostream& out, const Metrics& m) {
    out << "episode,decision_points,executed_actions\n";
    for (std::size_t i = 0; i < m.episode_decision_points.size(); ++i)
        out << i << ',' << m.episode_decision_points[i] << ',' << m.episode_executed_actions[i] << '\n';
}

}  // namespace detail

inline std::string summary_text(const ExperimentConfig& config, const PipelineResult& r) {
    std::ostringstream s;
    s << (r.baseline ? "baseline" : "auto-cop") << " run, " << to_string(config.environment) << ", seed "
      << config.seed << '\n';
    s << "budget " << config.budget() << (config.environment == EnvKind::Driving ? " steps" : " episodes")
      << " per phase\n";
    s << "phase 1: " << r.learning.decision_points << " decisions, trace of " << r.trace.size() << " steps\n";
    if (!r.baseline) {
        s << "phase 2: " << r.metrics.options_extracted << " multi-step options in " << r.metrics.states_with_options
          << " states\n";
        s << "phase 3: " << r.option_learning.decision_points << " decisions, " << r.option_learning.adaptation_actuations
          << " option executions\n";
        s << "phase 4: " << r.adaptations.size() << " adaptations\n";
        for (const auto& a : r.adaptations)
            s << "  [" << a.source_state.canonical() << "] {" << join(a.actions, ", ") << "} q="
              << format_short(a.q_value) << '\n';
    }
    const auto t = tabulate(r.metrics);
    s << "phase 5:\n";
    for (const auto& [k, v] : t.rows) s << "  " << k << " = " << format_short(v) << '\n';
    return s.str();
}

/// Writes a run's artifacts into `dir` (created if needed).
inline void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& config, const PipelineResult& r) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw Error(Errc::IoError, "cannot create output directory " + dir.string());
    {
        auto out = detail::open_out(dir / "trace.tsv");
        r.trace.write(out);
    }
    {
        auto out = detail::open_out(dir / "exploitation.tsv");
        r.exploitation.write(out);
    }
    if (!r.baseline) {
        {
            auto out = detail::open_out(dir / "options.txt");
            r.store.write(out);
        }
        std::filesystem::create_directories(dir / "stubs", ec);
        if (ec) throw Error(Errc::IoError, "cannot create " + (dir / "stubs").string());
        for (const auto& a : r.adaptations) {
            auto out = detail::open_out(dir / "stubs" / (a.context.name + ".js"));
            out << emit_stub(a, config.target);
        }
        auto out = detail::open_out(dir / "adaptations.tsv");
        write_manifest(out, r.adaptations);
    }
    {
        auto out = detail::open_out(dir / "metrics.csv");
        write_metrics_csv(out, tabulate(r.metrics));
    }
    if (r.metrics.episodes) {
        auto out = detail::open_out(dir / "episodes.csv");
        detail::write_episodes(out, r.metrics);
    }
    {
        auto out = detail::open_out(dir / "report.txt");
        out << summary_text(config, r);
    }
}

}  // namespace autocop
