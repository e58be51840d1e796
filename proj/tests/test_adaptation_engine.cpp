#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "autocop/adaptation_engine.hpp"
#include "autocop/env_driving.hpp"
#include "autocop/env_warehouse.hpp"
#include "oracles.hpp"

using namespace autocop;

namespace {

// Line 0..n; "inc" pays +1 per step, "dec" -1, "stay" 0. Reaching n ends
// the episode when `episodic`.
class Chain {
public:
    Chain(int n, bool episodic) : n_(n), episodic_(episodic) {}

    StateKey sense() const { return StateKey::of(pos_); }
    StepOutcome step(const ActionId& a) {
        double r = 0;
        if (a == "inc") pos_ = std::min(n_, pos_ + 1), r = 1;
        else if (a == "dec") pos_ = std::max(0, pos_ - 1), r = -1;
        else if (a != "stay") throw Error(Errc::ParseError, a);
        return {sense(), r, episodic_ && pos_ == n_, {a}};
    }
    std::span<const ActionId> primitive_actions() const { return actions_; }
    bool is_goal(const StateKey&) const { return false; }
    bool episodic() const { return episodic_; }
    std::string name() const { return "chain"; }
    void reset() { pos_ = 0; }

private:
    int n_;
    bool episodic_;
    int pos_ = 0;
    std::vector<ActionId> actions_ = {"dec", "inc", "stay"};
};

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ExecuteOption, DiscountedReturnMatchesOracle) {
    driving::DrivingConfig cfg;
    cfg.spawn_probability = 0;
    driving::Simulator sim(cfg, 1);
    sim.set_world({60, 0, 1, 0});
    ContextRegistry reg;
    OptionCandidate opt{StateKey("60,0,1"), {"steerLeft", "steerRight"}, 0, 1};
    auto r = execute_option(sim, opt, reg, 0.6);
    EXPECT_EQ(r.steps, 2u);
    ASSERT_EQ(r.rewards.size(), 2u);
    EXPECT_NEAR(r.discounted_return, r.rewards[0] + 0.6 * r.rewards[1], 1e-12);
    EXPECT_NEAR(r.discounted_return, -5 + 0.6 * 8, 1e-12);
    EXPECT_EQ(r.final_state, StateKey("60,0,4"));
    EXPECT_TRUE(reg.active_stack().empty());
    EXPECT_TRUE(reg.is_bound(ContextId("Context6001")));
}

TEST(ExecuteOption, WrongContextLeavesEnvironmentAlone) {
    Chain env(5, false);
    ContextRegistry reg;
    OptionCandidate opt{StateKey::of(3), {"inc", "inc"}, 0, 1};
    try {
        execute_option(env, opt, reg, 0.6);
        FAIL() << "expected WrongContext";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::WrongContext);
    }
    EXPECT_EQ(env.sense(), StateKey::of(0));
    EXPECT_TRUE(reg.bindings().empty());
}

TEST(ExecuteOption, StopsAtTermination) {
    Chain env(2, true);
    ContextRegistry reg;
    auto r = execute_option(env, {StateKey::of(0), {"inc", "inc", "inc", "inc"}, 0, 1}, reg, 0.5);
    EXPECT_TRUE(r.terminal);
    EXPECT_EQ(r.steps, 2u);
    EXPECT_NEAR(r.discounted_return, 1.5, 1e-12);
    EXPECT_TRUE(reg.active_stack().empty());
}

TEST(LearnOptions, EmptyStoreIsPrimitiveLearning) {
    // Same seed, same environment: two runs through the generic learner with
    // an empty store must produce the identical table as a hand-written
    // primitive Q-learning loop.
    LearningParams p;
    p.exploration_steps = 300;
    Chain env(6, false);
    QTable q;
    Rng rng(9);
    OptionStore none;
    auto m = learn_options(env, none, q, p, {600, 1000}, rng);
    EXPECT_EQ(m.decision_points, 600u);
    EXPECT_EQ(m.executed_actions, 600u);
    EXPECT_EQ(m.adaptation_actuations, 0u);

    Chain env2(6, false);
    QTable q2;
    Rng rng2(9);
    std::vector<AugmentedAction> prims;
    for (const auto& a : env2.primitive_actions()) prims.push_back(AugmentedAction::primitive(a));
    for (std::uint64_t t = 0; t < 600; ++t) {
        const StateKey s = env2.sense();
        const auto chosen = select_epsilon_greedy(q2, s, prims, p.epsilon_at(t), rng2);
        auto o = env2.step(chosen.actions.front());
        const double expected = oracle::q_update(q2.value(s, chosen), p.alpha, p.gamma, 1, o.reward,
                                                 q2.max_value(o.next, prims));
        update_q(q2, s, chosen, o.reward, o.next, prims, 1, p);
        ASSERT_NEAR(q2.value(s, chosen), expected, 1e-12);
    }
    EXPECT_EQ(q, q2);
}

TEST(LearnOptions, AccountingInvariant) {
    OptionStore store;
    Trace t;
    for (int i = 0; i < 5; ++i) t.append({t.size(), std::nullopt, StateKey::of(i), "inc", StateKey::of(i + 1), 1});
    extract_trace(store, t, 10, {3, {}, 0.6});
    Chain env(8, true);
    QTable q;
    Rng rng(3);
    LearningParams p;
    p.epsilon_explore = 0.5;
    p.exploration_steps = 50;
    auto m = learn_options(env, store, q, p, {100, 50}, rng);
    EXPECT_EQ(m.episodes, 100u);
    EXPECT_GT(m.adaptation_actuations, 0u);
    EXPECT_GE(m.executed_actions, m.decision_points);
    std::uint64_t dp = 0, acts = 0;
    for (auto v : m.episode_decision_points) dp += v;
    for (auto v : m.episode_executed_actions) acts += v;
    EXPECT_EQ(dp, m.decision_points);
    EXPECT_EQ(acts, m.executed_actions);
    EXPECT_EQ(m.event("inc") + m.event("dec") + m.event("stay"), m.executed_actions);
}

TEST(LearnOptions, ZeroBudgetDoesNothing) {
    Chain env(4, false);
    QTable q;
    Rng rng(1);
    OptionStore none;
    auto m = learn_options(env, none, q, {}, {0, 10}, rng);
    EXPECT_EQ(m.decision_points, 0u);
    EXPECT_EQ(q, QTable{});
}

TEST(SeedOptionValues, UsesDiscountedRewardOfMultiStepCandidates) {
    Trace t;
    t.append({0, std::nullopt, StateKey("a"), "x", StateKey("b"), -5});
    t.append({1, std::nullopt, StateKey("b"), "y", StateKey("c"), 8});
    OptionStore store;
    extract_trace(store, t, 10, {8, {}, 0.6});
    QTable q;
    const auto opt = AugmentedAction::option({"x", "y"});
    q.entry(StateKey("b"), AugmentedAction::primitive("y")).updates = 1;
    seed_option_values(q, store);
    EXPECT_NEAR(q.value(StateKey("a"), opt), -0.2, 1e-12);
    EXPECT_EQ(q.value(StateKey("a"), AugmentedAction::primitive("x")), 0.0);
    // a pair already learned keeps its value
    q.set(StateKey("a"), opt, 3.0);
    q.entry(StateKey("a"), opt).updates = 2;
    seed_option_values(q, store);
    EXPECT_EQ(q.value(StateKey("a"), opt), 3.0);
}

TEST(SelectAdaptations, Rules) {
    OptionStore store;
    const StateKey s("s"), g("g"), u("u"), neg("n");
    store.record(s, {"a", "b"}, 1, 1);
    store.record(s, {"a"}, 1, 1);
    store.record(g, {"a", "b"}, 1, 1);
    store.record(u, {"a", "b"}, 1, 1);
    store.record(neg, {"a", "b"}, 1, 1);
    std::vector<ActionId> prims = {"a", "b"};
    QTable q;
    auto learn = [&](const StateKey& k, const AugmentedAction& a, double v) {
        q.set(k, a, v);
        q.entry(k, a).updates = 1;
    };
    const auto opt = AugmentedAction::option({"a", "b"});
    learn(s, AugmentedAction::primitive("a"), 1.0);
    learn(s, opt, 2.0);
    learn(g, opt, 9.0);
    // u: the option was never tried; a seeded value does not count
    q.set(u, opt, 50.0);
    learn(u, AugmentedAction::primitive("a"), -1.0);
    // neg: the option wins but is not worth taking
    learn(neg, AugmentedAction::primitive("a"), -3.0);
    learn(neg, opt, -1.0);

    auto out = select_adaptations(store, q, prims, [&](const StateKey& k) { return k == g; });
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].source_state, s);
    EXPECT_EQ(out[0].actions, (ActionSequence{"a", "b"}));
    EXPECT_EQ(out[0].context, ContextId("Contexts"));
    EXPECT_EQ(out[0].q_value, 2.0);

    // lowering the gate admits the negative-valued option
    auto loose = select_adaptations(store, q, prims, {}, -std::numeric_limits<double>::infinity());
    EXPECT_EQ(loose.size(), 3u);

    // a tie between a primitive and an option goes to the primitive
    learn(s, AugmentedAction::primitive("a"), 2.0);
    EXPECT_TRUE(select_adaptations(store, q, prims, [&](const StateKey& k) { return k == g; }).empty());
}

TEST(EmitStub, MatchesGoldenFiles) {
    const std::filesystem::path dir = AUTOCOP_GOLDEN_DIR;
    Adaptation a6{ContextId("Context6001"), {"steerLeft", "steerRight"}, StateKey("60,0,1"), 0};
    EXPECT_EQ(emit_stub(a6, "agent"), read_file(dir / "Context6001.js"));
    Adaptation a5{ContextId("Context5001"), {"steerLeft", "speedUp", "steerRight"}, StateKey("50,0,1"), 0};
    EXPECT_EQ(emit_stub(a5, "agent"), read_file(dir / "Context5001.js"));
}

TEST(EmitStub, OneLinePerAction) {
    Adaptation a{ContextId("Context23false"), {"south", "west", "west", "south", "dropoff"}, StateKey("2,3,false"),
                 0};
    const std::string stub = emit_stub(a, "robot");
    EXPECT_NE(stub.find("Context23false.adapt(robot, BAContext23false)"), std::string::npos);
    std::size_t calls = 0;
    for (std::size_t p = stub.find("this."); p != std::string::npos; p = stub.find("this.", p + 1)) ++calls;
    EXPECT_EQ(calls, 5u);
    const auto south = stub.find("this.south();"), dropoff = stub.find("this.dropoff();");
    EXPECT_LT(south, dropoff);
}

TEST(Manifest, RoundTrip) {
    std::vector<Adaptation> v = {
        {ContextId("Context6001"), {"steerLeft", "steerRight"}, StateKey("60,0,1"), 1.25},
        {ContextId("Context23false"), {"south", "dropoff"}, StateKey("2,3,false"), -0.5},
    };
    std::stringstream ss;
    write_manifest(ss, v);
    EXPECT_EQ(read_manifest(ss), v);
    std::stringstream bad("60,0,1\tsteerLeft\n");
    EXPECT_THROW(read_manifest(bad), Error);
}

TEST(AdaptivePhase, RunsInstalledAdaptations) {
    Chain env(3, true);
    ContextRegistry reg;
    install(reg, std::vector<Adaptation>{{ContextId::for_state(StateKey::of(0)), {"inc", "inc", "inc"},
                                          StateKey::of(0), 1}});
    QTable q;
    Rng rng(1);
    auto m = run_adaptive_phase(env, reg, q, 0.0, 0.6, {4, 100}, rng);
    EXPECT_EQ(m.episodes, 4u);
    EXPECT_EQ(m.decision_points, 4u);
    EXPECT_EQ(m.adaptation_actuations, 4u);
    EXPECT_EQ(m.executed_actions, 12u);
    EXPECT_TRUE(m.sensed_events.empty());
    EXPECT_TRUE(reg.active_stack().empty());
}

TEST(AdaptivePhase, EmptyRegistryIsGreedyPrimitives) {
    Chain env(3, true);
    ContextRegistry reg;
    QTable q;
    q.set(StateKey::of(0), AugmentedAction::primitive("inc"), 1);
    q.set(StateKey::of(1), AugmentedAction::primitive("inc"), 1);
    q.set(StateKey::of(2), AugmentedAction::primitive("inc"), 1);
    Rng rng(1);
    auto m = run_adaptive_phase(env, reg, q, 0.0, 0.6, {2, 100}, rng);
    EXPECT_EQ(m.decision_points, 6u);
    EXPECT_EQ(m.executed_actions, 6u);
    EXPECT_EQ(m.adaptation_actuations, 0u);
    EXPECT_EQ(m.sensed("inc"), 6u);
}

TEST(RewardSource, Values) {
    EXPECT_EQ(source_reward(RewardSource::Environment, -3), -3);
    EXPECT_EQ(source_reward(RewardSource::FixedPositive, -3, 2.5), 2.5);
    EXPECT_EQ(source_reward(RewardSource::Frequency, -3), 1);
}
