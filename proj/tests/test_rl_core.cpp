#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "autocop/random.hpp"
#include "autocop/rl_core.hpp"

using namespace autocop;

namespace {

const StateKey s0 = StateKey::of(60, 0, 1);
const StateKey s1 = StateKey::of(60, 1, 4);

std::vector<AugmentedAction> driving_primitives() {
    std::vector<AugmentedAction> out;
    for (const char* a : {"speedUp", "slowDown", "straight", "steerLeft", "steerRight"})
        out.push_back(AugmentedAction::primitive(a));
    return out;
}

}  // namespace

TEST(AugmentedAction, KeysAndParse) {
    auto p = AugmentedAction::primitive("steerLeft");
    auto o = AugmentedAction::option({"steerLeft", "steerRight"});
    EXPECT_EQ(p.key(), "steerLeft");
    EXPECT_EQ(o.key(), "[steerLeft,steerRight]");
    EXPECT_EQ(AugmentedAction::parse(o.key()), o);
    EXPECT_EQ(AugmentedAction::parse("steerLeft"), p);
    EXPECT_THROW(AugmentedAction::parse("[steerLeft"), Error);
}

TEST(AugmentedAction, OrderPrimitivesThenShortOptions) {
    auto p = AugmentedAction::primitive("straight");
    auto o2 = AugmentedAction::option({"steerRight", "steerRight"});
    auto o2b = AugmentedAction::option({"steerLeft", "steerRight"});
    auto o3 = AugmentedAction::option({"a", "a", "a"});
    EXPECT_LT(p, o2);
    EXPECT_LT(o2b, o2);
    EXPECT_LT(o2, o3);
}

TEST(UpdateQ, HandComputedSteps) {
    LearningParams p;
    QTable q;
    auto left = AugmentedAction::primitive("steerLeft");
    auto prims = driving_primitives();
    q.set(s1, AugmentedAction::primitive("steerRight"), 10.0);
    // 0 + 0.1 * (-5 + 0.6 * 10 - 0) = 0.1
    EXPECT_NEAR(update_q(q, s0, left, -5.0, s1, prims, 1, p), 0.1, 1e-15);
    // 0.1 + 0.1 * (-5 + 6 - 0.1) = 0.19
    EXPECT_NEAR(update_q(q, s0, left, -5.0, s1, prims, 1, p), 0.19, 1e-15);
    EXPECT_EQ(q.updates(s0, left), 2u);
}

TEST(UpdateQ, OptionDiscountPerStepAndFlat) {
    auto opt = AugmentedAction::option({"steerLeft", "steerRight"});
    auto prims = driving_primitives();
    LearningParams per;
    QTable a;
    a.set(s1, prims[0], 5.0);
    // k = 2: bootstrap discounted by 0.36
    EXPECT_NEAR(update_q(a, s0, opt, 2.0, s1, prims, 2, per), 0.1 * (2.0 + 0.36 * 5.0), 1e-15);

    LearningParams flat;
    flat.option_discount = OptionDiscount::Flat;
    QTable b;
    b.set(s1, prims[0], 5.0);
    EXPECT_NEAR(update_q(b, s0, opt, 2.0, s1, prims, 2, flat), 0.1 * (2.0 + 0.6 * 5.0), 1e-15);
}

TEST(UpdateQ, TerminalHasNoBootstrap) {
    LearningParams p;
    QTable q;
    auto drop = AugmentedAction::primitive("dropoff");
    q.set(s1, drop, 100.0);
    EXPECT_NEAR(update_q(q, s0, drop, 20.0, s1, {}, 1, p), 2.0, 1e-15);
}

TEST(UpdateQ, RejectsBadInput) {
    LearningParams p;
    QTable q;
    auto a = AugmentedAction::primitive("x");
    EXPECT_THROW(update_q(q, s0, a, NAN, s1, {}, 1, p), Error);
    EXPECT_THROW(update_q(q, s0, a, INFINITY, s1, {}, 1, p), Error);
    EXPECT_THROW(update_q(q, s0, a, 1.0, s1, {}, 0, p), Error);
    EXPECT_EQ(q.state_count(), 0u);
}

TEST(UpdateQ, ValuesStayBounded) {
    // |Q| <= Rmax / (1 - gamma) under random updates
    LearningParams p;
    Rng rng(11);
    QTable q;
    auto prims = driving_primitives();
    std::vector<StateKey> states;
    for (int i = 0; i < 8; ++i) states.push_back(StateKey::of(i));
    const double rmax = 10.0, bound = rmax / (1.0 - p.gamma);
    for (int i = 0; i < 100000; ++i) {
        const auto& s = states[rng.index(states.size())];
        const auto& sn = states[rng.index(states.size())];
        double r = (rng.uniform01() * 2 - 1) * rmax;
        double v = update_q(q, s, prims[rng.index(prims.size())], r, sn, prims, 1, p);
        ASSERT_LE(std::abs(v), bound + 1e-9);
    }
}

TEST(ArgmaxQ, TiesGoToSmallestAction) {
    QTable q;
    auto prims = driving_primitives();
    // all zero: lexicographically smallest primitive name
    EXPECT_EQ(argmax_q(q, s0, prims).key(), "slowDown");
    auto opt = AugmentedAction::option({"steerLeft", "steerRight"});
    std::vector<AugmentedAction> avail = prims;
    avail.push_back(opt);
    q.set(s0, opt, 1.0);
    EXPECT_EQ(argmax_q(q, s0, avail), opt);
    q.set(s0, AugmentedAction::primitive("steerLeft"), 1.0);
    EXPECT_EQ(argmax_q(q, s0, avail).key(), "steerLeft");
    EXPECT_THROW(argmax_q(q, s0, {}), Error);
}

TEST(ArgmaxQ, ShiftInvariant) {
    Rng rng(3);
    auto prims = driving_primitives();
    for (int row = 0; row < 200; ++row) {
        QTable a, b;
        const double shift = (rng.uniform01() - 0.5) * 100;
        for (const auto& act : prims) {
            double v = std::floor(rng.uniform01() * 4);  // coarse values produce ties
            a.set(s0, act, v);
            b.set(s0, act, v + std::floor(shift));
        }
        EXPECT_EQ(argmax_q(a, s0, prims), argmax_q(b, s0, prims));
    }
}

TEST(EpsilonGreedy, GreedyAtZeroAndUniformAtOne) {
    QTable q;
    auto prims = driving_primitives();
    q.set(s0, prims[2], 3.0);
    Rng rng(9);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(select_epsilon_greedy(q, s0, prims, 0.0, rng), prims[2]);
    std::map<std::string, int> seen;
    for (int i = 0; i < 5000; ++i) ++seen[select_epsilon_greedy(q, s0, prims, 1.0, rng).key()];
    EXPECT_EQ(seen.size(), 5u);
    for (const auto& [_, n] : seen) EXPECT_NEAR(n, 1000, 150);
}

TEST(LearningParams, ScheduleAndValidation) {
    LearningParams p;
    p.exploration_steps = 4000;
    EXPECT_EQ(p.epsilon_at(0), 0.2);
    EXPECT_EQ(p.epsilon_at(3999), 0.2);
    EXPECT_EQ(p.epsilon_at(4000), 0.001);
    p.alpha = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p.alpha = 0.1;
    p.gamma = 1.0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(QTable, WriteReadRoundTrip) {
    QTable q;
    q.set(s0, AugmentedAction::option({"steerLeft", "steerRight"}), 4.918);
    q.set(s0, AugmentedAction::primitive("straight"), -0.25);
    q.set(s1, AugmentedAction::primitive("steerRight"), 1e-7);
    std::stringstream ss;
    q.write(ss);
    EXPECT_EQ(QTable::read(ss), q);
}
