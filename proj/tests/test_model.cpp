#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "zsposg/model.hpp"

using namespace zsposg;
using namespace zsposg::testing;

namespace {

const char* kTiny = R"(
agents: 2
discount: 1
horizon: 2
states: only
actions:
a
b
observations:
y
z
start: 1
T: * * : * : * : * * : 1
)";

}  // namespace

TEST(ParseModel, MatchingPenniesFile) {
  PosgModel m = load("matching_pennies.zsposg");
  EXPECT_EQ(m.num_states(), 3);
  EXPECT_EQ(m.num_actions(0), 2);
  EXPECT_EQ(m.num_obs(1), 1);
  EXPECT_EQ(m.horizon, 2);
  EXPECT_DOUBLE_EQ(m.discount, 1.0);
  EXPECT_DOUBLE_EQ(m.r_min, -1.0);
  EXPECT_DOUBLE_EQ(m.r_max, 1.0);
  EXPECT_DOUBLE_EQ(m.b0[0], 1.0);
}

TEST(ParseModel, DegenerateZeroRewardModel) {
  PosgModel m = parse_model(kTiny);
  EXPECT_EQ(m.num_states(), 1);
  EXPECT_DOUBLE_EQ(m.r_min, 0.0);
  EXPECT_DOUBLE_EQ(m.r_max, 0.0);
  EXPECT_DOUBLE_EQ(m.p(0, 0, 0, 0, 0, 0), 1.0);
}

TEST(ParseModel, RowSummingToPointNineIsRejected) {
  std::string text = kTiny;
  text.replace(text.find(": 1\n", text.find("T:")), 4, ": 0.9\n");
  EXPECT_THROW(parse_model(text), ModelError);
}

TEST(ParseModel, ErrorsCarryLineNumbers) {
  std::string text = std::string(kTiny) + "R: a nope : only : 1\n";
  try {
    parse_model(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 14);
  }
  EXPECT_THROW(parse_model("agents: 3\n"), ParseError);
  EXPECT_THROW(parse_model("bogus: 1\n"), ParseError);
  EXPECT_THROW(parse_model(std::string(kTiny) + "discount: x\n"), ParseError);
}

TEST(ParseModel, LaterLinesOverrideAndIndicesWork) {
  const char* text = R"(
agents: 2
discount: 0.5
horizon: 1
states: 2
actions:
2
1
observations:
1
1
start: uniform
T: * * : * : 0 : * * : 1
R: * * : * : 3
R: 1 0 : 1 : -2
)";
  PosgModel m = parse_model(text);
  EXPECT_EQ(m.state_names, (std::vector<std::string>{"s0", "s1"}));
  EXPECT_DOUBLE_EQ(m.b0[1], 0.5);
  EXPECT_DOUBLE_EQ(m.r(0, 0, 0), 3.0);
  EXPECT_DOUBLE_EQ(m.r(1, 1, 0), -2.0);
  EXPECT_DOUBLE_EQ(m.r_min, -2.0);
}

TEST(ParseModel, MissingFileIsAParseError) {
  EXPECT_THROW(load_model(model_path("does_not_exist.zsposg")), ParseError);
}

TEST(ParseModel, BenchmarkSizes) {
  struct Size {
    const char* file;
    int s, a1, a2, z1, z2;
  };
  for (auto sz : {Size{"adv_tiger.zsposg", 2, 3, 2, 2, 2}, Size{"competitive_tiger.zsposg", 2, 4, 4, 3, 3},
                  Size{"mabc.zsposg", 4, 2, 2, 2, 2}, Size{"recycling_robot.zsposg", 4, 3, 3, 2, 2}}) {
    PosgModel m = load(sz.file);
    EXPECT_EQ(m.num_states(), sz.s) << sz.file;
    EXPECT_EQ(m.num_actions(0), sz.a1) << sz.file;
    EXPECT_EQ(m.num_actions(1), sz.a2) << sz.file;
    EXPECT_EQ(m.num_obs(0), sz.z1) << sz.file;
    EXPECT_EQ(m.num_obs(1), sz.z2) << sz.file;
  }
}

TEST(Histories, EncodeDecodeRoundTrip) {
  PosgModel m = load("adv_tiger.zsposg");
  for (int depth = 0; depth <= 3; ++depth) {
    const Hist n = count_histories(m, 0, depth);
    EXPECT_EQ(n, static_cast<Hist>(std::pow(6, depth)));
    for (Hist h = 0; h < n; ++h) {
      auto steps = decode(m, 0, h, depth);
      ASSERT_EQ(static_cast<int>(steps.size()), depth);
      EXPECT_EQ(encode(m, 0, steps), h);
      if (depth > 0) {
        EXPECT_EQ(extend(m, 0, parent(m, 0, h), steps.back().action, steps.back().obs), h);
        EXPECT_EQ(last_step(m, 0, h).action, steps.back().action);
      }
    }
  }
}

TEST(Belief, EmptyHistoryIsStart) {
  PosgModel m = load("mabc.zsposg");
  BeliefResult r = belief_for_history(m, {});
  EXPECT_TRUE(r.possible);
  EXPECT_DOUBLE_EQ(r.reach, 1.0);
  EXPECT_EQ(r.belief, m.b0);
}

TEST(Belief, MatchingPenniesHeadsBranch) {
  PosgModel m = load("matching_pennies.zsposg");
  JointHistory h{1, extend(m, 0, 0, 0, 0), extend(m, 1, 0, 1, 0)};
  BeliefResult r = belief_for_history(m, h);
  EXPECT_DOUBLE_EQ(r.reach, 1.0);
  EXPECT_DOUBLE_EQ(r.belief[1], 1.0);
}

TEST(Belief, InconsistentObservationHasZeroReach) {
  PosgModel m = load("mabc.zsposg");
  // Both buffers start full and stay full while waiting: "empty" is impossible.
  JointHistory h{1, extend(m, 0, 0, 1, 0), extend(m, 1, 0, 1, 1)};
  BeliefResult r = belief_for_history(m, h);
  EXPECT_FALSE(r.possible);
  EXPECT_DOUBLE_EQ(r.reach, 0.0);
}

TEST(Belief, ExpectedStateReward) {
  PosgModel c = constant_model(2.5, 1);
  EXPECT_DOUBLE_EQ(expected_state_reward(c, {1.0}, 0, 0), 2.5);
  PosgModel m = load("matching_pennies.zsposg");
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      EXPECT_DOUBLE_EQ(expected_state_reward(m, m.b0, a1, a2), m.r(0, a1, a2));
      EXPECT_DOUBLE_EQ(expected_state_reward(m, {0, 1, 0}, a1, a2), m.r(1, a1, a2));
    }
}

TEST(SwapPlayers, ExchangesRolesAndNegatesRewards) {
  std::mt19937 rng(3);
  PosgModel m = random_model(rng, 2, 3, 2, 2, 1, 2);
  PosgModel w = swap_players(m);
  EXPECT_EQ(w.num_actions(0), 2);
  EXPECT_EQ(w.num_actions(1), 3);
  EXPECT_DOUBLE_EQ(w.r_max, -m.r_min);
  for (int s = 0; s < 2; ++s)
    for (int a1 = 0; a1 < 3; ++a1)
      for (int a2 = 0; a2 < 2; ++a2) {
        EXPECT_DOUBLE_EQ(w.r(s, a2, a1), -m.r(s, a1, a2));
        for (int s2 = 0; s2 < 2; ++s2)
          for (int z1 = 0; z1 < 2; ++z1) EXPECT_DOUBLE_EQ(w.p(s, a2, a1, s2, 0, z1), m.p(s, a1, a2, s2, z1, 0));
      }
}

TEST(HorizonFactor, UndiscountedAndDiscounted) {
  EXPECT_DOUBLE_EQ(horizon_factor(3, 0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(horizon_factor(3, 3, 1.0), 0.0);
  EXPECT_NEAR(horizon_factor(2, 0, 0.9), 1.9, 1e-12);
}
