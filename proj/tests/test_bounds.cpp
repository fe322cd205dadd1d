#include <gtest/gtest.h>

#include "properties.hpp"
#include "zsposg/bounds.hpp"
#include "zsposg/sequence_form.hpp"

using namespace zsposg;
using namespace zsposg::testing;

namespace {

double naive_surface(const OneSidedBound& b, const VTuple& v, const OccupancyState& s) {
  auto mc = decompose(s, 0);
  double total = 0.0;
  for (const auto& [h, mass] : mc.marginal)
    total += mass * std::min(v.payload.nu.at(h) + b.schedule()(s.tau) * row_distance(mc.conditional.rows.at(h),
                                                                                        v.cond.rows.at(h)),
                             b.v_max(s.tau));
  return total;
}

VTuple tuple_at(std::mt19937& rng, const OccupancyState& s, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  VTuple v;
  v.tau = s.tau;
  v.cond = decompose(s, 0).conditional;
  for (Hist h : support(s, 0)) v.payload.nu[h] = u(rng);
  return v;
}

}  // namespace

TEST(Lipschitz, TheoremConstants) {
  auto s = LipschitzSchedule::theorem(3, 1.0, -1.0, 1.0);
  EXPECT_DOUBLE_EQ(s(0), 3.0);
  EXPECT_DOUBLE_EQ(s(3), 0.0);
  auto d = LipschitzSchedule::theorem(2, 0.9, 0.0, 1.0);
  EXPECT_NEAR(d(0), 0.95, 1e-12);
}

TEST(Initialize, NoChoiceGameIsExact) {
  PosgModel m = constant_model(0.5, 3);
  BoundSet b(m, {});
  b.initialize();
  auto s0 = initial_occupancy(m);
  EXPECT_NEAR(b.eval_upper(s0), 1.5, 1e-12);
  EXPECT_NEAR(b.eval_lower(s0), 1.5, 1e-12);
}

TEST(Initialize, ZeroRewardGivesZeroBounds) {
  std::mt19937 rng(8);
  PosgModel m = random_model(rng, 2, 2, 2, 2, 2, 3);
  std::fill(m.reward.begin(), m.reward.end(), 0.0);
  m.validate();
  for (Heuristic h : {Heuristic::kInit, Heuristic::kBmdp}) {
    BoundSet b(m, {LipschitzMode::kTheorem, h, 50});
    b.initialize();
    for (int t = 0; t < 3; ++t) {
      auto s = random_occupancy(rng, m, t);
      EXPECT_NEAR(b.eval_upper(s), 0.0, 1e-12);
      EXPECT_NEAR(b.eval_lower(s), 0.0, 1e-12);
    }
    EXPECT_DOUBLE_EQ(b.upper().missing_component(1, 0, nullptr), 0.0);
  }
}

TEST(Initialize, BracketsExactValue) {
  std::mt19937 rng(9);
  for (int i = 0; i < 10; ++i) {
    PosgModel m = i == 0 ? load("matching_pennies.zsposg") : random_small_model(rng, 2);
    const double v = solve_exact(m, m.horizon).value;
    for (Heuristic h : {Heuristic::kInit, Heuristic::kBmdp}) {
      BoundSet b(m, {LipschitzMode::kTheorem, h, 50});
      b.initialize();
      auto s0 = initial_occupancy(m);
      EXPECT_GE(b.eval_upper(s0), v - 1e-9);
      EXPECT_LE(b.eval_lower(s0), v + 1e-9);
    }
  }
}

TEST(EvalUpper, MatchingConditionalGivesDotProduct) {
  std::mt19937 rng(10);
  PosgModel m = random_small_model(rng, 3);
  auto s = random_occupancy(rng, m, 2);
  OneSidedBound b(m, {});
  VTuple v = tuple_at(rng, s, -0.5, 0.5);
  auto nu = v.payload.nu;
  b.add_v(std::move(v));
  auto mc = decompose(s, 0);
  double dot = 0.0;
  for (const auto& [h, w] : mc.marginal) dot += w * nu.at(h);
  EXPECT_NEAR(b.eval(s).value, dot, 1e-12);
  EXPECT_EQ(b.eval(s).id, 0);
}

TEST(EvalUpper, MatchesNaiveMinimum) {
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    PosgModel m = random_small_model(rng, 3);
    OneSidedBound b(m, {});
    auto probe = random_occupancy(rng, m, 1);
    std::vector<VTuple> bag;
    for (int k = 0; k < 3; ++k) {
      // Same supports: build anchors by re-weighting the probe's entries.
      OccupancyState anchor = probe;
      auto w = random_simplex(rng, static_cast<int>(anchor.entries.size()));
      for (std::size_t e = 0; e < w.size(); ++e) anchor.entries[e].p = w[e];
      VTuple v = tuple_at(rng, anchor, -1.0, 1.0);
      bag.push_back(v);
      b.add_v(std::move(v));
    }
    double naive = 1e300;
    for (const auto& v : bag) naive = std::min(naive, naive_surface(b, v, probe));
    EXPECT_NEAR(b.eval(probe).value, naive, 1e-12);
  }
}

TEST(Update, NewSurfaceIsTightAtItsPoint) {
  std::mt19937 rng(12);
  PosgModel m = load("mabc.zsposg", 3);
  BoundSet b(m, {});
  b.initialize();
  for (int i = 0; i < 10; ++i) {
    auto s = random_occupancy(rng, m, i % 3);
    auto r = b.upper().update(s, nullptr, nullptr);
    const VTuple& v = b.upper().v(r.v_id);
    auto mc = decompose(s, 0);
    double dot = 0.0;
    for (const auto& [h, w] : mc.marginal) dot += w * v.payload.nu.at(h);
    EXPECT_LE(b.eval_upper(s), dot + 1e-9);
    EXPECT_NEAR(dot, r.dual.value, 1e-6);
  }
}

TEST(Update, RefinementIsMonotone) {
  std::mt19937 rng(13);
  PosgModel m = load("adv_tiger.zsposg", 3);
  BoundSet b(m, {});
  b.initialize();
  std::vector<OccupancyState> probes;
  for (int i = 0; i < 20; ++i) probes.push_back(random_occupancy(rng, m, i % 3));
  std::vector<double> last;
  for (const auto& p : probes) last.push_back(b.eval_upper(p));
  for (int i = 0; i < 15; ++i) {
    b.upper().update(random_occupancy(rng, m, 2 - i % 3), nullptr, nullptr);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double v = b.eval_upper(probes[k]);
      EXPECT_LE(v, last[k] + 1e-12);
      last[k] = v;
    }
  }
}

TEST(Prune, IdenticalTuplesCollapse) {
  std::mt19937 rng(14);
  PosgModel m = random_small_model(rng, 3);
  auto s = random_occupancy(rng, m, 1);
  OneSidedBound b(m, {});
  VTuple v = tuple_at(rng, s, -1.0, 1.0);
  b.add_v(v);
  b.add_v(v);
  EXPECT_EQ(b.prune_v(1), 1);
  EXPECT_EQ(b.live_v(1).size(), 1u);
}

TEST(Prune, ComponentwiseDominationAtSameConditional) {
  std::mt19937 rng(15);
  PosgModel m = random_small_model(rng, 3);
  auto s = random_occupancy(rng, m, 1);
  OneSidedBound b(m, {});
  VTuple low = tuple_at(rng, s, -1.0, 0.0);
  VTuple high = low;
  for (auto& [h, v] : high.payload.nu) v += 0.1;
  const int hid = b.add_v(high);
  b.add_v(low);
  EXPECT_EQ(b.prune_v(1), 1);
  EXPECT_NE(b.live_v(1).front(), hid);
}

TEST(Prune, ProbesUnchanged) {
  std::mt19937 rng(16);
  PosgModel m = load("recycling_robot.zsposg", 2);
  BoundSet b(m, {});
  b.initialize();
  for (int i = 0; i < 30; ++i) b.upper().update(random_occupancy(rng, m, 1), nullptr, nullptr);
  std::vector<OccupancyState> probes;
  std::vector<double> before;
  for (int i = 0; i < 100; ++i) {
    probes.push_back(random_occupancy(rng, m, 1));
    before.push_back(b.eval_upper(probes.back()));
  }
  const std::size_t n = b.upper().live_v(1).size();
  const int removed = b.upper().prune_v(1);
  EXPECT_EQ(b.upper().live_v(1).size(), n - removed);
  for (std::size_t k = 0; k < probes.size(); ++k) EXPECT_NEAR(b.eval_upper(probes[k]), before[k], 1e-12);
}

TEST(MissingComponent, MdpValuesAndFallback) {
  std::mt19937 rng(17);
  PosgModel m = random_model(rng, 1, 2, 3, 1, 1, 3);
  OneSidedBound b(m, {});
  double best = -1e300;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 3; ++a2) best = std::max(best, m.r(0, a1, a2));
  for (int t = 0; t < 3; ++t) EXPECT_NEAR(b.mdp_value(t, 0), horizon_factor(3, t, 1.0) * best, 1e-12);
  EXPECT_DOUBLE_EQ(b.missing_component(1, 0, nullptr), b.v_max(1));
}
