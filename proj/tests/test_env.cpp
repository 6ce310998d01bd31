#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "rotting/env.hpp"
#include "rotting/model_family.hpp"
#include "rotting/seeding.hpp"

using namespace rotting;

namespace {

RottingProfile np_profile(double sigma2 = 0.2) {
  return {{TabulatedArm{{}, 0.5}, TabulatedArm{{{7500, 1.0}}, 0.4}}, sigma2};
}

}  // namespace

TEST(MeanReward, NonParametricStepArm) {
  const auto p = np_profile();
  EXPECT_EQ(mean_reward(p, 1, 1), 1.0);
  EXPECT_EQ(mean_reward(p, 1, 7500), 1.0);
  EXPECT_EQ(mean_reward(p, 1, 7501), 0.4);
  EXPECT_EQ(mean_reward(p, 0, 1), 0.5);
  EXPECT_EQ(mean_reward(p, 0, 1'000'000), 0.5);
}

TEST(MeanReward, PlateauFamily) {
  const auto fam = plateau_family({0.1});
  EXPECT_EQ(fam.mean(1, 0.1), 1.0);
  EXPECT_EQ(fam.mean(99, 0.1), 1.0);
  // 2^-0.1 to 20 digits, from an arbitrary-precision evaluation.
  EXPECT_NEAR(fam.mean(100, 0.1), 0.93303299153680741598, 1e-15);
  EXPECT_NEAR(fam.mean(250, 0.1), std::pow(3.0, -0.1), 1e-15);
}

TEST(MeanReward, ParametricAddsConstant) {
  auto fam = std::make_shared<const ModelFamily>(power_family({0.1, 0.4}));
  const RottingProfile p{{ParametricArm{0.3, 0.4, fam}}, 0.0};
  EXPECT_DOUBLE_EQ(mean_reward(p, 0, 4), 0.3 + std::pow(4.0, -0.4));
}

TEST(MeanReward, RejectsBadIndices) {
  const auto p = np_profile();
  EXPECT_THROW(mean_reward(p, 2, 1), std::out_of_range);
  EXPECT_THROW(mean_reward(p, 0, 0), std::invalid_argument);
}

TEST(Validate, RejectsBrokenProfiles) {
  EXPECT_THROW(validate(RottingProfile{{}, 0.1}), std::invalid_argument);
  EXPECT_THROW(validate(RottingProfile{{TabulatedArm{{}, 0.5}}, -1.0}), std::invalid_argument);
  EXPECT_THROW(validate(RottingProfile{{TabulatedArm{{{5, 0.5}, {5, 0.6}}, 0.1}}, 0.1}), std::invalid_argument);
  EXPECT_THROW(validate(RottingProfile{{TabulatedArm{{{5, 0.5}}, 0.6}}, 0.1}), std::invalid_argument);
  EXPECT_THROW(validate(RottingProfile{{TabulatedArm{{{5, 0.5}}, 0.0}}, 0.1}), std::invalid_argument);
  EXPECT_THROW(validate(RottingProfile{{TabulatedArm{{{0, 0.5}}, 0.1}}, 0.1}), std::invalid_argument);
  auto fam = std::make_shared<const ModelFamily>(power_family({0.1}));
  EXPECT_THROW(validate(RottingProfile{{ParametricArm{0.0, 0.2, fam}}, 0.1}), std::invalid_argument);
  EXPECT_THROW(validate(RottingProfile{{ParametricArm{0.0, 0.1, nullptr}}, 0.1}), std::invalid_argument);
  EXPECT_NO_THROW(validate(np_profile()));
}

TEST(SampleReward, ZeroNoiseIsExactMean) {
  const auto p = np_profile(0.0);
  EnvState s(2);
  Rng rng(7);
  EXPECT_EQ(sample_reward(p, s, 1, rng), 1.0);
  EXPECT_EQ(sample_reward(p, s, 0, rng), 0.5);
}

TEST(SampleReward, DeterministicForAFixedSeed) {
  const auto p = np_profile();
  const EnvState s(2);
  const EnvState clone = s;
  Rng a(42), b(42);
  EXPECT_EQ(sample_reward(p, s, 1, a), sample_reward(p, clone, 1, b));
}

TEST(SampleReward, MonteCarloMomentsMatch) {
  const auto p = np_profile(0.2);
  const EnvState s(2);
  auto rng = child_rng(2024, 0, Stream::kRewards);
  constexpr int kN = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double r = sample_reward(p, s, 1, rng);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / kN;
  const double var = (sq - kN * mean * mean) / (kN - 1);
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(var, 0.2, 0.02);
}

TEST(Step, RestedSemantics) {
  const auto p = np_profile();
  Rng rng(1);
  EnvState s(2);
  for (int i = 0; i < 3; ++i) s = step(p, s, 0, rng).second;
  EXPECT_EQ(s.pulls, (std::vector<std::int64_t>{3, 0}));
  EXPECT_EQ(s.time, 3);

  EnvState u(2);
  for (std::size_t arm : {0u, 1u, 0u}) u = step(p, u, arm, rng).second;
  EXPECT_EQ(u.pulls, (std::vector<std::int64_t>{2, 1}));
  EXPECT_THROW(step(p, u, 2, rng), std::out_of_range);
}

TEST(Step, RewardUsesNextPullIndex) {
  const RottingProfile p{{TabulatedArm{{{1, 1.0}, {1, 0.7}}, 0.2}}, 0.0};
  Rng rng(3);
  EnvState s(1);
  std::vector<double> rewards;
  for (int i = 0; i < 4; ++i) {
    auto [r, next] = step(p, s, 0, rng);
    rewards.push_back(r);
    s = next;
  }
  EXPECT_EQ(rewards, (std::vector<double>{1.0, 0.7, 0.2, 0.2}));
}

TEST(Step, ConservationOverRandomSequences) {
  const RottingProfile p{{TabulatedArm{{}, 0.5}, TabulatedArm{{}, 0.4}, TabulatedArm{{}, 0.3}}, 0.2};
  Rng rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  EnvState s(3);
  for (int t = 1; t <= 500; ++t) {
    s = step(p, s, pick(rng), rng).second;
    std::int64_t total = 0;
    for (auto n : s.pulls) total += n;
    ASSERT_EQ(total, t);
    ASSERT_EQ(s.time, t);
  }
}

TEST(Families, PositiveMonotoneAndVanishing) {
  const std::vector<double> thetas = theta_range(0.1, 0.4, 0.05);
  for (const auto& fam : {power_family(thetas), plateau_family(thetas)}) {
    for (double theta : thetas) {
      std::vector<std::int64_t> grid;
      for (std::int64_t n = 1; n <= 20000; ++n) grid.push_back(n);
      for (double x = 20000; x <= 1e6; x *= 1.05) grid.push_back(static_cast<std::int64_t>(x));
      for (auto n : grid) {
        ASSERT_GT(fam.mean(n, theta), 0.0) << fam.name() << " " << theta << " " << n;
        ASSERT_LE(fam.mean(n + 1, theta), fam.mean(n, theta)) << fam.name() << " " << theta << " " << n;
      }
      double prev = fam.mean(10, theta);
      for (std::int64_t p = 100; p <= 1'000'000; p *= 10) {
        const double v = fam.mean(p, theta);
        EXPECT_LT(v, prev) << fam.name() << " " << theta << " " << p;
        prev = v;
      }
    }
  }
}

TEST(Families, ThetaRangeAndLookup) {
  const auto t = theta_range(0.1, 0.4, 0.05);
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t.front(), 0.1);
  EXPECT_EQ(t[3], 0.25);
  EXPECT_EQ(t.back(), 0.4);
  const auto fam = make_family("plateau", t);
  EXPECT_EQ(fam.index_of(0.35), 5u);
  EXPECT_THROW(fam.index_of(0.33), std::invalid_argument);
  EXPECT_THROW(make_family("nope", t), std::invalid_argument);
  EXPECT_THROW(power_family({}), std::invalid_argument);
  EXPECT_THROW(fam.mean(0, 0.1), std::invalid_argument);
}

TEST(PrefixSums, AccessPathDoesNotChangeValues) {
  const auto fam = power_family({0.25});
  PrefixSums forward(fam, 0.25);
  std::vector<long double> expected(20001);
  for (std::int64_t n = 0; n <= 20000; ++n) expected[static_cast<std::size_t>(n)] = forward.at(n);

  PrefixSums jumpy(fam, 0.25);
  Rng rng(5);
  std::uniform_int_distribution<std::int64_t> pick(0, 20000);
  jumpy.at(20000);
  for (int i = 0; i < 3000; ++i) {
    const auto n = pick(rng);
    ASSERT_EQ(jumpy.at(n), expected[static_cast<std::size_t>(n)]) << n;
    ASSERT_EQ(jumpy.at(n / 2), expected[static_cast<std::size_t>(n / 2)]) << n / 2;
  }
}

TEST(MeanTable, MatchesFamily) {
  auto fam = std::make_shared<const ModelFamily>(power_family({0.1, 0.4}));
  MeanTable table(fam);
  double s = 0.0;
  for (std::int64_t n = 1; n <= 100; ++n) {
    s += std::pow(static_cast<double>(n), -0.4);
    EXPECT_EQ(table.mean(n, 1), fam->mean(n, 0.4));
    EXPECT_NEAR(table.prefix(n, 1), s, 1e-12);
  }
  EXPECT_EQ(table.prefix(0, 0), 0.0);
}

TEST(Seeding, StreamsAreDistinctAndReproducible) {
  auto a = child_rng(1, 2, Stream::kRewards);
  auto b = child_rng(1, 2, Stream::kRewards);
  auto c = child_rng(1, 2, Stream::kPolicy);
  auto d = child_rng(1, 3, Stream::kRewards);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}
