#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rotting/cto.hpp"
#include "rotting/model_family.hpp"
#include "rotting/seeding.hpp"
#include "rotting/theory.hpp"

using namespace rotting;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

/// 50-digit prefix sums of the (double) means, the reference for both ratios.
std::vector<Big> exact_prefix(const ModelFamily& f, double theta, std::int64_t n) {
  std::vector<Big> p(static_cast<std::size_t>(n) + 1, Big(0));
  for (std::int64_t j = 1; j <= n; ++j)
    p[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j - 1)] + f.mean(j, theta);
  return p;
}

double exact_ratio(std::int64_t n, double sigma2, const Big& d) {
  return d == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(n) * sigma2 / static_cast<double>(d * d);
}

}  // namespace

TEST(Det, IndistinguishableAtOne) {
  const auto f = power_family({0.1, 0.4});
  EXPECT_TRUE(std::isinf(det(f, 0.1, 0.4, 1, 1.0)));
}

TEST(Det, BruteForceAtTwo) {
  const auto f = power_family({0.1, 0.4});
  // 50-digit reference: 2 / (2^-0.1 - 2^-0.4)^2
  EXPECT_NEAR(det(f, 0.1, 0.4, 2, 1.0), 65.175922935900055488, 1e-10);
}

TEST(Det, LinearInSigma2) {
  const auto f = power_family({0.1, 0.4});
  for (std::int64_t n : {2, 10, 1000})
    EXPECT_DOUBLE_EQ(det(f, 0.1, 0.4, n, 0.4), 2.0 * det(f, 0.1, 0.4, n, 0.2));
}

TEST(Ddet, BruteForceAtTwoAndOne) {
  const auto f = power_family({0.1, 0.4});
  const double d = std::pow(2.0, -0.1) - std::pow(2.0, -0.4);
  EXPECT_NEAR(ddet(f, 0.1, 0.4, 2, 1.0), 2.0 / (d * d), 1e-10);
  EXPECT_TRUE(std::isinf(ddet(f, 0.1, 0.4, 1, 1.0)));
  const auto g = ModelFamily("steep", {1.0, 2.0}, [](std::int64_t n, double th) { return th / static_cast<double>(n); });
  // n = 1: empty first half, second half j = 1
  EXPECT_DOUBLE_EQ(ddet(g, 1.0, 2.0, 1, 0.5), 0.5 / 1.0);
}

TEST(Ddet, ConstantShiftInvariance) {
  const auto base = power_family({0.1, 0.4});
  const auto shifted = ModelFamily("shifted", {0.1, 0.4}, [](std::int64_t n, double th) {
    return 0.75 + std::pow(static_cast<double>(n), -th);
  });
  for (std::int64_t n = 2; n <= 40; n += 2) {
    EXPECT_NEAR(ddet(base, 0.1, 0.4, n, 0.2), ddet(shifted, 0.1, 0.4, n, 0.2),
                1e-9 * ddet(base, 0.1, 0.4, n, 0.2))
        << n;
  }
}

TEST(Det, IncrementalMatchesExactSums) {
  const auto thetas = theta_range(0.1, 0.4, 0.05);
  const auto f = power_family(thetas);
  constexpr std::int64_t kN = 10000;
  std::vector<std::vector<Big>> prefix;
  for (double th : thetas) prefix.push_back(exact_prefix(f, th, kN));
  DetectabilityCalculator calc(f, 0.2);
  for (std::size_t a = 0; a < thetas.size(); ++a) {
    for (std::size_t b = a + 1; b < thetas.size(); ++b) {
      for (std::int64_t n = 1; n <= kN; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const auto h = static_cast<std::size_t>(n / 2);
        const double want = exact_ratio(n, 0.2, prefix[a][i] - prefix[b][i]);
        const double dd = exact_ratio(n, 0.2, 2 * (prefix[a][h] - prefix[b][h]) - (prefix[a][i] - prefix[b][i]));
        const double got = calc.det(a, b, n), got_dd = calc.ddet(a, b, n);
        if (std::isinf(want)) {
          ASSERT_EQ(got, want) << a << " " << b << " " << n;
        } else {
          ASSERT_NEAR(got, want, 1e-12 * want) << a << " " << b << " " << n;
        }
        if (std::isinf(dd)) {
          ASSERT_EQ(got_dd, dd) << a << " " << b << " " << n;
        } else {
          ASSERT_NEAR(got_dd, dd, 1e-12 * dd) << a << " " << b << " " << n;
        }
      }
    }
  }
}

TEST(FStarDown, SimpleFunctions) {
  EXPECT_EQ(f_star_down([](std::int64_t n) { return 1.0 / static_cast<double>(n); }, 0.1, 1000, 50), 10);
  EXPECT_FALSE(f_star_down([](std::int64_t) { return 2.0; }, 1.0, 1000, 50).has_value());
  // Dip below the threshold then come back: the later crossing wins.
  const auto bumpy = [](std::int64_t n) { return (n >= 5 && n < 8) ? 0.0 : 100.0 / static_cast<double>(n); };
  EXPECT_EQ(f_star_down(bumpy, 1.0, 10000, 20), 100);
  EXPECT_THROW(f_star_down(bumpy, 1.0, 0, 20), std::invalid_argument);
}

TEST(FStarDown, MinimalityForDet) {
  const auto f = power_family({0.1, 0.4});
  DetectabilityCalculator calc(f, 0.2);
  const double zeta = 1.0 / (16.0 * std::log(1000.0));
  const auto fn = [&](std::int64_t n) { return calc.det(0, 1, n); };
  const auto n = f_star_down(fn, zeta, 10'000'000, 1000);
  ASSERT_TRUE(n.has_value());
  EXPECT_LE(fn(*n), zeta);
  EXPECT_LE(fn(2 * *n), zeta);
  EXPECT_LE(fn(4 * *n), zeta);
  EXPECT_GT(fn(*n - 1), zeta);
}

TEST(Bal, PaperExampleAgainstAScan) {
  const auto f = power_family({0.1, 0.49});
  const auto b = bal(f, 10);
  ASSERT_TRUE(b.has_value());
  // alpha^-0.1 <= 10^-0.49  <=>  alpha >= 10^4.9 = 79432.82...
  EXPECT_EQ(*b, 79433);
  const double floor_level = std::pow(10.0, -0.49);
  std::int64_t scan = 1;
  while (std::pow(static_cast<double>(scan), -0.1) > floor_level) ++scan;
  EXPECT_EQ(*b, scan);
}

TEST(Bal, SingletonIsIdentityAndMonotone) {
  const auto single = power_family({0.3});
  for (std::int64_t n : {1, 2, 7, 100, 12345}) EXPECT_EQ(bal(single, n), n);
  const auto f = power_family({0.1, 0.2, 0.4});
  std::int64_t prev = 0;
  for (std::int64_t n = 1; n <= 300; ++n) {
    const auto b = bal(f, n);
    ASSERT_TRUE(b.has_value());
    ASSERT_GE(*b, prev);
    prev = *b;
  }
  EXPECT_FALSE(bal(f, std::nullopt).has_value());
}

TEST(Bal, Minimality) {
  const auto f = power_family({0.1, 0.4});
  for (std::int64_t n : {2, 3, 10, 50}) {
    const auto b = bal(f, n);
    ASSERT_TRUE(b.has_value());
    const double lvl = std::pow(static_cast<double>(n), -0.4);
    EXPECT_LE(std::pow(static_cast<double>(*b), -0.1), lvl);
    EXPECT_GT(std::pow(static_cast<double>(*b - 1), -0.1), lvl);
  }
}

TEST(Mdiff, SingletonAndParity) {
  EXPECT_EQ(m_diff_upper_bound(power_family({0.2}), 0.1, 3, 0.2).budget, 2);
  const auto f = power_family({0.1, 0.4});
  for (double delta : {0.1, 0.05, 0.01}) {
    for (std::int64_t k : {1, 2, 10}) {
      const auto b = m_diff_upper_bound(f, delta, k, 0.2);
      EXPECT_EQ(b.budget % 2, 0);
      EXPECT_GE(b.budget, 2);
      // The budget is the crossing rounded up to even.
      const auto c = *b.pairs.front().crossing;
      EXPECT_TRUE(b.budget == c || b.budget == c + 1);
      EXPECT_LE(ddet(f, 0.1, 0.4, b.budget, 0.2), b.threshold);
    }
  }
  EXPECT_THROW(m_diff_upper_bound(f, 0.0, 2, 0.2), std::invalid_argument);
  EXPECT_THROW(m_diff_upper_bound(constant_family({0.1, 0.4}), 0.1, 2, 0.2, {1000, 100, 1000}), std::runtime_error);
}

TEST(Mdiff, MonteCarloMisdetectionWithinDeltaOverK) {
  auto fam = std::make_shared<const ModelFamily>(power_family({0.1, 0.4}));
  const double delta = 0.1, sigma2 = 0.2;
  const std::int64_t k = 2;
  const auto n = m_diff_upper_bound(*fam, delta, k, sigma2).budget;
  int wrong = 0;
  constexpr int kRuns = 2000;
  for (int r = 0; r < kRuns; ++r) {
    auto rng = child_rng(77, static_cast<std::uint64_t>(r), Stream::kRewards);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    CtoState s(fam, 1);
    for (std::int64_t j = 1; j <= n; ++j) s.record(0, fam->mean(j, 0.1) + noise(rng));
    if (s.detect_dcto(0) != 0) ++wrong;
  }
  EXPECT_LE(static_cast<double>(wrong) / kRuns, delta / static_cast<double>(k));
}

TEST(CtoDetectBound, MonteCarloAgainstHoeffding) {
  auto fam = std::make_shared<const ModelFamily>(power_family({0.1, 0.4}));
  constexpr std::int64_t kN = 200;
  constexpr int kRuns = 2000;
  const double sigma2 = 0.2;
  int right = 0;
  for (int r = 0; r < kRuns; ++r) {
    auto rng = child_rng(5, static_cast<std::uint64_t>(r), Stream::kRewards);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    CtoState s(fam, 1);
    for (std::int64_t j = 1; j <= kN; ++j) s.record(0, fam->mean(j, 0.1) + noise(rng));
    if (s.detect_cto(0) == 0) ++right;
  }
  const double bound = 1.0 - 2.0 * std::exp(-1.0 / (8.0 * det(*fam, 0.1, 0.4, kN, sigma2)));
  EXPECT_GE(static_cast<double>(right) / kRuns, bound);
}

TEST(WBound, SingletonMonotoneAndCrossing) {
  EXPECT_EQ(w_bound(power_family({0.3}), 1000, 2, 0.2).value, 1);
  const auto f = power_family({0.1, 0.4});
  DetectabilityCalculator calc(f, 0.2);
  std::int64_t prev = 0;
  for (std::int64_t t = 2; t <= 100'000'000; t *= 3) {
    const auto w = w_bound(calc, f, t, 2).value;
    ASSERT_TRUE(w.has_value());
    ASSERT_GE(*w, prev);
    prev = *w;
  }
  const auto w = w_bound(f, 10000, 2, 0.2);
  ASSERT_TRUE(w.value.has_value());
  EXPECT_DOUBLE_EQ(w.threshold, 1.0 / (16.0 * std::log(2.0 * 10000.0)));
  EXPECT_LE(det(f, 0.1, 0.4, *w.value, 0.2), w.threshold);
  EXPECT_GT(det(f, 0.1, 0.4, *w.value - 1, 0.2), w.threshold);
}

TEST(TSim, SingletonGivesK) {
  for (std::int64_t k : {1, 2, 5}) EXPECT_EQ(t_sim_upper_bound(power_family({0.2}), k, 0.2).horizon, k);
}

TEST(TSim, DefiningInequalityAndMinimality) {
  const auto check = [](const ModelFamily& f, std::int64_t k, const ScanOptions& opts) {
    const auto r = t_sim_upper_bound(f, k, 0.2, opts);
    const auto need = [&](std::int64_t t) { return k * *bal(f, w_bound(f, t, k, 0.2, opts).value); };
    EXPECT_LE(need(r.horizon), r.horizon);
    EXPECT_GT(need(r.horizon - 1), r.horizon - 1);
    return r.horizon;
  };
  check(power_family({0.2, 0.3}), 2, {});
  // Theta = {0.1, 0.4}: bal(x) = x^4, so K bal(W(T)) <= T only beyond 10^10.
  ScanOptions wide;
  wide.t_cap = 1'000'000'000'000;
  const auto t = check(power_family({0.1, 0.4}), 2, wide);
  EXPECT_GT(t, 1'000'000'000);
  EXPECT_THROW(t_sim_upper_bound(power_family({0.1, 0.4}), 2, 0.2), std::runtime_error);
}

TEST(Hoeffding, BoundFormula) {
  EXPECT_DOUBLE_EQ(hoeffding_tail_bound(2.0, 10, 0.2), std::exp(-4.0 / 4.0));
}

TEST(VerifyAssumptions, PowerFamilyPasses) {
  const auto r = verify_assumptions(power_family({0.2, 0.3}), 0.2);
  EXPECT_TRUE(r.all_passed());
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name;
}

TEST(VerifyAssumptions, ConstantFamilyFailsWithWitnesses) {
  const auto r = verify_assumptions(constant_family({0.1, 0.4}), 0.2);
  EXPECT_FALSE(r.all_passed());
  EXPECT_FALSE(r.check("rotting_models").passed);
  EXPECT_FALSE(r.check("rotting_models").witnesses.empty());
}

TEST(VerifyAssumptions, DuplicateThetaFailsDetection) {
  VerifyGrids g;
  g.scan.n_cap = 100000;
  const auto r = verify_assumptions(power_family({0.2, 0.2}), 0.2, g);
  const auto& c = r.check("d_detection");
  EXPECT_FALSE(c.passed);
  ASSERT_FALSE(c.witnesses.empty());
  EXPECT_NE(c.witnesses.front().find("(0.2, 0.2)"), std::string::npos);
}
