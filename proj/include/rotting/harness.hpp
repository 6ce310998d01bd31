#ifndef ROTTING_HARNESS_HPP
#define ROTTING_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rotting/env.hpp"
#include "rotting/policy.hpp"
#include "rotting/seeding.hpp"
#include "rotting/stats.hpp"

namespace rotting {

/// Mean reward collected by the greedy policy on the true means at each step
/// t = 1..T. Every greedy tie-breaking collects the same non-increasing
/// sequence of values, so this sequence does not depend on tie handling.
inline std::vector<double> oracle_step_values(const RottingProfile& profile, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("oracle value needs T >= 1");
  const auto k = profile.num_arms();
  std::vector<std::int64_t> pulls(k, 0);
  std::vector<double> next(k);
  for (std::size_t i = 0; i < k; ++i) next[i] = arm_mean(profile.arms[i], 1);
  std::vector<double> values(static_cast<std::size_t>(horizon));
  for (auto& v : values) {
    const auto best = detail::argmax_first(next);
    v = next[best];
    ++pulls[best];
    next[best] = arm_mean(profile.arms[best], pulls[best] + 1);
  }
  return values;
}

/// Cumulative reward curve J(t) of the greedy policy, t = 1..T.
inline std::vector<double> oracle_value_curve(const RottingProfile& profile, std::int64_t horizon) {
  auto curve = oracle_step_values(profile, horizon);
  double total = 0.0;
  for (auto& v : curve) v = (total += v);
  return curve;
}

inline double oracle_value(const RottingProfile& profile, std::int64_t horizon) {
  return oracle_value_curve(profile, horizon).back();
}

/// Pseudo-regret J(t) - sum_{s<=t} mu_{i(s)}(pull index at s), accumulated as
/// sum_{s<=t} (v*_s - v_s) against the oracle's step values v*. A policy that
/// collects the greedy value at every step therefore scores exactly 0.
inline std::vector<double> pseudo_regret_curve(const RottingProfile& profile, std::span<const std::size_t> arms,
                                               std::span<const double> oracle_steps) {
  if (oracle_steps.size() < arms.size()) throw std::invalid_argument("oracle values shorter than arm sequence");
  std::vector<std::int64_t> pulls(profile.num_arms(), 0);
  std::vector<double> regret(arms.size());
  double total = 0.0;
  for (std::size_t t = 0; t < arms.size(); ++t) {
    check_arm(profile, arms[t]);
    total += oracle_steps[t] - arm_mean(profile.arms[arms[t]], ++pulls[arms[t]]);
    regret[t] = total;
  }
  return regret;
}

inline std::vector<double> pseudo_regret_curve(const RottingProfile& profile, std::span<const std::size_t> arms) {
  if (arms.empty()) return {};
  const auto oracle = oracle_step_values(profile, static_cast<std::int64_t>(arms.size()));
  return pseudo_regret_curve(profile, arms, oracle);
}

struct TrajectoryResult {
  std::uint64_t seed = 0;
  std::vector<std::size_t> arms;
  std::vector<double> rewards;
  std::vector<double> regret;

  double end_regret() const { return regret.empty() ? 0.0 : regret.back(); }
};

/// One seeded run of `policy` for T steps. Rewards come from the reward
/// stream of (master, index), tie-breaking from its policy stream.
inline TrajectoryResult run_trajectory(const RottingProfile& profile, Policy& policy, std::int64_t horizon,
                                       std::uint64_t master_seed, std::uint64_t index,
                                       std::span<const double> oracle_steps = {}) {
  if (horizon < 1) throw std::invalid_argument("trajectory needs T >= 1");
  if (policy.num_arms() != profile.num_arms()) throw std::invalid_argument("policy and profile disagree on K");
  auto reward_rng = child_rng(master_seed, index, Stream::kRewards);
  auto policy_rng = child_rng(master_seed, index, Stream::kPolicy);
  TrajectoryResult out;
  out.seed = index;
  out.arms.reserve(static_cast<std::size_t>(horizon));
  out.rewards.reserve(static_cast<std::size_t>(horizon));
  EnvState state(profile.num_arms());
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const auto arm = policy.choose(t, policy_rng);
    check_arm(profile, arm);
    const double r = sample_reward(profile, state, arm, reward_rng);
    state.advance(arm);
    policy.update(arm, r);
    out.arms.push_back(arm);
    out.rewards.push_back(r);
  }
  if (oracle_steps.size() >= static_cast<std::size_t>(horizon))
    out.regret = pseudo_regret_curve(profile, out.arms, oracle_steps);
  else
    out.regret = pseudo_regret_curve(profile, out.arms);
  return out;
}

/// Where each trajectory's profile comes from: one fixed profile, or arm
/// parameters resampled per trajectory (theta uniformly from the family with
/// replacement, constant uniformly from [constant_min, constant_max]).
class ProfileSource {
 public:
  static ProfileSource fixed(RottingProfile profile) {
    validate(profile);
    ProfileSource s;
    s.fixed_ = std::move(profile);
    return s;
  }

  static ProfileSource resampled(FamilyRef family, std::size_t num_arms, double sigma2, double constant_min,
                                 double constant_max) {
    if (!family) throw std::invalid_argument("resampled profile needs a model family");
    if (num_arms < 1) throw std::invalid_argument("resampled profile needs K >= 1");
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
    if (!(constant_min >= 0.0) || constant_max < constant_min)
      throw std::invalid_argument("constant range must satisfy 0 <= min <= max");
    ProfileSource s;
    s.family_ = std::move(family);
    s.num_arms_ = num_arms;
    s.sigma2_ = sigma2;
    s.cmin_ = constant_min;
    s.cmax_ = constant_max;
    return s;
  }

  bool is_resampled() const noexcept { return !fixed_.has_value(); }
  std::size_t num_arms() const noexcept { return fixed_ ? fixed_->num_arms() : num_arms_; }

  RottingProfile instantiate(std::uint64_t master_seed, std::uint64_t index) const {
    if (fixed_) return *fixed_;
    auto rng = child_rng(master_seed, index, Stream::kProfile);
    std::uniform_int_distribution<std::size_t> pick(0, family_->size() - 1);
    std::uniform_real_distribution<double> constant(cmin_, cmax_);
    RottingProfile p;
    p.noise_variance = sigma2_;
    for (std::size_t i = 0; i < num_arms_; ++i) {
      ParametricArm arm;
      arm.family = family_;
      arm.theta = family_->theta(pick(rng));
      arm.constant = cmax_ > cmin_ ? constant(rng) : cmin_;
      p.arms.emplace_back(arm);
    }
    return p;
  }

 private:
  ProfileSource() = default;
  std::optional<RottingProfile> fixed_;
  FamilyRef family_;
  std::size_t num_arms_ = 0;
  double sigma2_ = 0.0;
  double cmin_ = 0.0;
  double cmax_ = 0.0;
};

/// Builds a fresh policy for a trajectory's profile (the oracle needs it).
using PolicyFactory = std::function<PolicyPtr(const RottingProfile&)>;

struct PolicyEntry {
  std::string label;
  PolicyFactory make;
};

struct ExperimentPlan {
  ProfileSource profiles = ProfileSource::fixed(RottingProfile{{TabulatedArm{{}, 1.0}}, 0.0});
  std::vector<PolicyEntry> policies;
  std::int64_t horizon = 1;
  std::int64_t repetitions = 1;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct PolicySummary {
  std::string label;
  std::vector<double> mean_curve;
  std::vector<double> std_curve;
  std::vector<double> end_regret;  // indexed by trajectory r
};

struct ExperimentResult {
  std::int64_t horizon = 0;
  std::int64_t repetitions = 0;
  std::uint64_t master_seed = 0;
  std::vector<PolicySummary> policies;

  const PolicySummary& policy(const std::string& label) const {
    for (const auto& p : policies)
      if (p.label == label) return p;
    throw std::out_of_range("no policy labelled " + label);
  }
};

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
/// failure.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Every policy runs on trajectory r with the same child seeds (master, r),
/// so end regrets are paired across policies. Aggregation runs in a fixed
/// order, making the result independent of the worker count.
inline ExperimentResult run_experiment(const ExperimentPlan& plan) {
  if (plan.horizon < 1) throw std::invalid_argument("experiment needs T >= 1");
  if (plan.repetitions < 1) throw std::invalid_argument("experiment needs R >= 1");
  if (plan.policies.empty()) throw std::invalid_argument("experiment needs at least one policy");
  const auto reps = static_cast<std::size_t>(plan.repetitions);
  const auto horizon = static_cast<std::size_t>(plan.horizon);
  const auto num_policies = plan.policies.size();

  std::vector<RottingProfile> profiles(reps);
  std::vector<std::vector<double>> oracle(reps);
  detail::parallel_for(reps, plan.threads, [&](std::size_t r) {
    profiles[r] = plan.profiles.instantiate(plan.master_seed, r);
    oracle[r] = oracle_step_values(profiles[r], plan.horizon);
  });

  std::vector<std::vector<double>> curves(num_policies * reps);
  detail::parallel_for(num_policies * reps, plan.threads, [&](std::size_t item) {
    const auto p = item / reps;
    const auto r = item % reps;
    auto policy = plan.policies[p].make(profiles[r]);
    curves[item] = run_trajectory(profiles[r], *policy, plan.horizon, plan.master_seed, r, oracle[r]).regret;
  });

  ExperimentResult out;
  out.horizon = plan.horizon;
  out.repetitions = plan.repetitions;
  out.master_seed = plan.master_seed;
  for (std::size_t p = 0; p < num_policies; ++p) {
    PolicySummary s;
    s.label = plan.policies[p].label;
    s.mean_curve.assign(horizon, 0.0);
    s.std_curve.assign(horizon, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& c = curves[p * reps + r];
      for (std::size_t t = 0; t < horizon; ++t) s.mean_curve[t] += c[t];
      s.end_regret.push_back(c.back());
    }
    for (auto& m : s.mean_curve) m /= static_cast<double>(reps);
    if (reps > 1) {
      for (std::size_t r = 0; r < reps; ++r) {
        const auto& c = curves[p * reps + r];
        for (std::size_t t = 0; t < horizon; ++t) s.std_curve[t] += (c[t] - s.mean_curve[t]) * (c[t] - s.mean_curve[t]);
      }
      for (auto& v : s.std_curve) v = std::sqrt(v / static_cast<double>(reps - 1));
    }
    out.policies.push_back(std::move(s));
  }
  return out;
}

struct GridRow {
  std::string label;
  double mean_end_regret = 0.0;
  double std_end_regret = 0.0;
};

struct GridResult {
  std::vector<GridRow> rows;  // in grid order
  std::size_t best = 0;       // lowest mean end regret, first in grid order on ties
  std::uint64_t seed_block = 0;
};

/// Master seed of the grid-search block, disjoint from the run seeds.
inline std::uint64_t grid_seed_block(std::uint64_t master_seed) {
  auto rng = child_rng(master_seed, 0, Stream::kGridBlock);
  return rng();
}

/// Runs every candidate on the same dedicated seed block and picks the one
/// with the lowest mean end regret.
inline GridResult grid_search(const ExperimentPlan& base, const std::vector<PolicyEntry>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("grid search needs a nonempty grid");
  GridResult out;
  out.seed_block = grid_seed_block(base.master_seed);
  for (const auto& c : candidates) {
    ExperimentPlan plan = base;
    plan.policies = {c};
    plan.master_seed = out.seed_block;
    const auto res = run_experiment(plan);
    const auto& ends = res.policies.front().end_regret;
    out.rows.push_back({c.label, sample_mean(ends), sample_stddev(ends)});
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].mean_end_regret < out.rows[out.best].mean_end_regret) out.best = i;
  return out;
}

/// Pairwise wins on end regret and two-sided paired t-test p-values.
/// wins[a][b] counts trajectories where a ended with strictly lower regret
/// than b; exact ties are counted in ties[a][b].
struct ComparisonReport {
  std::vector<std::string> policies;
  std::vector<std::vector<int>> wins;
  std::vector<std::vector<int>> ties;
  std::vector<std::vector<std::optional<double>>> p_values;  // absent when R < 2
  std::int64_t repetitions = 0;

  std::size_t index(const std::string& label) const {
    for (std::size_t i = 0; i < policies.size(); ++i)
      if (policies[i] == label) return i;
    throw std::out_of_range("no policy labelled " + label);
  }
  int wins_of(const std::string& a, const std::string& b) const { return wins[index(a)][index(b)]; }
  std::optional<double> p_value(const std::string& a, const std::string& b) const {
    return p_values[index(a)][index(b)];
  }
};

/// `samples` holds (label, end regrets by trajectory index); all lists must
/// have the same length and the same seed pairing.
inline ComparisonReport compare(const std::vector<std::pair<std::string, std::vector<double>>>& samples) {
  if (samples.empty()) throw std::invalid_argument("compare needs at least one policy");
  const auto reps = samples.front().second.size();
  for (const auto& [label, s] : samples)
    if (s.size() != reps) throw std::invalid_argument("policy " + label + " has a different number of trajectories");
  const auto n = samples.size();
  ComparisonReport rep;
  rep.repetitions = static_cast<std::int64_t>(reps);
  rep.wins.assign(n, std::vector<int>(n, 0));
  rep.ties.assign(n, std::vector<int>(n, 0));
  rep.p_values.assign(n, std::vector<std::optional<double>>(n));
  for (const auto& s : samples) rep.policies.push_back(s.first);
  std::vector<double> diffs(reps);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto& sa = samples[a].second;
      const auto& sb = samples[b].second;
      for (std::size_t r = 0; r < reps; ++r) {
        if (sa[r] < sb[r])
          ++rep.wins[a][b];
        else if (sa[r] == sb[r])
          ++rep.ties[a][b];
        diffs[r] = sa[r] - sb[r];
      }
      if (reps >= 2) rep.p_values[a][b] = paired_t_test(diffs).p;
    }
  }
  return rep;
}

inline ComparisonReport compare(const ExperimentResult& result) {
  std::vector<std::pair<std::string, std::vector<double>>> samples;
  for (const auto& p : result.policies) samples.emplace_back(p.label, p.end_regret);
  return compare(samples);
}

}  // namespace rotting

#endif  // ROTTING_HARNESS_HPP
