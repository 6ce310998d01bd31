#ifndef ROTTING_ENV_HPP
#define ROTTING_ENV_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rotting/model_family.hpp"

namespace rotting {

using Rng = std::mt19937_64;

/// A run of `count` consecutive pulls sharing one mean.
struct Segment {
  std::int64_t count = 0;
  double value = 0.0;
  bool operator==(const Segment&) const = default;
};

/// Non-parametric arm: piecewise-constant means followed by an infinite tail.
struct TabulatedArm {
  std::vector<Segment> segments;
  double tail = 0.0;

  double mean(std::int64_t n) const {
    for (const auto& s : segments) {
      if (n <= s.count) return s.value;
      n -= s.count;
    }
    return tail;
  }
  std::int64_t table_length() const {
    std::int64_t len = 0;
    for (const auto& s : segments) len += s.count;
    return len;
  }
};

/// Parametric arm: mu(n) = constant + family(n; theta).
struct ParametricArm {
  double constant = 0.0;
  double theta = 0.0;
  FamilyRef family;

  double mean(std::int64_t n) const { return constant + family->mean(n, theta); }
};

using ArmMeanSpec = std::variant<TabulatedArm, ParametricArm>;

inline double arm_mean(const ArmMeanSpec& spec, std::int64_t n) {
  return std::visit([n](const auto& a) { return a.mean(n); }, spec);
}

/// True reward structure of a rested rotting bandit. Arms are 0-based in
/// code; pull indices n are 1-based (n = 1 is the first pull).
struct RottingProfile {
  std::vector<ArmMeanSpec> arms;
  double noise_variance = 0.0;

  std::size_t num_arms() const noexcept { return arms.size(); }
};

/// Throws std::invalid_argument describing the first violated invariant.
inline void validate(const RottingProfile& profile) {
  if (profile.arms.empty()) throw std::invalid_argument("profile needs at least one arm");
  if (!(profile.noise_variance >= 0.0) || !std::isfinite(profile.noise_variance))
    throw std::invalid_argument("noise variance must be finite and >= 0");
  for (std::size_t i = 0; i < profile.arms.size(); ++i) {
    const std::string where = "arm " + std::to_string(i + 1) + ": ";
    if (const auto* tab = std::get_if<TabulatedArm>(&profile.arms[i])) {
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& s : tab->segments) {
        if (s.count < 1) throw std::invalid_argument(where + "segment counts must be >= 1");
        if (!(s.value > 0.0)) throw std::invalid_argument(where + "means must be positive");
        if (s.value > prev) throw std::invalid_argument(where + "means must be non-increasing");
        prev = s.value;
      }
      if (!(tab->tail > 0.0)) throw std::invalid_argument(where + "tail mean must be positive");
      if (tab->tail > prev) throw std::invalid_argument(where + "tail mean must not exceed the last tabulated mean");
    } else {
      const auto& par = std::get<ParametricArm>(profile.arms[i]);
      if (!par.family) throw std::invalid_argument(where + "parametric arm without a model family");
      if (!(par.constant >= 0.0) || !std::isfinite(par.constant))
        throw std::invalid_argument(where + "constant term must be finite and >= 0");
      par.family->index_of(par.theta);
    }
  }
}

inline void check_arm(const RottingProfile& profile, std::size_t arm) {
  if (arm >= profile.num_arms())
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range for " +
                            std::to_string(profile.num_arms()) + " arms");
}

inline double mean_reward(const RottingProfile& profile, std::size_t arm, std::int64_t n) {
  check_arm(profile, arm);
  if (n < 1) throw std::invalid_argument("pull index must be >= 1");
  return arm_mean(profile.arms[arm], n);
}

/// Rested environment state: only the pulled arm's count advances.
struct EnvState {
  std::vector<std::int64_t> pulls;
  std::int64_t time = 0;

  EnvState() = default;
  explicit EnvState(std::size_t num_arms) : pulls(num_arms, 0) {}

  void advance(std::size_t arm) {
    ++pulls.at(arm);
    ++time;
  }
  bool operator==(const EnvState&) const = default;
};

/// Mean of the next pull of `arm` plus N(0, sigma^2) noise drawn from rng.
inline double sample_reward(const RottingProfile& profile, const EnvState& state, std::size_t arm, Rng& rng) {
  check_arm(profile, arm);
  const double mu = arm_mean(profile.arms[arm], state.pulls[arm] + 1);
  if (profile.noise_variance == 0.0) return mu;
  std::normal_distribution<double> noise(0.0, std::sqrt(profile.noise_variance));
  return mu + noise(rng);
}

inline std::pair<double, EnvState> step(const RottingProfile& profile, const EnvState& state, std::size_t arm,
                                        Rng& rng) {
  const double reward = sample_reward(profile, state, arm, rng);
  EnvState next = state;
  next.advance(arm);
  return {reward, std::move(next)};
}

}  // namespace rotting

#endif  // ROTTING_ENV_HPP
