#ifndef ROTTING_POLICY_HPP
#define ROTTING_POLICY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotting/env.hpp"

namespace rotting {

/// Uniform choose/update contract shared by every policy. `t` is the 1-based
/// decision time; arms are 0-based. A policy only ever sees the rewards of
/// the arms it pulled.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::size_t choose(std::int64_t t, Rng& rng) = 0;
  virtual void update(std::size_t arm, double reward) = 0;
  virtual void reset() = 0;

  virtual std::size_t num_arms() const = 0;
  virtual std::string name() const = 0;
};

using PolicyPtr = std::unique_ptr<Policy>;

namespace detail {

inline void require_arms(std::size_t k) {
  if (k < 1) throw std::invalid_argument("policy needs at least one arm");
}

/// Index of the maximum; ties broken uniformly at random.
inline std::size_t argmax_random(std::span<const double> values, Rng& rng) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t ties = 0;
  for (double v : values) {
    if (v > best) {
      best = v;
      ties = 1;
    } else if (v == best) {
      ++ties;
    }
  }
  std::size_t pick = 0;
  if (ties > 1) pick = std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best) {
      if (pick == 0) return i;
      --pick;
    }
  }
  return 0;
}

/// Index of the maximum; ties broken by the lowest index.
inline std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

}  // namespace detail

/// Greedy policy on the true means; optimal for rotting bandits. Only used as
/// a reference, never as a learner.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(RottingProfile profile) : profile_(std::move(profile)), pulls_(profile_.num_arms(), 0) {
    detail::require_arms(profile_.num_arms());
    next_.resize(profile_.num_arms());
  }

  std::size_t choose(std::int64_t, Rng& rng) override {
    for (std::size_t i = 0; i < next_.size(); ++i) next_[i] = arm_mean(profile_.arms[i], pulls_[i] + 1);
    return detail::argmax_random(next_, rng);
  }
  void update(std::size_t arm, double) override { ++pulls_.at(arm); }
  void reset() override { std::fill(pulls_.begin(), pulls_.end(), 0); }
  std::size_t num_arms() const override { return profile_.num_arms(); }
  std::string name() const override { return "oracle"; }

 private:
  RottingProfile profile_;
  std::vector<std::int64_t> pulls_;
  std::vector<double> next_;
};

}  // namespace rotting

#endif  // ROTTING_POLICY_HPP
