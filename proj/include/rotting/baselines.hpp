#ifndef ROTTING_BASELINES_HPP
#define ROTTING_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotting/policy.hpp"

// Standard non-stationary benchmarks. Each starts with one round-robin pass;
// afterwards ties go to the lowest arm index. In the indices below `n` is the
// number of plays made so far (t - 1 at decision time t).

namespace rotting {

/// mean_i + sqrt(2 sigma^2 ln n / N_i)
class Ucb1Policy final : public Policy {
 public:
  Ucb1Policy(std::size_t num_arms, double sigma2)
      : sigma2_(sigma2), pulls_(num_arms, 0), sums_(num_arms, 0.0), index_(num_arms) {
    detail::require_arms(num_arms);
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("UCB1: sigma^2 must be >= 0");
  }

  std::size_t choose(std::int64_t t, Rng&) override {
    const auto k = pulls_.size();
    if (t <= static_cast<std::int64_t>(k)) return static_cast<std::size_t>(t - 1);
    const double log_n = std::log(static_cast<double>(plays_));
    for (std::size_t i = 0; i < k; ++i) {
      const double n_i = static_cast<double>(pulls_[i]);
      index_[i] = sums_[i] / n_i + std::sqrt(2.0 * sigma2_ * log_n / n_i);
    }
    return detail::argmax_first(index_);
  }
  void update(std::size_t arm, double reward) override {
    ++pulls_.at(arm);
    sums_[arm] += reward;
    ++plays_;
  }
  void reset() override {
    std::fill(pulls_.begin(), pulls_.end(), 0);
    std::fill(sums_.begin(), sums_.end(), 0.0);
    plays_ = 0;
  }
  std::size_t num_arms() const override { return pulls_.size(); }
  std::string name() const override { return "ucb1"; }

  double empirical_mean(std::size_t arm) const { return sums_.at(arm) / static_cast<double>(pulls_.at(arm)); }

 private:
  double sigma2_;
  std::int64_t plays_ = 0;
  std::vector<std::int64_t> pulls_;
  std::vector<double> sums_;
  std::vector<double> index_;
};

/// Discounted UCB: discounted mean + 2 B sqrt(xi ln n_gamma / N_gamma_i),
/// weights gamma^{t-s}, n_gamma = sum of discounted counts.
class DiscountedUcbPolicy final : public Policy {
 public:
  DiscountedUcbPolicy(std::size_t num_arms, double gamma, double xi = 0.5, double bound = 1.0)
      : gamma_(gamma), xi_(xi), bound_(bound), counts_(num_arms, 0.0), sums_(num_arms, 0.0), index_(num_arms) {
    detail::require_arms(num_arms);
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("DUCB: gamma must lie in (0, 1]");
    if (!(xi > 0.0)) throw std::invalid_argument("DUCB: xi must be > 0");
    if (!(bound > 0.0)) throw std::invalid_argument("DUCB: B must be > 0");
  }

  std::size_t choose(std::int64_t t, Rng&) override {
    const auto k = counts_.size();
    if (t <= static_cast<std::int64_t>(k)) return static_cast<std::size_t>(t - 1);
    double total = 0.0;
    for (double c : counts_) total += c;
    const double log_n = std::log(std::max(total, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
      if (counts_[i] <= 0.0) {
        index_[i] = std::numeric_limits<double>::infinity();
        continue;
      }
      index_[i] = sums_[i] / counts_[i] + 2.0 * bound_ * std::sqrt(xi_ * log_n / counts_[i]);
    }
    return detail::argmax_first(index_);
  }
  void update(std::size_t arm, double reward) override {
    if (arm >= counts_.size()) throw std::out_of_range("DUCB: arm out of range");
    if (gamma_ != 1.0) {
      for (auto& c : counts_) c *= gamma_;
      for (auto& s : sums_) s *= gamma_;
    }
    counts_[arm] += 1.0;
    sums_[arm] += reward;
  }
  void reset() override {
    std::fill(counts_.begin(), counts_.end(), 0.0);
    std::fill(sums_.begin(), sums_.end(), 0.0);
  }
  std::size_t num_arms() const override { return counts_.size(); }
  std::string name() const override { return "ducb"; }

 private:
  double gamma_;
  double xi_;
  double bound_;
  std::vector<double> counts_;
  std::vector<double> sums_;
  std::vector<double> index_;
};

/// Sliding-window UCB over the last tau plays:
/// window mean + B sqrt(xi ln min(n, tau) / N_tau_i).
class SlidingWindowUcbPolicy final : public Policy {
 public:
  SlidingWindowUcbPolicy(std::size_t num_arms, std::int64_t tau, double xi = 0.5, double bound = 1.0)
      : tau_(tau), xi_(xi), bound_(bound), counts_(num_arms, 0), sums_(num_arms, 0.0), index_(num_arms) {
    detail::require_arms(num_arms);
    if (tau < 1) throw std::invalid_argument("SWUCB: tau must be >= 1");
    if (!(xi > 0.0)) throw std::invalid_argument("SWUCB: xi must be > 0");
    if (!(bound > 0.0)) throw std::invalid_argument("SWUCB: B must be > 0");
  }

  std::size_t choose(std::int64_t t, Rng&) override {
    const auto k = counts_.size();
    if (t <= static_cast<std::int64_t>(k)) return static_cast<std::size_t>(t - 1);
    const double log_n = std::log(static_cast<double>(std::min(plays_, tau_)));
    for (std::size_t i = 0; i < k; ++i) {
      if (counts_[i] == 0) {
        index_[i] = std::numeric_limits<double>::infinity();
        continue;
      }
      const double n_i = static_cast<double>(counts_[i]);
      index_[i] = sums_[i] / n_i + bound_ * std::sqrt(xi_ * log_n / n_i);
    }
    return detail::argmax_first(index_);
  }
  void update(std::size_t arm, double reward) override {
    if (arm >= counts_.size()) throw std::out_of_range("SWUCB: arm out of range");
    history_.emplace_back(arm, reward);
    ++counts_[arm];
    sums_[arm] += reward;
    ++plays_;
    if (static_cast<std::int64_t>(history_.size()) > tau_) {
      const auto [old_arm, old_reward] = history_.front();
      history_.pop_front();
      --counts_[old_arm];
      sums_[old_arm] -= old_reward;
    }
    if (plays_ % tau_ == 0) resum();
  }
  void reset() override {
    history_.clear();
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(sums_.begin(), sums_.end(), 0.0);
    plays_ = 0;
  }
  std::size_t num_arms() const override { return counts_.size(); }
  std::string name() const override { return "swucb"; }

  std::int64_t window_count(std::size_t arm) const { return counts_.at(arm); }
  double window_mean(std::size_t arm) const { return sums_.at(arm) / static_cast<double>(counts_.at(arm)); }

 private:
  // Exact resummation in history order bounds the drift of add/subtract.
  void resum() {
    std::fill(sums_.begin(), sums_.end(), 0.0);
    for (const auto& [arm, r] : history_) sums_[arm] += r;
  }

  std::int64_t tau_;
  double xi_;
  double bound_;
  std::int64_t plays_ = 0;
  std::deque<std::pair<std::size_t, double>> history_;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  std::vector<double> index_;
};

}  // namespace rotting

#endif  // ROTTING_BASELINES_HPP
