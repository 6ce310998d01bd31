#ifndef ROTTING_CTO_HPP
#define ROTTING_CTO_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotting/model_family.hpp"
#include "rotting/policy.hpp"

namespace rotting {

/// Per-arm reward prefix sums plus the model means needed to evaluate the
/// closest-to-origin statistics against every theta in the family.
class CtoState {
 public:
  CtoState(FamilyRef family, std::size_t num_arms) : table_(std::move(family)), rewards_(num_arms) {
    detail::require_arms(num_arms);
    for (auto& r : rewards_) r.push_back(0.0);
  }

  std::size_t num_arms() const noexcept { return rewards_.size(); }
  const ModelFamily& family() const noexcept { return table_.family(); }
  MeanTable& table() noexcept { return table_; }

  std::int64_t pulls(std::size_t arm) const { return static_cast<std::int64_t>(rewards_.at(arm).size()) - 1; }
  double reward_sum(std::size_t arm) const { return rewards_.at(arm).back(); }
  /// Sum of the first n rewards of `arm`.
  double reward_prefix(std::size_t arm, std::int64_t n) const { return rewards_.at(arm).at(static_cast<std::size_t>(n)); }

  void record(std::size_t arm, double reward) {
    auto& r = rewards_.at(arm);
    r.push_back(r.back() + reward);
  }
  void clear() {
    for (auto& r : rewards_) r.assign(1, 0.0);
  }

  /// Y = sum of observed rewards - sum_{j<=N} mu(j; theta_k).
  double y_statistic(std::size_t arm, std::size_t k) {
    const auto n = pulls(arm);
    if (n < 1) throw std::logic_error("Y statistic undefined: arm " + std::to_string(arm) + " never pulled");
    return reward_sum(arm) - table_.prefix(n, k);
  }

  /// Z = (first-half minus second-half reward sums) - (same for the model),
  /// halves split at floor(N/2).
  double z_statistic(std::size_t arm, std::size_t k) {
    const auto n = pulls(arm);
    if (n < 2) throw std::logic_error("Z statistic undefined for fewer than 2 pulls");
    const auto h = n / 2;
    const double rh = reward_prefix(arm, h);
    const double observed = rh - (reward_sum(arm) - rh);
    const double mh = table_.prefix(h, k);
    const double model = mh - (table_.prefix(n, k) - mh);
    return observed - model;
  }

  /// argmin_k |Y(arm; theta_k)|, ties to the smallest index.
  std::size_t detect_cto(std::size_t arm) {
    std::size_t best = 0;
    double best_abs = std::abs(y_statistic(arm, 0));
    for (std::size_t k = 1; k < table_.size(); ++k) {
      const double a = std::abs(y_statistic(arm, k));
      if (a < best_abs) {
        best_abs = a;
        best = k;
      }
    }
    return best;
  }

  /// argmin_k |Z(arm; theta_k)|, ties to the smallest index. With
  /// `require_even` the pull count must be even (constant terms cancel).
  std::size_t detect_dcto(std::size_t arm, bool require_even = true) {
    const auto n = pulls(arm);
    if (n < 2 || (require_even && n % 2 != 0))
      throw std::logic_error("D-CTO detection needs an even number of pulls >= 2, got " + std::to_string(n));
    std::size_t best = 0;
    double best_abs = std::abs(z_statistic(arm, 0));
    for (std::size_t k = 1; k < table_.size(); ++k) {
      const double a = std::abs(z_statistic(arm, k));
      if (a < best_abs) {
        best_abs = a;
        best = k;
      }
    }
    return best;
  }

  /// Estimated constant term: mean of (r_j - mu(j; theta_k)).
  double constant_estimate(std::size_t arm, std::size_t k) {
    const auto n = pulls(arm);
    if (n < 1) throw std::logic_error("constant estimate undefined: arm never pulled");
    return (reward_sum(arm) - table_.prefix(n, k)) / static_cast<double>(n);
  }

 private:
  MeanTable table_;
  std::vector<std::vector<double>> rewards_;
};

/// CTO_SIM: after one round-robin pass, re-detect every arm's model each step
/// and pull argmax mu(N_i + 1; theta_hat_i). Ties go to the least-pulled arm,
/// then uniformly at random.
class CtoSimPolicy final : public Policy {
 public:
  CtoSimPolicy(FamilyRef family, std::size_t num_arms)
      : state_(std::move(family), num_arms), detected_(num_arms, 0), values_(num_arms) {}

  const CtoState& state() const noexcept { return state_; }
  std::size_t detected(std::size_t arm) const { return detected_.at(arm); }

  std::size_t choose(std::int64_t t, Rng& rng) override {
    if (t < 1) throw std::invalid_argument("decision time must be >= 1");
    const auto k = state_.num_arms();
    if (t <= static_cast<std::int64_t>(k)) return static_cast<std::size_t>(t - 1);
    for (std::size_t i = 0; i < k; ++i)
      if (state_.pulls(i) == 0) return i;

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      detected_[i] = state_.detect_cto(i);
      values_[i] = state_.table().mean(state_.pulls(i) + 1, detected_[i]);
      best = std::max(best, values_[i]);
    }
    std::int64_t fewest = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < k; ++i)
      if (values_[i] == best) fewest = std::min(fewest, state_.pulls(i));
    tied_.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (values_[i] == best && state_.pulls(i) == fewest) tied_.push_back(i);
    if (tied_.size() == 1) return tied_.front();
    return tied_[std::uniform_int_distribution<std::size_t>(0, tied_.size() - 1)(rng)];
  }

  void update(std::size_t arm, double reward) override { state_.record(arm, reward); }
  void reset() override {
    state_.clear();
    std::fill(detected_.begin(), detected_.end(), 0);
  }
  std::size_t num_arms() const override { return state_.num_arms(); }
  std::string name() const override { return "cto_sim"; }

 private:
  CtoState state_;
  std::vector<std::size_t> detected_;
  std::vector<double> values_;
  std::vector<std::size_t> tied_;
};

/// Confidence width c_{t,s} = sqrt(8 ln(t) sigma^2 / s).
inline double dcto_confidence(std::int64_t t, std::int64_t s, double sigma2) {
  if (s < 1) return std::numeric_limits<double>::infinity();
  return std::sqrt(8.0 * std::log(static_cast<double>(t)) * sigma2 / static_cast<double>(s));
}

/// D-CTO with a UCB step on the estimated constants. In the one-shot variant
/// every arm is explored `budget` times round-robin, models are detected once
/// and frozen. In the simultaneous variant exploration is 2 pulls per arm and
/// models are re-detected (with floor(N/2) halves) at every step.
class DctoUcbPolicy final : public Policy {
 public:
  enum class Mode { kOneShot, kSimultaneous };

  DctoUcbPolicy(FamilyRef family, std::size_t num_arms, double sigma2, std::int64_t budget, Mode mode)
      : state_(std::move(family), num_arms), sigma2_(sigma2), mode_(mode), budget_(budget),
        detected_(num_arms, 0), index_(num_arms) {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma^2 must be >= 0");
    if (mode == Mode::kSimultaneous) budget_ = 2;
    if (budget_ < 2 || budget_ % 2 != 0) throw std::invalid_argument("exploration budget must be even and >= 2");
  }

  static DctoUcbPolicy one_shot(FamilyRef family, std::size_t num_arms, double sigma2, std::int64_t budget) {
    return DctoUcbPolicy(std::move(family), num_arms, sigma2, budget, Mode::kOneShot);
  }
  static DctoUcbPolicy simultaneous(FamilyRef family, std::size_t num_arms, double sigma2) {
    return DctoUcbPolicy(std::move(family), num_arms, sigma2, 2, Mode::kSimultaneous);
  }

  std::int64_t budget() const noexcept { return budget_; }
  std::int64_t exploration_length() const noexcept {
    return budget_ * static_cast<std::int64_t>(state_.num_arms());
  }
  bool frozen() const noexcept { return frozen_; }
  std::size_t detected(std::size_t arm) const { return detected_.at(arm); }
  const CtoState& state() const noexcept { return state_; }

  std::size_t choose(std::int64_t t, Rng&) override {
    if (t < 1) throw std::invalid_argument("decision time must be >= 1");
    const auto k = state_.num_arms();
    if (t <= exploration_length()) return static_cast<std::size_t>((t - 1) % static_cast<std::int64_t>(k));

    if (mode_ == Mode::kOneShot) {
      if (!frozen_) {
        for (std::size_t i = 0; i < k; ++i) detected_[i] = state_.detect_dcto(i, true);
        frozen_ = true;
      }
    } else {
      for (std::size_t i = 0; i < k; ++i) detected_[i] = state_.detect_dcto(i, false);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto n = state_.pulls(i);
      index_[i] = state_.constant_estimate(i, detected_[i]) + state_.table().mean(n + 1, detected_[i]) +
                  dcto_confidence(t, n, sigma2_);
    }
    return detail::argmax_first(index_);
  }

  void update(std::size_t arm, double reward) override { state_.record(arm, reward); }
  void reset() override {
    state_.clear();
    frozen_ = false;
    std::fill(detected_.begin(), detected_.end(), 0);
  }
  std::size_t num_arms() const override { return state_.num_arms(); }
  std::string name() const override { return mode_ == Mode::kOneShot ? "dcto_ucb" : "dcto_sim_ucb"; }

 private:
  CtoState state_;
  double sigma2_;
  Mode mode_;
  std::int64_t budget_;
  bool frozen_ = false;
  std::vector<std::size_t> detected_;
  std::vector<double> index_;
};

}  // namespace rotting

#endif  // ROTTING_CTO_HPP
