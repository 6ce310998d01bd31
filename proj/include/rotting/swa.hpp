#ifndef ROTTING_SWA_HPP
#define ROTTING_SWA_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotting/policy.hpp"

namespace rotting {

/// Averaging window M = ceil(alpha 4^{2/3} sigma^{2/3} K^{-2/3} T^{2/3} ln^{1/3}(sqrt(2) T)),
/// clamped to at least 1 (the expression vanishes when sigma^2 = 0).
inline std::int64_t swa_window(std::int64_t num_arms, std::int64_t horizon, double alpha, double sigma2) {
  if (num_arms < 1) throw std::invalid_argument("swa_window: K must be >= 1");
  if (horizon < 1) throw std::invalid_argument("swa_window: T must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("swa_window: alpha must be > 0");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("swa_window: sigma^2 must be >= 0");
  const double k = static_cast<double>(num_arms);
  const double t = static_cast<double>(horizon);
  const double raw = alpha * std::cbrt(16.0) * std::cbrt(sigma2) * std::cbrt(1.0 / (k * k)) * std::cbrt(t * t) *
                     std::cbrt(std::log(std::sqrt(2.0) * t));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

/// Fixed-length window of the most recent rewards of one arm.
class RewardWindow {
 public:
  explicit RewardWindow(std::int64_t capacity) : buf_(static_cast<std::size_t>(capacity)) {}

  void push(double r) {
    if (size_ < buf_.size()) {
      buf_[(head_ + size_) % buf_.size()] = r;
      ++size_;
      sum_ += r;
    } else {
      sum_ += r - buf_[head_];
      buf_[head_] = r;
      head_ = (head_ + 1) % buf_.size();
    }
    // Periodic exact resummation bounds the drift of the running sum.
    if (++pushes_ % buf_.size() == 0) {
      sum_ = 0.0;
      for (std::size_t i = 0; i < size_; ++i) sum_ += buf_[(head_ + i) % buf_.size()];
    }
  }
  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return buf_.size(); }
  double sum() const noexcept { return sum_; }
  double mean() const noexcept { return size_ == 0 ? 0.0 : sum_ / static_cast<double>(size_); }
  void clear() {
    head_ = size_ = 0;
    pushes_ = 0;
    sum_ = 0.0;
  }

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::size_t pushes_ = 0;
  double sum_ = 0.0;
};

/// Sliding-window average: K*M round-robin ramp-up pulls, then the arm whose
/// last M rewards have the highest average (random tie-breaking).
class SwaPolicy final : public Policy {
 public:
  SwaPolicy(std::size_t num_arms, std::int64_t window) : num_arms_(num_arms), window_(window) {
    detail::require_arms(num_arms);
    if (window < 1) throw std::invalid_argument("SWA window must be >= 1");
    windows_.assign(num_arms, RewardWindow(window));
    pulls_.assign(num_arms, 0);
    means_.resize(num_arms);
  }

  static SwaPolicy with_horizon(std::size_t num_arms, std::int64_t horizon, double alpha, double sigma2) {
    return SwaPolicy(num_arms, swa_window(static_cast<std::int64_t>(num_arms), horizon, alpha, sigma2));
  }

  std::int64_t window() const noexcept { return window_; }
  std::int64_t ramp_up_length() const noexcept { return static_cast<std::int64_t>(num_arms_) * window_; }
  std::int64_t pulls(std::size_t arm) const { return pulls_.at(arm); }
  double window_mean(std::size_t arm) const { return windows_.at(arm).mean(); }

  std::size_t choose(std::int64_t t, Rng& rng) override {
    if (t < 1) throw std::invalid_argument("decision time must be >= 1");
    if (t <= ramp_up_length()) return static_cast<std::size_t>((t - 1) % static_cast<std::int64_t>(num_arms_));
    for (std::size_t i = 0; i < num_arms_; ++i) means_[i] = windows_[i].mean();
    return detail::argmax_random(means_, rng);
  }

  void update(std::size_t arm, double reward) override {
    windows_.at(arm).push(reward);
    ++pulls_[arm];
  }

  void reset() override {
    for (auto& w : windows_) w.clear();
    std::fill(pulls_.begin(), pulls_.end(), 0);
  }

  std::size_t num_arms() const override { return num_arms_; }
  std::string name() const override { return "swa"; }

 private:
  std::size_t num_arms_;
  std::int64_t window_;
  std::vector<RewardWindow> windows_;
  std::vector<std::int64_t> pulls_;
  std::vector<double> means_;
};

/// Horizon-free SWA via the doubling trick: epoch n covers
/// t in [2^{n-1}, 2^n - 1] and runs a fresh SWA tuned for horizon 2^{n-1}.
class WrappedSwaPolicy final : public Policy {
 public:
  WrappedSwaPolicy(std::size_t num_arms, double alpha, double sigma2)
      : num_arms_(num_arms), alpha_(alpha), sigma2_(sigma2) {
    detail::require_arms(num_arms);
    swa_window(1, 1, alpha, sigma2);  // parameter validation
  }

  /// Epoch containing decision time t (1-based): floor(log2 t) + 1.
  static int epoch_of(std::int64_t t) {
    if (t < 1) throw std::invalid_argument("decision time must be >= 1");
    int n = 0;
    while ((std::int64_t{1} << n) <= t) ++n;
    return n;
  }
  static std::int64_t epoch_start(int epoch) { return std::int64_t{1} << (epoch - 1); }

  int epoch() const noexcept { return epoch_; }
  const SwaPolicy* inner() const noexcept { return inner_.get(); }

  std::size_t choose(std::int64_t t, Rng& rng) override {
    const int n = epoch_of(t);
    if (n != epoch_ || !inner_) {
      epoch_ = n;
      inner_ = std::make_unique<SwaPolicy>(SwaPolicy::with_horizon(num_arms_, epoch_start(n), alpha_, sigma2_));
    }
    return inner_->choose(t - epoch_start(n) + 1, rng);
  }

  void update(std::size_t arm, double reward) override {
    if (!inner_) throw std::logic_error("wSWA update before choose");
    inner_->update(arm, reward);
  }

  void reset() override {
    inner_.reset();
    epoch_ = 0;
  }

  std::size_t num_arms() const override { return num_arms_; }
  std::string name() const override { return "wswa"; }

 private:
  std::size_t num_arms_;
  double alpha_;
  double sigma2_;
  int epoch_ = 0;
  std::unique_ptr<SwaPolicy> inner_;
};

}  // namespace rotting

#endif  // ROTTING_SWA_HPP
