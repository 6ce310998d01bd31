#ifndef ROTTING_MODEL_FAMILY_HPP
#define ROTTING_MODEL_FAMILY_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rotting {

/// A finite set of decay models mu(n; theta), indexed by their position in
/// the parameter list. Pull indices are 1-based.
class ModelFamily {
 public:
  using Evaluator = std::function<double(std::int64_t n, double theta)>;

  ModelFamily(std::string name, std::vector<double> thetas, Evaluator eval)
      : name_(std::move(name)), thetas_(std::move(thetas)), eval_(std::move(eval)) {
    if (thetas_.empty()) throw std::invalid_argument("model family '" + name_ + "' has an empty parameter set");
    if (!eval_) throw std::invalid_argument("model family '" + name_ + "' has no evaluator");
  }

  const std::string& name() const noexcept { return name_; }
  std::span<const double> thetas() const noexcept { return thetas_; }
  std::size_t size() const noexcept { return thetas_.size(); }
  double theta(std::size_t k) const { return thetas_.at(k); }

  double mean(std::int64_t n, double theta) const {
    if (n < 1) throw std::invalid_argument("pull index must be >= 1");
    return eval_(n, theta);
  }
  double mean_at(std::int64_t n, std::size_t k) const { return mean(n, thetas_.at(k)); }

  /// Position of theta in the parameter list; throws if absent.
  std::size_t index_of(double theta) const {
    for (std::size_t k = 0; k < thetas_.size(); ++k)
      if (thetas_[k] == theta) return k;
    throw std::invalid_argument("theta " + std::to_string(theta) + " is not in family '" + name_ + "'");
  }

  /// Same evaluator over a different parameter set.
  ModelFamily with_thetas(std::vector<double> thetas) const { return ModelFamily(name_, std::move(thetas), eval_); }

 private:
  std::string name_;
  std::vector<double> thetas_;
  Evaluator eval_;
};

using FamilyRef = std::shared_ptr<const ModelFamily>;

/// mu(n; theta) = n^-theta
inline ModelFamily power_family(std::vector<double> thetas) {
  return ModelFamily("power", std::move(thetas),
                     [](std::int64_t n, double theta) { return std::pow(static_cast<double>(n), -theta); });
}

/// mu(j; theta) = (floor(j / 100) + 1)^-theta
inline ModelFamily plateau_family(std::vector<double> thetas) {
  return ModelFamily("plateau", std::move(thetas), [](std::int64_t j, double theta) {
    return std::pow(static_cast<double>(j / 100 + 1), -theta);
  });
}

/// mu(n; theta) = 1. Violates the vanishing requirement; useful as a negative control.
inline ModelFamily constant_family(std::vector<double> thetas) {
  return ModelFamily("constant", std::move(thetas), [](std::int64_t, double) { return 1.0; });
}

inline const std::vector<std::string>& known_family_names() {
  static const std::vector<std::string> names{"power", "plateau", "constant"};
  return names;
}

inline ModelFamily make_family(std::string_view name, std::vector<double> thetas) {
  if (name == "power") return power_family(std::move(thetas));
  if (name == "plateau") return plateau_family(std::move(thetas));
  if (name == "constant") return constant_family(std::move(thetas));
  throw std::invalid_argument("unknown model family '" + std::string(name) + "'");
}

/// Theta grid {lo, lo+step, ..., hi}, computed as lo + k*step and rounded to
/// 12 decimals so that e.g. 0.1,0.15,...,0.4 yields the literal values.
inline std::vector<double> theta_range(double lo, double hi, double step) {
  if (!(step > 0) || hi < lo) throw std::invalid_argument("invalid theta range");
  std::vector<double> out;
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::int64_t k = 0; k <= count; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

/// Prefix sums S(n) = sum_{j<=n} mu(j; theta) with O(1) amortised sequential
/// access in both a leading and a trailing cursor, and checkpoints every
/// kBlock terms so that any value is recomputed bit-identically.
/// Running sum kept as an unevaluated pair hi + lo (Neumaier), so sums of
/// up to billions of terms stay exact to far below one ulp of hi.
struct CompensatedSum {
  long double hi = 0.0L;
  long double lo = 0.0L;

  void add(long double x) {
    const long double s = hi + x;
    lo += std::fabs(hi) >= std::fabs(x) ? (hi - s) + x : (x - s) + hi;
    hi = s;
  }
  long double value() const { return hi + lo; }
};

/// Accurate sum of a few signed terms, e.g. differences of large prefix sums.
inline long double accurate_sum(std::initializer_list<long double> terms) {
  CompensatedSum s;
  for (long double t : terms) s.add(t);
  return s.value();
}

class PrefixSums {
 public:
  static constexpr std::int64_t kBlock = 4096;

  PrefixSums(ModelFamily family, double theta) : family_(std::move(family)), theta_(theta) {
    checkpoints_.emplace_back();
  }

  double theta() const noexcept { return theta_; }
  double term(std::int64_t j) const { return family_.mean(j, theta_); }

  /// sum_{j<=n} mu(j; theta).
  long double at(std::int64_t n) { return parts(n).value(); }

  /// The same sum as a compensated pair, for cancellation-prone differences.
  CompensatedSum parts(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("prefix index must be >= 0");
    if (n >= lead_.pos) {
      advance_lead(n);
      return lead_.sum;
    }
    // Reuse a trailing cursor within one block below n, else restart the
    // least recently used one from the nearest checkpoint.
    Cursor* best = nullptr;
    for (auto& c : trail_)
      if (c.pos <= n && n - c.pos < kBlock && (!best || c.pos > best->pos)) best = &c;
    if (!best) {
      best = &trail_[0];
      for (auto& c : trail_)
        if (c.used < best->used) best = &c;
      const std::int64_t block = n / kBlock;
      best->pos = block * kBlock;
      best->sum = checkpoints_[static_cast<std::size_t>(block)];
    }
    best->used = ++clock_;
    while (best->pos < n) {
      ++best->pos;
      best->sum.add(term(best->pos));
    }
    return best->sum;
  }

 private:
  struct Cursor {
    std::int64_t pos = 0;
    CompensatedSum sum;
    std::uint64_t used = 0;
  };

  void advance_lead(std::int64_t n) {
    while (lead_.pos < n) {
      ++lead_.pos;
      lead_.sum.add(term(lead_.pos));
      if (lead_.pos % kBlock == 0) checkpoints_.push_back(lead_.sum);
    }
  }

  ModelFamily family_;
  double theta_;
  Cursor lead_;
  std::array<Cursor, 4> trail_{};
  std::uint64_t clock_ = 0;
  std::vector<CompensatedSum> checkpoints_;
};

/// Dense per-theta table of means and prefix sums, grown on demand. Used by
/// policies, which walk pull counts upward one step at a time.
class MeanTable {
 public:
  explicit MeanTable(FamilyRef family) : family_(std::move(family)), means_(family_->size()), sums_(family_->size()) {
    for (auto& s : sums_) s.push_back(0.0);
    for (auto& m : means_) m.push_back(0.0);
  }

  const ModelFamily& family() const noexcept { return *family_; }
  const FamilyRef& family_ref() const noexcept { return family_; }
  std::size_t size() const noexcept { return family_->size(); }

  double mean(std::int64_t n, std::size_t k) {
    ensure(n, k);
    return means_[k][static_cast<std::size_t>(n)];
  }
  double prefix(std::int64_t n, std::size_t k) {
    ensure(n, k);
    return sums_[k][static_cast<std::size_t>(n)];
  }

 private:
  void ensure(std::int64_t n, std::size_t k) {
    auto& m = means_[k];
    auto& s = sums_[k];
    while (static_cast<std::int64_t>(m.size()) <= n) {
      const auto j = static_cast<std::int64_t>(m.size());
      const double v = family_->mean_at(j, k);
      m.push_back(v);
      s.push_back(s.back() + v);
    }
  }

  FamilyRef family_;
  std::vector<std::vector<double>> means_;
  std::vector<std::vector<double>> sums_;
};

}  // namespace rotting

#endif  // ROTTING_MODEL_FAMILY_HPP
