#ifndef ROTTING_THEORY_HPP
#define ROTTING_THEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotting/model_family.hpp"

namespace rotting {

/// A count that may be infinite; std::nullopt stands for "not found within
/// the scan cap", i.e. infinity in the sense of the crossing definitions.
using MaybeCount = std::optional<std::int64_t>;

struct ScanOptions {
  std::int64_t n_cap = 10'000'000;     // largest n inspected by crossing scans
  std::int64_t confirm_window = 1000;  // dense samples that must stay below the threshold
  std::int64_t t_cap = 1'000'000'000;  // largest horizon tried by the T search
};

/// Hoeffding tail bound P(sum X_i >= t) <= exp(-t^2 / (2 n sigma^2)) for n
/// independent sigma^2-sub-Gaussian variables.
inline double hoeffding_tail_bound(double t, std::int64_t n, double sigma2) {
  if (n < 1 || !(sigma2 > 0.0)) throw std::invalid_argument("hoeffding bound needs n >= 1 and sigma^2 > 0");
  if (t < 0.0) return 1.0;
  return std::exp(-t * t / (2.0 * static_cast<double>(n) * sigma2));
}

/// Pairwise detectability ratios over a family, backed by cached prefix sums.
/// Both functions return +infinity when the two models are indistinguishable
/// at n (zero denominator).
class DetectabilityCalculator {
 public:
  DetectabilityCalculator(const ModelFamily& family, double sigma2) : sigma2_(sigma2) {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma^2 must be >= 0");
    sums_.reserve(family.size());
    for (double theta : family.thetas()) sums_.emplace_back(family, theta);
  }

  std::size_t size() const noexcept { return sums_.size(); }
  double sigma2() const noexcept { return sigma2_; }

  /// sum_{j<=n} [mu(j; theta_a) - mu(j; theta_b)]
  double sum_difference(std::size_t a, std::size_t b, std::int64_t n) {
    const auto x = sums_.at(a).parts(n);
    const auto y = sums_.at(b).parts(n);
    return static_cast<double>(accurate_sum({x.hi, -y.hi, x.lo, -y.lo}));
  }

  /// sum_{j<=floor(n/2)} [mu_a - mu_b] - sum_{floor(n/2)<j<=n} [mu_a - mu_b]
  double half_difference(std::size_t a, std::size_t b, std::int64_t n) {
    const auto h = n / 2;
    // 2 [S_a(h) - S_b(h)] - [S_a(n) - S_b(n)], summed without cancellation.
    const auto ah = sums_.at(a).parts(h);
    const auto bh = sums_.at(b).parts(h);
    const auto an = sums_.at(a).parts(n);
    const auto bn = sums_.at(b).parts(n);
    return static_cast<double>(accurate_sum(
        {2.0L * ah.hi, -2.0L * bh.hi, -an.hi, bn.hi, 2.0L * ah.lo, -2.0L * bh.lo, -an.lo, bn.lo}));
  }

  double det(std::size_t a, std::size_t b, std::int64_t n) {
    check_n(n);
    return ratio(n, sum_difference(a, b, n));
  }
  double ddet(std::size_t a, std::size_t b, std::int64_t n) {
    check_n(n);
    return ratio(n, half_difference(a, b, n));
  }

 private:
  static void check_n(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("detectability needs n >= 1");
  }
  double ratio(std::int64_t n, double denom) const {
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(n) * sigma2_ / (denom * denom);
  }

  double sigma2_;
  std::vector<PrefixSums> sums_;
};

inline double det(const ModelFamily& family, double theta1, double theta2, std::int64_t n, double sigma2) {
  DetectabilityCalculator calc(family.with_thetas({theta1, theta2}), sigma2);
  return calc.det(0, 1, n);
}

inline double ddet(const ModelFamily& family, double theta1, double theta2, std::int64_t n, double sigma2) {
  DetectabilityCalculator calc(family.with_thetas({theta1, theta2}), sigma2);
  return calc.ddet(0, 1, n);
}

/// Smallest N such that f(n) <= zeta for all n >= N. The tail condition is
/// checked numerically: a dense scan finds a run of `confirm_window`
/// consecutive samples below zeta, then the points N*2^k up to `cap` (and cap
/// itself) are checked. A violation restarts the dense scan after it.
inline MaybeCount f_star_down(const std::function<double(std::int64_t)>& f, double zeta, std::int64_t cap,
                              std::int64_t confirm_window) {
  if (cap < 1) throw std::invalid_argument("f_star_down: cap must be >= 1");
  confirm_window = std::max<std::int64_t>(confirm_window, 1);
  std::int64_t n = 1;
  while (n <= cap) {
    if (!(f(n) <= zeta)) {
      ++n;
      continue;
    }
    const std::int64_t candidate = n;
    std::int64_t m = n + 1;
    while (m <= cap && m - candidate < confirm_window && f(m) <= zeta) ++m;
    if (m <= cap && m - candidate < confirm_window) {
      n = m + 1;  // dense violation at m
      continue;
    }
    std::optional<std::int64_t> violation;
    for (std::int64_t g = candidate; g <= cap / 2;) {
      g *= 2;
      if (g > m && !(f(g) <= zeta)) {
        violation = g;
        break;
      }
    }
    if (!violation && cap > m && !(f(cap) <= zeta)) violation = cap;
    if (!violation) return candidate;
    n = *violation + 1;
  }
  return std::nullopt;
}

/// Smallest integer alpha >= 1 with max_theta mu(alpha; theta) <= min_theta mu(n; theta),
/// found by exponential then binary search. bal(infinity) = infinity.
inline MaybeCount bal(const ModelFamily& family, MaybeCount n,
                      std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 4) {
  if (!n) return std::nullopt;
  if (*n < 1) throw std::invalid_argument("bal: n must be >= 1");
  double floor_level = std::numeric_limits<double>::infinity();
  for (double theta : family.thetas()) floor_level = std::min(floor_level, family.mean(*n, theta));
  const auto holds = [&](std::int64_t alpha) {
    for (double theta : family.thetas())
      if (family.mean(alpha, theta) > floor_level) return false;
    return true;
  };
  if (holds(1)) return 1;
  std::int64_t lo = 1;  // predicate false
  std::int64_t hi = 2;
  while (!holds(hi)) {
    lo = hi;
    if (hi > cap / 2) return std::nullopt;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

enum class DetectabilityKind { kDet, kDdet };

inline const char* to_string(DetectabilityKind k) { return k == DetectabilityKind::kDet ? "det" : "Ddet"; }

/// Crossing of one pairwise detectability function below a threshold.
struct DetectabilityReport {
  double theta1 = 0.0;
  double theta2 = 0.0;
  DetectabilityKind kind = DetectabilityKind::kDet;
  double threshold = 0.0;
  MaybeCount crossing;
  std::int64_t cap = 0;
};

/// Crossings for every unordered pair (by position) of the family.
inline std::vector<DetectabilityReport> pairwise_crossings(DetectabilityCalculator& calc, const ModelFamily& family,
                                                           DetectabilityKind kind, double threshold,
                                                           const ScanOptions& opts) {
  std::vector<DetectabilityReport> out;
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      const auto f = [&, a, b](std::int64_t n) {
        return kind == DetectabilityKind::kDet ? calc.det(a, b, n) : calc.ddet(a, b, n);
      };
      out.push_back({family.theta(a), family.theta(b), kind, threshold,
                     f_star_down(f, threshold, opts.n_cap, opts.confirm_window), opts.n_cap});
    }
  }
  return out;
}

/// Max over pairs; nullopt if any pair never crosses. An empty list (single
/// model) yields `empty_value`.
inline MaybeCount max_crossing(const std::vector<DetectabilityReport>& reports, std::int64_t empty_value) {
  std::int64_t best = empty_value;
  for (const auto& r : reports) {
    if (!r.crossing) return std::nullopt;
    best = std::max(best, *r.crossing);
  }
  return best;
}

struct MdiffBound {
  std::int64_t budget = 2;  // even, >= 2
  double threshold = 0.0;
  std::vector<DetectabilityReport> pairs;
};

/// Exploration budget per arm: max over pairs of Ddet^{*down}((1/8) / ln(2K/delta)),
/// rounded up to an even number (minimum 2).
inline MdiffBound m_diff_upper_bound(const ModelFamily& family, double delta, std::int64_t num_arms, double sigma2,
                                     const ScanOptions& opts = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("m_diff: delta must lie in (0, 1)");
  if (num_arms < 1) throw std::invalid_argument("m_diff: K must be >= 1");
  MdiffBound out;
  out.threshold = 1.0 / (8.0 * std::log(2.0 * static_cast<double>(num_arms) / delta));
  DetectabilityCalculator calc(family, sigma2);
  out.pairs = pairwise_crossings(calc, family, DetectabilityKind::kDdet, out.threshold, opts);
  const auto worst = max_crossing(out.pairs, 2);
  if (!worst)
    throw std::runtime_error("m_diff: a model pair is not separated within n_cap = " + std::to_string(opts.n_cap) +
                             "; increase the cap or check the D-detection assumption");
  out.budget = std::max<std::int64_t>(2, *worst + (*worst % 2));
  return out;
}

/// Threshold (1/16) / ln(sqrt(2K) T) used by the saturation bound.
inline double w_threshold(std::int64_t horizon, std::int64_t num_arms) {
  return 1.0 / (16.0 * std::log(std::sqrt(2.0 * static_cast<double>(num_arms)) * static_cast<double>(horizon)));
}

struct WBound {
  MaybeCount value;  // nullopt: some pair never crosses (detection assumption fails)
  double threshold = 0.0;
  std::vector<DetectabilityReport> pairs;
};

/// W(T) = max over pairs of det^{*down}(threshold); the default threshold is
/// w_threshold(T, K). A single-model family gives W = 1.
inline WBound w_bound(DetectabilityCalculator& calc, const ModelFamily& family, std::int64_t horizon,
                      std::int64_t num_arms, const ScanOptions& opts = {},
                      std::optional<double> threshold = std::nullopt) {
  if (horizon < 1) throw std::invalid_argument("w_bound: T must be >= 1");
  if (num_arms < 1) throw std::invalid_argument("w_bound: K must be >= 1");
  WBound out;
  out.threshold = threshold.value_or(w_threshold(horizon, num_arms));
  out.pairs = pairwise_crossings(calc, family, DetectabilityKind::kDet, out.threshold, opts);
  out.value = max_crossing(out.pairs, 1);
  return out;
}

inline WBound w_bound(const ModelFamily& family, std::int64_t horizon, std::int64_t num_arms, double sigma2,
                      const ScanOptions& opts = {}, std::optional<double> threshold = std::nullopt) {
  DetectabilityCalculator calc(family, sigma2);
  return w_bound(calc, family, horizon, num_arms, opts, threshold);
}

struct TSimBound {
  std::int64_t horizon = 0;  // smallest T with K * bal(W(T)) <= T
  std::int64_t w = 0;        // W at that T
  std::int64_t balance = 0;  // bal(W) at that T
  int iterations = 0;
};

/// Smallest T <= t_cap with K * bal(W(T)) <= T. Because K * bal(W(T)) is
/// non-decreasing in T, every T' in [T, K * bal(W(T))) fails whenever T
/// fails, so the search jumps straight to K * bal(W(T)).
inline TSimBound t_sim_upper_bound(const ModelFamily& family, std::int64_t num_arms, double sigma2,
                                   const ScanOptions& opts = {}) {
  if (num_arms < 1) throw std::invalid_argument("t_sim: K must be >= 1");
  DetectabilityCalculator calc(family, sigma2);
  TSimBound out;
  std::int64_t t = 1;
  while (true) {
    ++out.iterations;
    const auto w = w_bound(calc, family, t, num_arms, opts).value;
    if (!w) throw std::runtime_error("t_sim: W(T) not found within n_cap at T = " + std::to_string(t));
    const auto b = bal(family, w);
    if (!b || *b > opts.t_cap / num_arms)
      throw std::runtime_error("t_sim: K * bal(W(T)) exceeds the T cap " + std::to_string(opts.t_cap));
    const std::int64_t need = num_arms * *b;
    if (need <= t) {
      out.horizon = t;
      out.w = *w;
      out.balance = *b;
      return out;
    }
    t = need;
  }
}

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  std::vector<std::string> witnesses;  // failures, or supporting values when passed
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  const AssumptionCheck& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw std::out_of_range("no assumption check named " + name);
  }
};

struct VerifyGrids {
  std::int64_t dense_n = 10'000;      // every n up to this is checked for positivity/monotonicity
  std::int64_t geometric_n = 1'000'000;
  int vanishing_decades = 6;          // mu(10^k) must strictly decrease over k = 1..decades
  std::vector<double> epsilons{};     // Ddet thresholds; empty: derived from deltas
  std::vector<double> deltas{0.1, 0.01};
  std::int64_t num_arms = 2;
  ScanOptions scan{};
};

namespace detail {

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

inline std::vector<std::int64_t> sample_grid(std::int64_t dense, std::int64_t geometric) {
  std::vector<std::int64_t> grid;
  for (std::int64_t n = 1; n <= dense; ++n) grid.push_back(n);
  for (double x = static_cast<double>(std::max<std::int64_t>(dense, 1)) * 1.1; x <= static_cast<double>(geometric);
       x *= 1.1)
    grid.push_back(static_cast<std::int64_t>(x));
  return grid;
}

}  // namespace detail

/// Numerical checks of the model-family assumptions:
///  - "rotting models": positive, non-increasing, vanishing;
///  - "d-detection": every pair's Ddet crosses each threshold within n_cap;
///  - "simultaneous": K * bal(W(T)) / T falls to <= 1 and stays there on a
///    geometric T grid up to t_cap.
inline AssumptionReport verify_assumptions(const ModelFamily& family, double sigma2, const VerifyGrids& grids = {}) {
  AssumptionReport report;

  AssumptionCheck rotting{"rotting_models", true, {}};
  const auto grid = detail::sample_grid(grids.dense_n, grids.geometric_n);
  for (double theta : family.thetas()) {
    const std::string tag = "theta=" + detail::str(theta) + ": ";
    for (auto n : grid) {
      const double a = family.mean(n, theta);
      const double b = family.mean(n + 1, theta);
      if (!(a > 0.0)) {
        rotting.passed = false;
        rotting.witnesses.push_back(tag + "mu(" + detail::str(n) + ") = " + detail::str(a) + " is not positive");
        break;
      }
      if (b > a) {
        rotting.passed = false;
        rotting.witnesses.push_back(tag + "mu increases between n=" + detail::str(n) + " and n+1");
        break;
      }
    }
    double prev = family.mean(10, theta);
    std::int64_t p = 10;
    for (int k = 2; k <= grids.vanishing_decades; ++k) {
      p *= 10;
      const double v = family.mean(p, theta);
      if (!(v < prev)) {
        rotting.passed = false;
        rotting.witnesses.push_back(tag + "not vanishing: mu(10^" + std::to_string(k) + ") = " + detail::str(v) +
                                    " >= mu(10^" + std::to_string(k - 1) + ") = " + detail::str(prev));
        break;
      }
      prev = v;
    }
  }
  report.checks.push_back(std::move(rotting));

  DetectabilityCalculator calc(family, sigma2);

  AssumptionCheck detection{"d_detection", true, {}};
  std::vector<double> eps = grids.epsilons;
  if (eps.empty())
    for (double d : grids.deltas)
      eps.push_back(1.0 / (8.0 * std::log(2.0 * static_cast<double>(grids.num_arms) / d)));
  for (double e : eps) {
    for (const auto& r : pairwise_crossings(calc, family, DetectabilityKind::kDdet, e, grids.scan)) {
      const std::string pair = "(" + detail::str(r.theta1) + ", " + detail::str(r.theta2) + ")";
      if (!r.crossing) {
        detection.passed = false;
        detection.witnesses.push_back("pair " + pair + ": Ddet stays above " + detail::str(e) + " up to n = " +
                                      detail::str(r.cap));
      } else {
        detection.witnesses.push_back("pair " + pair + ": Ddet <= " + detail::str(e) + " from n = " +
                                      detail::str(*r.crossing));
      }
    }
  }
  report.checks.push_back(std::move(detection));

  AssumptionCheck sim{"simultaneous_balance_detection", false, {}};
  std::optional<std::int64_t> settled_from;
  bool failed_hard = false;
  for (std::int64_t t = 16; t <= grids.scan.t_cap; t *= 2) {
    const auto w = w_bound(calc, family, t, grids.num_arms, grids.scan).value;
    if (!w) {
      sim.witnesses.push_back("T=" + detail::str(t) + ": W(T) not found within n_cap");
      failed_hard = true;
      break;
    }
    const auto b = bal(family, w);
    if (!b) {
      sim.witnesses.push_back("T=" + detail::str(t) + ": bal(W=" + detail::str(*w) + ") not found");
      failed_hard = true;
      break;
    }
    const double ratio = static_cast<double>(grids.num_arms) * static_cast<double>(*b) / static_cast<double>(t);
    if (ratio <= 1.0) {
      if (!settled_from) settled_from = t;
    } else {
      settled_from.reset();
    }
    sim.witnesses.push_back("T=" + detail::str(t) + ": W=" + detail::str(*w) + " bal=" + detail::str(*b) +
                            " K*bal/T=" + detail::str(ratio));
  }
  sim.passed = !failed_hard && settled_from.has_value();
  if (!sim.passed && !failed_hard)
    sim.witnesses.push_back("K*bal(W(T))/T does not settle at or below 1 by T = " + detail::str(grids.scan.t_cap));
  report.checks.push_back(std::move(sim));

  return report;
}

}  // namespace rotting

#endif  // ROTTING_THEORY_HPP
