#ifndef ROTTING_STATS_HPP
#define ROTTING_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace rotting {

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Unbiased (n - 1) standard deviation; 0 for a single sample.
inline double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t dof = 0;
};

/// Two-sided one-sample t-test of H0: mean(diffs) = 0, i.e. the paired test
/// on per-seed differences. With zero spread the p-value is 0 when the mean
/// differs from 0 and 1 otherwise.
inline TTestResult paired_t_test(std::span<const double> diffs) {
  if (diffs.size() < 2) throw std::invalid_argument("paired t-test needs at least 2 differences");
  TTestResult out;
  out.dof = diffs.size() - 1;
  const double mean = sample_mean(diffs);
  const double sd = sample_stddev(diffs);
  if (sd == 0.0) {
    if (mean == 0.0) return out;
    out.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
    out.p = 0.0;
    return out;
  }
  out.t = mean / (sd / std::sqrt(static_cast<double>(diffs.size())));
  const boost::math::students_t dist(static_cast<double>(out.dof));
  out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t)));
  out.p = std::min(1.0, std::max(0.0, out.p));
  return out;
}

}  // namespace rotting

#endif  // ROTTING_STATS_HPP
