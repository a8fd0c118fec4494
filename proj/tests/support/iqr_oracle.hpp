#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace webcorpus::testing {

// Brute-force reference for the IQR outlier rule, coded without sorting so it
// shares nothing with the library implementation.

// k-th smallest (0-based) by counting ranks: O(n^2).
inline double order_statistic(const std::vector<double>& v, std::size_t k) {
  for (double x : v) {
    std::size_t below = 0, at_or_below = 0;
    for (double y : v) {
      below += y < x;
      at_or_below += y <= x;
    }
    if (below <= k && k < at_or_below) return x;
  }
  throw std::logic_error("no order statistic");
}

// 1-based position 1 + (n - 1) p, blended linearly between the order
// statistics around it.
inline double reference_quantile(const std::vector<double>& v, double p) {
  double pos = 1 + (static_cast<double>(v.size()) - 1) * p;
  auto j = static_cast<std::size_t>(pos);
  double g = pos - static_cast<double>(j);
  double lower = order_statistic(v, j - 1);
  if (g == 0 || j == v.size()) return lower;
  return lower + g * (order_statistic(v, j) - lower);
}

inline std::vector<double> reference_iqr_filter(const std::vector<double>& v) {
  double q1 = reference_quantile(v, 0.25);
  double q3 = reference_quantile(v, 0.75);
  double spread = q3 - q1;
  std::vector<double> out;
  for (double x : v) {
    if (!(x < q1 - 1.5 * spread) && !(x > q3 + 1.5 * spread)) out.push_back(x);
  }
  return out;
}

}  // namespace webcorpus::testing
