#pragma once

// Test-only reference computations. These deliberately avoid the library's
// code paths: long double arithmetic, direct sums, brute-force sorts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace entropix::reference {

inline std::vector<double> softmax(std::span<const double> logits) {
  long double total = 0.0L;
  for (double x : logits) total += std::exp(static_cast<long double>(x));
  std::vector<double> out;
  for (double x : logits) out.push_back(static_cast<double>(std::exp(static_cast<long double>(x)) / total));
  return out;
}

inline long double entropy(std::span<const double> probs) {
  long double h = 0.0L;
  for (double p : probs) {
    if (p > 0.0) h -= static_cast<long double>(p) * std::log(static_cast<long double>(p));
  }
  return h;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

inline std::vector<double> frequencies(std::span<const std::size_t> counts) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  std::vector<double> f;
  for (std::size_t c : counts) f.push_back(static_cast<double>(c) / n);
  return f;
}

// Pearson goodness-of-fit p-value.
inline double chi_square_p_value(std::span<const std::size_t> observed,
                                 std::span<const double> expected_probs) {
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
  double stat = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = n * expected_probs[i];
    if (expected <= 0.0) continue;
    ++cells;
    const double d = static_cast<double>(observed[i]) - expected;
    stat += d * d / expected;
  }
  boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Exact-k top selection by full sort with (value desc, index asc).
inline std::vector<std::size_t> top_indices(std::span<const double> values, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> v;
  for (std::size_t i = 0; i < values.size(); ++i) v.emplace_back(values[i], i);
  std::sort(v.begin(), v.end(), [](auto a, auto b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k && i < v.size(); ++i) out.push_back(v[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace entropix::reference
