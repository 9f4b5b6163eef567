// Copyright 2026 The ISEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "isec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "isec/errors.hpp"

namespace isec {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<BootstrapInterval> bootstrap_spearman(std::span<const double> x, std::span<const double> y,
                                                    std::size_t resamples, double confidence, std::uint64_t seed) {
  if (x.size() != y.size()) throw ValidationError("bootstrap: length mismatch");
  if (x.size() < 2 || resamples == 0) return std::nullopt;
  std::mt19937_64 rng(seed);
  const auto n = x.size();
  std::vector<double> bx(n);
  std::vector<double> by(n);
  std::vector<double> estimates;
  estimates.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto pick = static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
      bx[i] = x[pick];
      by[i] = y[pick];
    }
    if (auto rho = spearman(bx, by)) estimates.push_back(*rho);
  }
  if (estimates.empty()) return std::nullopt;
  std::sort(estimates.begin(), estimates.end());
  const double tail = (1.0 - confidence) / 2.0;
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(estimates.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return estimates[lo] + (estimates[hi] - estimates[lo]) * (pos - static_cast<double>(lo));
  };
  return BootstrapInterval{quantile(tail), quantile(1.0 - tail), estimates.size()};
}

}  // namespace isec
