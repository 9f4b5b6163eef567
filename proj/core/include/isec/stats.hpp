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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace isec {

/// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation (Pearson on average ranks). Empty when either
/// side has zero rank variance or fewer than two points.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct BootstrapInterval {
  double low = 0.0;
  double high = 0.0;
  std::size_t resamples_used = 0;  // resamples with non-degenerate variance
};

/// Percentile bootstrap over paired points for the Spearman coefficient.
std::optional<BootstrapInterval> bootstrap_spearman(std::span<const double> x, std::span<const double> y,
                                                    std::size_t resamples, double confidence, std::uint64_t seed);

}  // namespace isec
