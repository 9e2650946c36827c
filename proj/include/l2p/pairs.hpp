/*
 * Copyright 2026 The l2p Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef L2P_PAIRS_HPP_
#define L2P_PAIRS_HPP_

#include <cstdint>
#include <vector>

#include "l2p/dataset.hpp"

namespace l2p {

// One pairwise training example: the concatenated feature vectors of two
// instances and whether the left one has the larger target. Tied targets
// never produce an example.
struct PairExample {
  InstanceId left_id = 0;
  InstanceId right_id = 0;
  std::vector<double> features;  // [f_left, f_right], length 2d
  int label = 0;                 // +1 iff target(left) > target(right)
};

struct PairingPolicy {
  enum class Mode { kFull, kSampled };
  Mode mode = Mode::kFull;
  int n_s = 0;  // comparisons per instance (sampled mode)
  int k = 0;    // rank-neighbor count (sampled mode)

  static PairingPolicy Full() { return {}; }
  static PairingPolicy Sampled(int n_s, int k) {
    return {Mode::kSampled, n_s, k};
  }
};

/// Every unordered pair once, oriented by dataset index order (left = lower
/// index). Pairs with tied targets are dropped.
std::vector<PairExample> BuildFullPairs(const Dataset& train);

/// Budgeted pairing: each instance is paired with its k nearest neighbors
/// in target-rank order (half a window above, half below, truncated at the
/// extremes) plus n_s - k uniformly sampled non-neighbors, deduplicated as
/// unordered pairs. Total is at most n * n_s.
std::vector<PairExample> BuildSampledPairs(const Dataset& train,
                                           const PairingPolicy& policy,
                                           std::uint64_t seed);

}  // namespace l2p

#endif  // L2P_PAIRS_HPP_
