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

#ifndef L2P_BASELINES_HPP_
#define L2P_BASELINES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "l2p/dataset.hpp"

namespace l2p {

struct KnnConfig {
  int k = 5;
};

/// Unweighted mean target of the k nearest training instances under
/// Euclidean distance. Distance ties break by instance id.
double KnnPredict(const Dataset& train, std::span<const double> q,
                  const KnnConfig& config = {});

/// Seeded uniform permutation of the actual outcomes, used as the
/// no-information prediction baseline.
std::vector<double> RandomBaseline(std::span<const double> actual,
                                   std::uint64_t seed);

}  // namespace l2p

#endif  // L2P_BASELINES_HPP_
