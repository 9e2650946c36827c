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

#include "l2p/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "l2p/random.hpp"

namespace l2p {

double KnnPredict(const Dataset& train, std::span<const double> q,
                  const KnnConfig& config) {
  if (train.instances.empty()) {
    throw std::invalid_argument("knn on empty training set");
  }
  if (q.size() != train.dim()) {
    throw std::invalid_argument("query dimension mismatch");
  }
  if (config.k < 1 ||
      static_cast<std::size_t>(config.k) > train.instances.size()) {
    throw std::invalid_argument("k out of range");
  }

  struct Neighbor {
    double dist2;
    InstanceId id;
    double target;
  };
  std::vector<Neighbor> neighbors;
  neighbors.reserve(train.instances.size());
  for (const auto& inst : train.instances) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double diff = inst.features[j] - q[j];
      dist2 += diff * diff;
    }
    neighbors.push_back({dist2, inst.id, inst.target});
  }
  const auto cmp = [](const Neighbor& a, const Neighbor& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.id < b.id;
  };
  std::nth_element(neighbors.begin(),
                   neighbors.begin() + (config.k - 1), neighbors.end(), cmp);

  double sum = 0.0;
  // nth_element leaves the k smallest in the first k slots.
  for (int i = 0; i < config.k; ++i) sum += neighbors[i].target;
  return sum / static_cast<double>(config.k);
}

std::vector<double> RandomBaseline(std::span<const double> actual,
                                   std::uint64_t seed) {
  if (actual.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> out(actual.begin(), actual.end());
  rng::Engine engine(seed);
  engine.Shuffle(out);
  return out;
}

}  // namespace l2p
