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

#include "l2p/pairs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "l2p/random.hpp"

namespace l2p {
namespace {

PairExample MakePair(const Instance& left, const Instance& right) {
  PairExample pair;
  pair.left_id = left.id;
  pair.right_id = right.id;
  pair.features.reserve(left.features.size() * 2);
  pair.features.insert(pair.features.end(), left.features.begin(),
                       left.features.end());
  pair.features.insert(pair.features.end(), right.features.begin(),
                       right.features.end());
  pair.label = left.target > right.target ? +1 : -1;
  return pair;
}

}  // namespace

std::vector<PairExample> BuildFullPairs(const Dataset& train) {
  const std::size_t n = train.size();
  std::vector<PairExample> pairs;
  if (n >= 2) pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Instance& a = train.instances[i];
      const Instance& b = train.instances[j];
      if (a.target == b.target) continue;
      pairs.push_back(MakePair(a, b));
    }
  }
  if (pairs.empty()) {
    throw std::invalid_argument(
        "no trainable pairs: need at least 2 distinct target values");
  }
  return pairs;
}

std::vector<PairExample> BuildSampledPairs(const Dataset& train,
                                           const PairingPolicy& policy,
                                           std::uint64_t seed) {
  if (policy.mode != PairingPolicy::Mode::kSampled) {
    throw std::invalid_argument("policy is not sampled mode");
  }
  const std::size_t n = train.size();
  if (policy.k < 0 || policy.n_s < policy.k) {
    throw std::invalid_argument("need 0 <= k <= n_s");
  }
  if (static_cast<std::size_t>(policy.n_s) >= n) {
    throw std::invalid_argument("n_s must be smaller than the training set");
  }

  // Rank positions in target order; ties break by id so ranks are stable.
  std::vector<std::size_t> by_rank(n);
  std::iota(by_rank.begin(), by_rank.end(), 0);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](std::size_t a, std::size_t b) {
              const auto& ia = train.instances[a];
              const auto& ib = train.instances[b];
              if (ia.target != ib.target) return ia.target < ib.target;
              return ia.id < ib.id;
            });
  std::vector<std::size_t> rank_of(n);
  for (std::size_t r = 0; r < n; ++r) rank_of[by_rank[r]] = r;

  const std::size_t below = static_cast<std::size_t>(policy.k) / 2;
  const std::size_t above = static_cast<std::size_t>(policy.k) - below;

  const auto key = [n](std::size_t a, std::size_t b) {
    return std::min(a, b) * n + std::max(a, b);
  };
  std::unordered_set<std::size_t> seen;
  std::vector<PairExample> pairs;
  pairs.reserve(n * static_cast<std::size_t>(policy.n_s));

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const Instance& self = train.instances[i];
    const std::size_t p = rank_of[i];
    const std::size_t win_lo = p >= below ? p - below : 0;
    const std::size_t win_hi = std::min(n - 1, p + above);

    const auto emit = [&](std::size_t j) {
      const Instance& other = train.instances[j];
      if (self.target == other.target) return;
      if (!seen.insert(key(i, j)).second) return;
      pairs.push_back(MakePair(self, other));
    };

    // Rank neighbors, nearest first, truncated at the extremes.
    for (std::size_t r = win_lo; r <= win_hi; ++r) {
      if (r != p) emit(by_rank[r]);
    }

    // Uniform non-neighbors, sampled without replacement outside the
    // window. n_s < n guarantees enough candidates.
    const std::size_t wanted =
        static_cast<std::size_t>(policy.n_s - policy.k);
    if (wanted == 0) continue;
    candidates.clear();
    for (std::size_t r = 0; r < n; ++r) {
      if (r < win_lo || r > win_hi) candidates.push_back(by_rank[r]);
    }
    rng::Engine engine(rng::DeriveSeed(seed, "sampled-pairs", i));
    for (std::size_t s = 0; s < wanted && s < candidates.size(); ++s) {
      const std::size_t pick =
          s + engine.NextBelow(candidates.size() - s);
      std::swap(candidates[s], candidates[pick]);
      emit(candidates[s]);
    }
  }
  if (pairs.empty()) {
    throw std::invalid_argument(
        "no trainable pairs: need at least 2 distinct target values");
  }
  return pairs;
}

}  // namespace l2p
