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

#ifndef L2P_FOREST_HPP_
#define L2P_FOREST_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "l2p/pairs.hpp"
#include "l2p/random.hpp"

namespace l2p {

// Binary preference classifier interface: probability that the left half of
// a concatenated pair outranks the right half.
class PreferenceModel {
 public:
  virtual ~PreferenceModel() = default;
  virtual std::size_t dim() const = 0;
  virtual double PredictProb(std::span<const double> features) const = 0;
  int PredictLabel(std::span<const double> features) const {
    return PredictProb(features) >= 0.5 ? +1 : -1;
  }
};

struct ForestConfig {
  int n_trees = 100;
  int max_features = 0;      // 0 = ceil(sqrt(dim))
  int min_samples_leaf = 1;
  int max_depth = 0;         // 0 = unlimited
  bool bootstrap = true;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  std::int32_t left = -1;
  std::int32_t right = -1;
  double threshold = 0.0;
  double prob = 0.0;          // leaf probability of label +1
  bool IsLeaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;
  double Prob(std::span<const double> x) const;
};

class RandomForestModel final : public PreferenceModel {
 public:
  RandomForestModel() = default;
  RandomForestModel(ForestConfig config, std::size_t dim,
                    std::vector<Tree> trees)
      : config_(config), dim_(dim), trees_(std::move(trees)) {}

  std::size_t dim() const override { return dim_; }
  double PredictProb(std::span<const double> features) const override;

  const std::vector<Tree>& trees() const { return trees_; }
  const ForestConfig& config() const { return config_; }

 private:
  ForestConfig config_;
  std::size_t dim_ = 0;
  std::vector<Tree> trees_;
};

/// Trains a CART random forest with Gini splits on midpoint thresholds.
/// Tree t draws from an independent stream seeded by (seed, "tree", t):
/// bootstrap counts first, then per-node feature subsets in growth order,
/// so results are identical for any thread count.
RandomForestModel TrainForest(std::span<const PairExample> pairs,
                              const ForestConfig& config, std::uint64_t seed);

/// Bootstrap multiplicities: n uniform draws with replacement from [0, n),
/// returned as per-index counts. Shared by training and the tests that
/// re-trace leaf probabilities.
std::vector<std::uint32_t> BootstrapCounts(rng::Engine& engine,
                                           std::size_t n);

/// Classifies the concatenation [f_i, f_q]: (label, probability of +1).
std::pair<int, double> PredictPair(const PreferenceModel& model,
                                   std::span<const double> f_i,
                                   std::span<const double> f_q);

/// Fraction of pairs whose predicted label matches the stored label.
double ClassifierAccuracy(const PreferenceModel& model,
                          std::span<const PairExample> pairs);

}  // namespace l2p

#endif  // L2P_FOREST_HPP_
