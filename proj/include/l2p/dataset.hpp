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

#ifndef L2P_DATASET_HPP_
#define L2P_DATASET_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace l2p {

using InstanceId = std::int64_t;

struct Instance {
  InstanceId id = 0;
  std::vector<double> features;
  double target = 0.0;
};

struct Dataset {
  std::vector<Instance> instances;
  std::vector<std::string> feature_names;
  std::string target_name;

  std::size_t size() const { return instances.size(); }
  std::size_t dim() const { return feature_names.size(); }
  std::vector<double> targets() const;
  std::vector<InstanceId> ids() const;
};

struct FoldAssignment {
  std::unordered_map<InstanceId, int> fold_of;
  int n_folds = 0;
};

/// Loads a headered numeric CSV. All non-target columns become features in
/// header order.
Dataset LoadCsv(const std::string& path, const std::string& target_column);

/// Writes a dataset back to CSV in a form LoadCsv accepts.
void WriteCsv(const Dataset& dataset, const std::string& path);

/// Pearson kurtosis m4 / m2^2 with population moments. A normal sample
/// scores near 3. Throws on fewer than 4 values or zero variance.
double Kurtosis(std::span<const double> values);

/// Empirical complementary CDF: one (value, fraction of sample >= value)
/// point per distinct value, sorted by value ascending.
std::vector<std::pair<double, double>> CcdfPoints(
    std::span<const double> values);

/// Quantile-stratified k-fold split for a continuous target: instances are
/// sorted by target, cut into n_strata contiguous strata, shuffled within
/// each stratum and dealt round-robin, so every fold samples the whole
/// target range including the tail.
FoldAssignment StratifiedKFold(const Dataset& dataset, int k, int n_strata,
                               std::uint64_t seed);

/// Partitions a dataset by fold assignment into (train, test) for a fold.
std::pair<Dataset, Dataset> SplitFold(const Dataset& dataset,
                                      const FoldAssignment& folds, int fold);

/// Generates a heavy-tailed regression dataset: i.i.d. uniform[0,1]
/// features, a positively weighted linear score plus gaussian noise, and a
/// Pareto quantile transform of the score's rank as the target. Smaller
/// tail_index gives a heavier tail.
Dataset GenerateSynthetic(std::size_t n, std::size_t d, double tail_index,
                          double noise_scale, std::uint64_t seed);

}  // namespace l2p

#endif  // L2P_DATASET_HPP_
