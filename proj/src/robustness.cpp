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

#include "l2p/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "l2p/metrics.hpp"
#include "l2p/random.hpp"

namespace l2p {
namespace {

void ValidateMechanism(const ErrorMechanism& mechanism) {
  if (mechanism.kind == ErrorMechanism::Kind::kRandom) {
    if (!(mechanism.param >= 0.0 && mechanism.param <= 1.0)) {
      throw std::invalid_argument("flip probability must be in [0,1]");
    }
  } else if (mechanism.param < 0.0) {
    throw std::invalid_argument("alpha must be non-negative");
  }
}

}  // namespace

std::vector<Verdict> OracleLabels(std::span<const double> train_targets,
                                  std::span<const InstanceId> ids,
                                  double q_target) {
  if (train_targets.size() != ids.size()) {
    throw std::invalid_argument("targets and ids sizes differ");
  }
  if (!std::isfinite(q_target)) {
    throw std::invalid_argument("query target must be finite");
  }
  std::vector<Verdict> labels;
  labels.reserve(train_targets.size());
  for (std::size_t i = 0; i < train_targets.size(); ++i) {
    if (train_targets[i] == q_target) continue;  // ties abstain
    const bool greater = train_targets[i] > q_target;
    labels.push_back({ids[i], greater ? +1 : -1, greater ? 1.0 : 0.0});
  }
  return labels;
}

std::vector<Verdict> OracleLabels(const Dataset& train, double q_target) {
  const std::vector<double> targets = train.targets();
  const std::vector<InstanceId> ids = train.ids();
  return OracleLabels(targets, ids, q_target);
}

double RankPercentile(std::span<const double> sorted_targets, double v) {
  if (sorted_targets.empty()) throw std::invalid_argument("empty sample");
  const auto lo = std::lower_bound(sorted_targets.begin(),
                                   sorted_targets.end(), v);
  const auto hi = std::upper_bound(lo, sorted_targets.end(), v);
  const double less = static_cast<double>(lo - sorted_targets.begin());
  const double equal = static_cast<double>(hi - lo);
  return (less + 0.5 * equal) / static_cast<double>(sorted_targets.size());
}

CorruptionResult InjectErrors(std::span<const Verdict> labels,
                              std::span<const double> ranks, double q_rank,
                              const ErrorMechanism& mechanism,
                              std::uint64_t seed) {
  if (labels.size() != ranks.size()) {
    throw std::invalid_argument("ranks must align with labels");
  }
  ValidateMechanism(mechanism);

  CorruptionResult result;
  result.labels.assign(labels.begin(), labels.end());
  rng::Engine engine(seed);
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    double p;
    if (mechanism.kind == ErrorMechanism::Kind::kRandom) {
      p = mechanism.param;
    } else {
      p = std::exp(-mechanism.param * std::abs(ranks[i] - q_rank));
    }
    if (engine.NextDouble() < p) {
      Verdict& v = result.labels[i];
      v.label = -v.label;
      v.prob_greater = 1.0 - v.prob_greater;
      ++result.flips;
    }
  }
  result.flip_fraction =
      labels.empty() ? 0.0
                     : static_cast<double>(result.flips) /
                           static_cast<double>(labels.size());
  return result;
}

RobustnessCurve RobustnessSweep(const Dataset& dataset,
                                ErrorMechanism::Kind kind,
                                std::span<const double> grid, int n_folds,
                                std::uint64_t seed, int n_strata) {
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  const FoldAssignment folds = StratifiedKFold(
      dataset, n_folds, n_strata, rng::DeriveSeed(seed, "robustness-folds"));

  RobustnessCurve curve;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    ErrorMechanism mechanism{kind, grid[g]};
    ValidateMechanism(mechanism);
    const std::uint64_t param_seed = rng::DeriveSeed(seed, "flip", g);

    std::vector<double> actual;
    std::vector<double> predicted;
    std::size_t total_labels = 0;
    std::size_t total_flips = 0;
    for (int fold = 0; fold < n_folds; ++fold) {
      const auto [train, test] = SplitFold(dataset, folds, fold);
      const BinPartition partition = BuildPartition(train);
      std::vector<double> sorted_targets = train.targets();
      std::sort(sorted_targets.begin(), sorted_targets.end());

      for (const Instance& q : test.instances) {
        const std::vector<Verdict> labels = OracleLabels(train, q.target);
        std::vector<double> ranks;
        ranks.reserve(labels.size());
        for (const Verdict& v : labels) {
          const auto edge = partition.edge_of.find(v.id);
          ranks.push_back(RankPercentile(
              sorted_targets, partition.edges[edge->second]));
        }
        const double q_rank = RankPercentile(sorted_targets, q.target);
        const CorruptionResult corrupted = InjectErrors(
            labels, ranks, q_rank, mechanism,
            rng::DeriveSeed(param_seed, "instance",
                            static_cast<std::uint64_t>(q.id)));
        total_labels += labels.size();
        total_flips += corrupted.flips;

        const VoteTally tally =
            Vote(partition, corrupted.labels, VoteMode::kPlain);
        const Placement placement = Place(tally, partition);
        actual.push_back(q.target);
        predicted.push_back(placement.predicted_value);
      }
    }

    RobustnessPoint point;
    point.parameter = grid[g];
    point.realized_accuracy =
        total_labels == 0
            ? 1.0
            : 1.0 - static_cast<double>(total_flips) /
                        static_cast<double>(total_labels);
    point.auc = metrics::RocAuc(actual, predicted).auc;
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace l2p
