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

#ifndef L2P_ROBUSTNESS_HPP_
#define L2P_ROBUSTNESS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "l2p/dataset.hpp"
#include "l2p/placement.hpp"

namespace l2p {

// Controlled corruption of oracle pairwise labels: either a constant flip
// probability, or one decaying with rank distance so mistakes concentrate
// on hard (nearby-rank) comparisons.
struct ErrorMechanism {
  enum class Kind { kRandom, kDistanceDependent };
  Kind kind = Kind::kRandom;
  double param = 0.0;  // p_c for kRandom, alpha for kDistanceDependent

  static ErrorMechanism Random(double p_c) {
    return {Kind::kRandom, p_c};
  }
  static ErrorMechanism DistanceDependent(double alpha) {
    return {Kind::kDistanceDependent, alpha};
  }
};

struct CorruptionResult {
  std::vector<Verdict> labels;
  std::size_t flips = 0;
  double flip_fraction = 0.0;
};

struct RobustnessPoint {
  double parameter = 0.0;
  double realized_accuracy = 0.0;
  double auc = 0.0;
};

struct RobustnessCurve {
  std::vector<RobustnessPoint> points;
};

/// Ground-truth verdicts of every training instance about a query target:
/// +1 above, -1 below, ties abstain (no verdict emitted).
std::vector<Verdict> OracleLabels(std::span<const double> train_targets,
                                  std::span<const InstanceId> ids,
                                  double q_target);

std::vector<Verdict> OracleLabels(const Dataset& train, double q_target);

/// Midrank percentile of v within a sorted sample, normalized to [0,1].
double RankPercentile(std::span<const double> sorted_targets, double v);

/// Flips each verdict according to the mechanism: constant probability, or
/// exp(-alpha * |rank_i - q_rank|) for rank-distance decay. ranks align
/// with labels. Applying the same seed twice restores the input.
CorruptionResult InjectErrors(std::span<const Verdict> labels,
                              std::span<const double> ranks, double q_rank,
                              const ErrorMechanism& mechanism,
                              std::uint64_t seed);

/// Sweeps the mechanism parameter over a grid: per
/// value, every held-out instance is placed from corrupted oracle labels
/// under cross-validation, and pooled AUC is paired with the realized
/// classifier accuracy (1 - flip fraction).
RobustnessCurve RobustnessSweep(const Dataset& dataset,
                                ErrorMechanism::Kind kind,
                                std::span<const double> grid, int n_folds,
                                std::uint64_t seed, int n_strata = 10);

}  // namespace l2p

#endif  // L2P_ROBUSTNESS_HPP_
