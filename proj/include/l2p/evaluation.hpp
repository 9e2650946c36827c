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

#ifndef L2P_EVALUATION_HPP_
#define L2P_EVALUATION_HPP_

#include <cstdint>
#include <vector>

#include "l2p/baselines.hpp"
#include "l2p/dataset.hpp"
#include "l2p/forest.hpp"
#include "l2p/metrics.hpp"
#include "l2p/pairs.hpp"
#include "l2p/placement.hpp"

namespace l2p {

struct EvalConfig {
  std::uint64_t seed = 0;
  int n_folds = 5;
  int n_strata = 10;
  ForestConfig forest;
  PairingPolicy pairing = PairingPolicy::Full();
  VoteMode vote_mode = VoteMode::kPlain;
  KnnConfig knn;
  int qq_quantiles = 100;
};

struct MethodResult {
  std::vector<double> predicted;  // pooled, fold-major order
  std::vector<metrics::MetricReport> fold_reports;
  metrics::MetricReport pooled;
  double auc_mean = 0.0;
  double auc_std = 0.0;  // sample standard deviation across folds
};

struct CvResult {
  std::vector<double> actual;  // pooled, fold-major order
  std::vector<std::size_t> pair_count_per_fold;
  std::size_t pair_count_total = 0;
  MethodResult l2p;
  MethodResult knn;
  MethodResult random;
};

/// Cross-validated head-to-head evaluation: per fold, trains the pairwise
/// forest on the training split, places every held-out instance, and
/// scores against the kNN and shuffled-target baselines on the same
/// splits. All randomness fans out from config.seed.
CvResult EvaluateCv(const Dataset& dataset, const EvalConfig& config);

}  // namespace l2p

#endif  // L2P_EVALUATION_HPP_
