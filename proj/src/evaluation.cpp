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

#include "l2p/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include "l2p/parallel.hpp"
#include "l2p/random.hpp"

namespace l2p {
namespace {

void FinishMethod(MethodResult& method, const std::vector<double>& actual,
                  const std::vector<std::vector<double>>& fold_actual,
                  const std::vector<std::vector<double>>& fold_predicted,
                  int qq_quantiles) {
  for (std::size_t f = 0; f < fold_actual.size(); ++f) {
    method.fold_reports.push_back(metrics::Evaluate(
        fold_actual[f], fold_predicted[f], qq_quantiles));
    method.predicted.insert(method.predicted.end(),
                            fold_predicted[f].begin(),
                            fold_predicted[f].end());
  }
  method.pooled = metrics::Evaluate(actual, method.predicted, qq_quantiles);

  double mean = 0.0;
  for (const auto& report : method.fold_reports) mean += report.auc;
  mean /= static_cast<double>(method.fold_reports.size());
  double var = 0.0;
  for (const auto& report : method.fold_reports) {
    var += (report.auc - mean) * (report.auc - mean);
  }
  method.auc_mean = mean;
  method.auc_std =
      method.fold_reports.size() > 1
          ? std::sqrt(var /
                      static_cast<double>(method.fold_reports.size() - 1))
          : 0.0;
}

}  // namespace

CvResult EvaluateCv(const Dataset& dataset, const EvalConfig& config) {
  const FoldAssignment folds =
      StratifiedKFold(dataset, config.n_folds, config.n_strata,
                      rng::DeriveSeed(config.seed, "folds"));

  const auto k = static_cast<std::size_t>(config.n_folds);
  std::vector<std::vector<double>> fold_actual(k);
  std::vector<std::vector<double>> fold_l2p(k);
  std::vector<std::vector<double>> fold_knn(k);
  std::vector<std::vector<double>> fold_random(k);

  CvResult result;
  for (std::size_t fold = 0; fold < k; ++fold) {
    const auto [train, test] =
        SplitFold(dataset, folds, static_cast<int>(fold));

    std::vector<PairExample> pairs =
        config.pairing.mode == PairingPolicy::Mode::kFull
            ? BuildFullPairs(train)
            : BuildSampledPairs(train, config.pairing,
                                rng::DeriveSeed(config.seed, "pairs", fold));
    result.pair_count_per_fold.push_back(pairs.size());
    result.pair_count_total += pairs.size();

    const RandomForestModel model = TrainForest(
        pairs, config.forest, rng::DeriveSeed(config.seed, "forest", fold));
    pairs.clear();
    pairs.shrink_to_fit();

    const std::size_t n_test = test.instances.size();
    fold_actual[fold].resize(n_test);
    fold_l2p[fold].resize(n_test);
    fold_knn[fold].resize(n_test);
    // Queries are independent; each writes only its own slot.
    ParallelFor(n_test, [&](std::size_t i) {
      const Instance& q = test.instances[i];
      fold_actual[fold][i] = q.target;
      fold_l2p[fold][i] =
          Predict(model, train, q.features, config.vote_mode)
              .predicted_value;
      fold_knn[fold][i] = KnnPredict(train, q.features, config.knn);
    });
    fold_random[fold] = RandomBaseline(
        fold_actual[fold], rng::DeriveSeed(config.seed, "random", fold));

    result.actual.insert(result.actual.end(), fold_actual[fold].begin(),
                         fold_actual[fold].end());
  }

  FinishMethod(result.l2p, result.actual, fold_actual, fold_l2p,
               config.qq_quantiles);
  FinishMethod(result.knn, result.actual, fold_actual, fold_knn,
               config.qq_quantiles);
  FinishMethod(result.random, result.actual, fold_actual, fold_random,
               config.qq_quantiles);
  return result;
}

}  // namespace l2p
