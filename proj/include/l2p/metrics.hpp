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

#ifndef L2P_METRICS_HPP_
#define L2P_METRICS_HPP_

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace l2p::metrics {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

struct MetricReport {
  double ks = 0.0;
  double emd = 0.0;
  double auc = 0.0;
  std::vector<std::pair<double, double>> qq;
};

/// Two-sample Kolmogorov-Smirnov statistic: sup |ECDF_a - ECDF_b| over the
/// merged support.
double KsStatistic(std::span<const double> a, std::span<const double> b);

/// 1-D Wasserstein-1 distance between empirical distributions.
double Emd(std::span<const double> a, std::span<const double> b);

namespace detail {
/// ECDF-difference integral form of Emd, kept separate so the two routes
/// can cross-check each other.
double EmdEcdfIntegral(std::span<const double> a, std::span<const double> b);
}  // namespace detail

/// Fraction of true positives recovered at threshold t:
/// |{pred >= t and actual >= t}| / |{actual >= t}|.
/// Empty when no actual reaches t.
std::optional<double> TprAt(std::span<const double> actual,
                            std::span<const double> predicted, double t);

/// Fraction of negatives misreported at threshold t:
/// |{pred >= t and actual < t}| / |{actual < t}|.
/// Empty when every actual reaches t.
std::optional<double> FprAt(std::span<const double> actual,
                            std::span<const double> predicted, double t);

/// Threshold-sweep ROC over all unique actual values. Thresholds where TPR
/// or FPR is undefined are skipped; anchors (0,0) and (1,1) close the
/// curve; points are sorted by (fpr, tpr) and integrated by trapezoids.
/// Because the threshold applies to actual and predicted simultaneously,
/// raw points need not be monotone, hence the sort before integration.
RocCurve RocAuc(std::span<const double> actual,
                std::span<const double> predicted);

/// Paired empirical quantiles at levels i/(n_quantiles+1), i = 1..n_quantiles,
/// with linear interpolation between order statistics.
std::vector<std::pair<double, double>> QqPoints(
    std::span<const double> actual, std::span<const double> predicted,
    int n_quantiles = 100);

/// Bundles KS, EMD, AUC and Q-Q points for one (actual, predicted) pairing.
MetricReport Evaluate(std::span<const double> actual,
                      std::span<const double> predicted,
                      int n_quantiles = 100);

}  // namespace l2p::metrics

#endif  // L2P_METRICS_HPP_
