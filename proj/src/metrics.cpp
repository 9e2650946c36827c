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

#include "l2p/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace l2p::metrics {
namespace {

std::vector<double> Sorted(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Type-7 empirical quantile with linear interpolation.
double Quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void CheckAligned(std::span<const double> actual,
                  std::span<const double> predicted) {
  if (actual.empty()) throw std::invalid_argument("empty sample");
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("actual and predicted sizes differ");
  }
}

}  // namespace

double KsStatistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  const std::vector<double> sa = Sorted(a);
  const std::vector<double> sb = Sorted(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double ks = 0.0;
  // Walk the merged support; after consuming everything <= v the counters
  // are the scaled ECDFs at v.
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / na -
                               static_cast<double>(j) / nb));
  }
  // Remaining one-sided tail can only shrink the gap toward 0.
  return ks;
}

namespace detail {

double EmdEcdfIntegral(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> sa = Sorted(a);
  const std::vector<double> sb = Sorted(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double total = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  // The ECDF difference is piecewise constant between merged support
  // points, so the integral is a sum of rectangle areas.
  while (i < sa.size() || j < sb.size()) {
    double v;
    if (i < sa.size() && j < sb.size()) {
      v = std::min(sa[i], sb[j]);
    } else if (i < sa.size()) {
      v = sa[i];
    } else {
      v = sb[j];
    }
    if (have_prev) {
      const double fa = static_cast<double>(i) / na;
      const double fb = static_cast<double>(j) / nb;
      total += std::abs(fa - fb) * (v - prev);
    }
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    prev = v;
    have_prev = true;
  }
  return total;
}

}  // namespace detail

double Emd(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  if (a.size() != b.size()) return detail::EmdEcdfIntegral(a, b);
  const std::vector<double> sa = Sorted(a);
  const std::vector<double> sb = Sorted(b);
  double total = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    total += std::abs(sa[i] - sb[i]);
  }
  return total / static_cast<double>(sa.size());
}

std::optional<double> TprAt(std::span<const double> actual,
                            std::span<const double> predicted, double t) {
  CheckAligned(actual, predicted);
  std::size_t positives = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] >= t) {
      ++positives;
      if (predicted[i] >= t) ++hits;
    }
  }
  if (positives == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(positives);
}

std::optional<double> FprAt(std::span<const double> actual,
                            std::span<const double> predicted, double t) {
  CheckAligned(actual, predicted);
  std::size_t negatives = 0;
  std::size_t alarms = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] < t) {
      ++negatives;
      if (predicted[i] >= t) ++alarms;
    }
  }
  if (negatives == 0) return std::nullopt;
  return static_cast<double>(alarms) / static_cast<double>(negatives);
}

RocCurve RocAuc(std::span<const double> actual,
                std::span<const double> predicted) {
  CheckAligned(actual, predicted);
  std::vector<double> thresholds = Sorted(actual);
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  if (thresholds.size() < 2) {
    throw std::invalid_argument("roc needs at least 2 distinct actuals");
  }

  RocCurve curve;
  for (double t : thresholds) {
    const auto tpr = TprAt(actual, predicted, t);
    const auto fpr = FprAt(actual, predicted, t);
    if (!tpr || !fpr) continue;
    curve.points.push_back({*fpr, *tpr, t});
  }
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  curve.points.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});
  // Descending threshold as the last key puts the (0,0) anchor first and
  // the (1,1) anchor last among coincident points.
  std::sort(curve.points.begin(), curve.points.end(),
            [](const RocPoint& a, const RocPoint& b) {
              if (a.fpr != b.fpr) return a.fpr < b.fpr;
              if (a.tpr != b.tpr) return a.tpr < b.tpr;
              return a.threshold > b.threshold;
            });

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& lo = curve.points[i - 1];
    const RocPoint& hi = curve.points[i];
    auc += (hi.fpr - lo.fpr) * (hi.tpr + lo.tpr) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

std::vector<std::pair<double, double>> QqPoints(
    std::span<const double> actual, std::span<const double> predicted,
    int n_quantiles) {
  if (actual.empty() || predicted.empty()) {
    throw std::invalid_argument("empty sample");
  }
  if (n_quantiles < 2) {
    throw std::invalid_argument("n_quantiles must be at least 2");
  }
  const std::vector<double> sa = Sorted(actual);
  const std::vector<double> sp = Sorted(predicted);
  std::vector<std::pair<double, double>> points;
  points.reserve(n_quantiles);
  for (int i = 1; i <= n_quantiles; ++i) {
    const double p = static_cast<double>(i) /
                     static_cast<double>(n_quantiles + 1);
    points.emplace_back(Quantile(sa, p), Quantile(sp, p));
  }
  return points;
}

MetricReport Evaluate(std::span<const double> actual,
                      std::span<const double> predicted, int n_quantiles) {
  MetricReport report;
  report.ks = KsStatistic(actual, predicted);
  report.emd = Emd(actual, predicted);
  report.auc = RocAuc(actual, predicted).auc;
  report.qq = QqPoints(actual, predicted, n_quantiles);
  return report;
}

}  // namespace l2p::metrics
