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

#include "l2p/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "l2p/random.hpp"

namespace l2p {
namespace {

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseCell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw std::invalid_argument("non-numeric cell '" + cell + "' at row " +
                                std::to_string(row) + ", column " +
                                std::to_string(col));
  }
  if (!std::isfinite(value)) {
    throw std::invalid_argument("non-finite cell at row " +
                                std::to_string(row) + ", column " +
                                std::to_string(col));
  }
  return value;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> Dataset::targets() const {
  std::vector<double> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(inst.target);
  return out;
}

std::vector<InstanceId> Dataset::ids() const {
  std::vector<InstanceId> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(inst.id);
  return out;
}

Dataset LoadCsv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = SplitLine(line);
  std::size_t target_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == target_column) {
      target_idx = i;
      break;
    }
  }
  if (target_idx == header.size()) {
    throw std::invalid_argument("target column '" + target_column +
                                "' not found in " + path);
  }

  Dataset ds;
  ds.target_name = target_column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != target_idx) ds.feature_names.push_back(header[i]);
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitLine(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument(
          "row " + std::to_string(row) + " has " +
          std::to_string(cells.size()) + " cells, expected " +
          std::to_string(header.size()));
    }
    Instance inst;
    inst.id = static_cast<InstanceId>(ds.instances.size());
    inst.features.reserve(header.size() - 1);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double v = ParseCell(cells[i], row, i);
      if (i == target_idx) {
        inst.target = v;
      } else {
        inst.features.push_back(v);
      }
    }
    ds.instances.push_back(std::move(inst));
  }
  if (ds.instances.empty()) {
    throw std::invalid_argument("no data rows in " + path);
  }
  return ds;
}

void WriteCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t i = 0; i < dataset.feature_names.size(); ++i) {
    out << dataset.feature_names[i] << ',';
  }
  out << dataset.target_name << '\n';
  for (const auto& inst : dataset.instances) {
    for (double f : inst.features) out << FormatDouble(f) << ',';
    out << FormatDouble(inst.target) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

double Kurtosis(std::span<const double> values) {
  if (values.size() < 4) {
    throw std::invalid_argument("kurtosis requires at least 4 values");
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double c = v - mean;
    const double c2 = c * c;
    m2 += c2;
    m4 += c2 * c2;
  }
  m2 /= n;
  m4 /= n;
  if (m2 <= 0.0) {
    throw std::invalid_argument("kurtosis undefined for zero variance");
  }
  return m4 / (m2 * m2);
}

std::vector<std::pair<double, double>> CcdfPoints(
    std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("ccdf of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> points;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Fraction >= sorted[i] is everything from i onward.
    points.emplace_back(sorted[i],
                        static_cast<double>(sorted.size() - i) / n);
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    i = j;
  }
  return points;
}

FoldAssignment StratifiedKFold(const Dataset& dataset, int k, int n_strata,
                               std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (n_strata < 1) throw std::invalid_argument("n_strata must be positive");
  if (static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("more folds than instances");
  }

  // Sort by (target, id) so stratum boundaries are deterministic.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ia = dataset.instances[a];
    const auto& ib = dataset.instances[b];
    if (ia.target != ib.target) return ia.target < ib.target;
    return ia.id < ib.id;
  });

  FoldAssignment out;
  out.n_folds = k;
  rng::Engine engine(rng::DeriveSeed(seed, "kfold"));
  const std::size_t strata = std::min<std::size_t>(n_strata, n);
  for (std::size_t s = 0; s < strata; ++s) {
    const std::size_t lo = n * s / strata;
    const std::size_t hi = n * (s + 1) / strata;
    std::vector<std::size_t> stratum(order.begin() + lo, order.begin() + hi);
    engine.Shuffle(stratum);
    for (std::size_t j = 0; j < stratum.size(); ++j) {
      out.fold_of[dataset.instances[stratum[j]].id] =
          static_cast<int>(j % static_cast<std::size_t>(k));
    }
  }
  return out;
}

std::pair<Dataset, Dataset> SplitFold(const Dataset& dataset,
                                      const FoldAssignment& folds, int fold) {
  if (fold < 0 || fold >= folds.n_folds) {
    throw std::invalid_argument("fold index out of range");
  }
  Dataset train;
  Dataset test;
  train.feature_names = dataset.feature_names;
  train.target_name = dataset.target_name;
  test.feature_names = dataset.feature_names;
  test.target_name = dataset.target_name;
  for (const auto& inst : dataset.instances) {
    const auto it = folds.fold_of.find(inst.id);
    if (it == folds.fold_of.end()) {
      throw std::invalid_argument("instance missing from fold assignment");
    }
    (it->second == fold ? test : train).instances.push_back(inst);
  }
  return {std::move(train), std::move(test)};
}

Dataset GenerateSynthetic(std::size_t n, std::size_t d, double tail_index,
                          double noise_scale, std::uint64_t seed) {
  if (n < 10) throw std::invalid_argument("n must be at least 10");
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (!(tail_index > 0.0)) {
    throw std::invalid_argument("tail_index must be positive");
  }
  if (noise_scale < 0.0) {
    throw std::invalid_argument("noise_scale must be non-negative");
  }

  rng::Engine weight_rng(rng::DeriveSeed(seed, "synthetic-weights"));
  std::vector<double> weights(d);
  for (auto& w : weights) w = 0.5 + weight_rng.NextDouble();

  rng::Engine feature_rng(rng::DeriveSeed(seed, "synthetic-features"));
  rng::Engine noise_rng(rng::DeriveSeed(seed, "synthetic-noise"));

  Dataset ds;
  ds.target_name = "target";
  ds.feature_names.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    ds.feature_names.push_back("f" + std::to_string(j));
  }

  std::vector<double> scores(n);
  ds.instances.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Instance& inst = ds.instances[i];
    inst.id = static_cast<InstanceId>(i);
    inst.features.resize(d);
    double score = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      inst.features[j] = feature_rng.NextDouble();
      score += weights[j] * inst.features[j];
    }
    score += noise_scale * noise_rng.NextGaussian();
    scores[i] = score;
  }

  // Rank the noisy scores, then push the ranks through a Pareto quantile
  // function (scale 1, shape tail_index) so the target tail is heavy but
  // the ordering stays feature-predictable.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });
  for (std::size_t rank = 0; rank < n; ++rank) {
    const double p = (static_cast<double>(rank) + 0.5) /
                     static_cast<double>(n);
    ds.instances[order[rank]].target =
        std::pow(1.0 - p, -1.0 / tail_index);
  }
  return ds;
}

}  // namespace l2p
