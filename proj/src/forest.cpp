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

#include "l2p/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "l2p/parallel.hpp"

namespace l2p {
namespace {

// Column-major snapshot of the pair examples. CART spends its time in
// per-feature scans, so features live in contiguous columns.
struct PairMatrix {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> columns;       // columns[f * n + p]
  std::vector<std::uint8_t> labels;  // 1 for +1, 0 for -1

  const double* Column(std::size_t f) const { return columns.data() + f * n; }
};

PairMatrix BuildMatrix(std::span<const PairExample> pairs) {
  PairMatrix m;
  m.n = pairs.size();
  m.dim = pairs.front().features.size();
  if (m.dim == 0) throw std::invalid_argument("pairs have no features");
  m.columns.resize(m.dim * m.n);
  m.labels.resize(m.n);
  for (std::size_t p = 0; p < m.n; ++p) {
    const PairExample& pair = pairs[p];
    if (pair.features.size() != m.dim) {
      throw std::invalid_argument("inconsistent pair feature length");
    }
    if (pair.label != 1 && pair.label != -1) {
      throw std::invalid_argument("pair label must be +1 or -1");
    }
    for (std::size_t f = 0; f < m.dim; ++f) {
      m.columns[f * m.n + p] = pair.features[f];
    }
    m.labels[p] = pair.label == 1 ? 1 : 0;
  }
  return m;
}

// Indices of every column sorted by (value, index). Computed once per
// forest and filtered per tree, so node splits never sort.
std::vector<std::uint32_t> SortAllColumns(const PairMatrix& m) {
  std::vector<std::uint32_t> sorted(m.dim * m.n);
  for (std::size_t f = 0; f < m.dim; ++f) {
    std::uint32_t* begin = sorted.data() + f * m.n;
    std::iota(begin, begin + m.n, 0U);
    const double* col = m.Column(f);
    std::sort(begin, begin + m.n,
              [col](std::uint32_t a, std::uint32_t b) {
                if (col[a] != col[b]) return col[a] < col[b];
                return a < b;
              });
  }
  return sorted;
}

struct BestSplit {
  double score = -1.0;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t boundary = 0;  // elements of the sorted range going left
  std::uint64_t left_n = 0;
  std::uint64_t left_pos = 0;
};

struct PendingNode {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t node_id = 0;
  std::uint32_t depth = 0;
  std::uint64_t n_weighted = 0;
  std::uint64_t pos_weighted = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const PairMatrix& matrix,
              std::span<const std::uint32_t> sorted_all,
              const ForestConfig& config, int max_features)
      : matrix_(matrix),
        sorted_all_(sorted_all),
        config_(config),
        max_features_(max_features),
        counts_(matrix.n, 1U),
        goes_left_(matrix.n, 0) {}

  Tree Build(std::uint64_t tree_seed) {
    rng::Engine engine(tree_seed);
    if (config_.bootstrap) {
      counts_ = BootstrapCounts(engine, matrix_.n);
    }

    // In-bag filter of the forest-level sorted orders. All per-feature
    // arrays keep identical [start, end) node boundaries throughout.
    std::size_t n_active = 0;
    std::uint64_t total = 0;
    std::uint64_t positives = 0;
    for (std::size_t p = 0; p < matrix_.n; ++p) {
      const std::uint64_t c = counts_[p];
      if (c == 0) continue;
      ++n_active;
      total += c;
      positives += c * matrix_.labels[p];
    }
    order_.resize(matrix_.dim * n_active);
    for (std::size_t f = 0; f < matrix_.dim; ++f) {
      const std::uint32_t* src = sorted_all_.data() + f * matrix_.n;
      std::uint32_t* dst = order_.data() + f * n_active;
      std::size_t w = 0;
      for (std::size_t p = 0; p < matrix_.n; ++p) {
        if (counts_[src[p]] != 0) dst[w++] = src[p];
      }
    }
    n_active_ = n_active;
    scratch_.resize(n_active);

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<PendingNode> stack;
    stack.push_back({0, static_cast<std::uint32_t>(n_active), 0, 0, total,
                     positives});
    while (!stack.empty()) {
      const PendingNode node = stack.back();
      stack.pop_back();
      GrowNode(node, engine, tree, stack);
    }
    return tree;
  }

 private:
  void GrowNode(const PendingNode& node, rng::Engine& engine, Tree& tree,
                std::vector<PendingNode>& stack) {
    const double prob = static_cast<double>(node.pos_weighted) /
                        static_cast<double>(node.n_weighted);
    const bool pure =
        node.pos_weighted == 0 || node.pos_weighted == node.n_weighted;
    const bool depth_capped =
        config_.max_depth > 0 &&
        node.depth >= static_cast<std::uint32_t>(config_.max_depth);
    const std::uint64_t min_leaf =
        static_cast<std::uint64_t>(config_.min_samples_leaf);
    if (pure || depth_capped || node.n_weighted < 2 * min_leaf) {
      MakeLeaf(tree, node.node_id, prob);
      return;
    }

    const BestSplit best = FindBestSplit(node, engine);
    if (best.score < 0.0) {
      MakeLeaf(tree, node.node_id, prob);
      return;
    }

    const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& parent = tree.nodes[node.node_id];
    parent.feature = static_cast<std::int32_t>(best.feature);
    parent.threshold = best.threshold;
    parent.left = left_id;
    parent.right = left_id + 1;

    Partition(node, best);

    const auto mid = static_cast<std::uint32_t>(node.start + best.boundary);
    // Right first so the left child is grown next (preorder).
    stack.push_back({mid, node.end, static_cast<std::uint32_t>(left_id + 1),
                     node.depth + 1, node.n_weighted - best.left_n,
                     node.pos_weighted - best.left_pos});
    stack.push_back({node.start, mid, static_cast<std::uint32_t>(left_id),
                     node.depth + 1, best.left_n, best.left_pos});
  }

  static void MakeLeaf(Tree& tree, std::uint32_t node_id, double prob) {
    TreeNode& leaf = tree.nodes[node_id];
    leaf.feature = -1;
    leaf.prob = prob;
  }

  BestSplit FindBestSplit(const PendingNode& node, rng::Engine& engine) {
    // Partial Fisher-Yates draw of the candidate feature subset.
    feature_perm_.resize(matrix_.dim);
    std::iota(feature_perm_.begin(), feature_perm_.end(), 0U);
    for (int j = 0; j < max_features_; ++j) {
      const std::size_t pick =
          j + engine.NextBelow(matrix_.dim - static_cast<std::size_t>(j));
      std::swap(feature_perm_[j], feature_perm_[pick]);
    }

    const std::uint64_t min_leaf =
        static_cast<std::uint64_t>(config_.min_samples_leaf);
    BestSplit best;
    for (int j = 0; j < max_features_; ++j) {
      const std::size_t f = feature_perm_[j];
      const std::uint32_t* arr = order_.data() + f * n_active_;
      const double* col = matrix_.Column(f);
      double prev_v = col[arr[node.start]];
      std::uint64_t cum_n = 0;
      std::uint64_t cum_pos = 0;
      for (std::uint32_t e = node.start; e < node.end; ++e) {
        const std::uint32_t idx = arr[e];
        const double v = col[idx];
        if (v != prev_v) {
          // Candidate boundary between two distinct values. Maximizing
          // sum over children of (pos^2 + neg^2) / size is equivalent to
          // minimizing the weighted Gini impurity.
          const std::uint64_t right_n = node.n_weighted - cum_n;
          if (cum_n >= min_leaf && right_n >= min_leaf) {
            const auto lp = static_cast<double>(cum_pos);
            const auto ln = static_cast<double>(cum_n - cum_pos);
            const auto rp = static_cast<double>(node.pos_weighted - cum_pos);
            const auto rn = static_cast<double>(right_n -
                                                (node.pos_weighted - cum_pos));
            const double score =
                (lp * lp + ln * ln) / static_cast<double>(cum_n) +
                (rp * rp + rn * rn) / static_cast<double>(right_n);
            if (score > best.score) {
              double thr = prev_v + (v - prev_v) * 0.5;
              if (thr >= v) thr = prev_v;
              best.score = score;
              best.feature = f;
              best.threshold = thr;
              best.boundary = e - node.start;
              best.left_n = cum_n;
              best.left_pos = cum_pos;
            }
          }
          prev_v = v;
        }
        const std::uint64_t c = counts_[idx];
        cum_n += c;
        cum_pos += c * matrix_.labels[idx];
      }
    }
    return best;
  }

  void Partition(const PendingNode& node, const BestSplit& best) {
    // The split feature's array is value-sorted, so its left block is
    // already the prefix; mark it and stably partition the others.
    const std::uint32_t* split_arr =
        order_.data() + best.feature * n_active_;
    for (std::size_t e = node.start; e < node.start + best.boundary; ++e) {
      goes_left_[split_arr[e]] = 1;
    }
    for (std::size_t f = 0; f < matrix_.dim; ++f) {
      if (f == best.feature) continue;
      std::uint32_t* arr = order_.data() + f * n_active_;
      std::size_t w = node.start;
      std::size_t spill = 0;
      for (std::size_t e = node.start; e < node.end; ++e) {
        const std::uint32_t idx = arr[e];
        if (goes_left_[idx]) {
          arr[w++] = idx;
        } else {
          scratch_[spill++] = idx;
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + spill, arr + w);
    }
    for (std::size_t e = node.start; e < node.start + best.boundary; ++e) {
      goes_left_[split_arr[e]] = 0;
    }
  }

  const PairMatrix& matrix_;
  std::span<const std::uint32_t> sorted_all_;
  const ForestConfig& config_;
  int max_features_;
  std::size_t n_active_ = 0;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint32_t> feature_perm_;
  std::vector<std::uint8_t> goes_left_;
};

}  // namespace

double Tree::Prob(std::span<const double> x) const {
  std::size_t at = 0;
  while (!nodes[at].IsLeaf()) {
    const TreeNode& node = nodes[at];
    at = x[node.feature] <= node.threshold
             ? static_cast<std::size_t>(node.left)
             : static_cast<std::size_t>(node.right);
  }
  return nodes[at].prob;
}

double RandomForestModel::PredictProb(std::span<const double> features) const {
  if (features.size() != dim_) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  double sum = 0.0;
  for (const Tree& tree : trees_) sum += tree.Prob(features);
  return sum / static_cast<double>(trees_.size());
}

std::vector<std::uint32_t> BootstrapCounts(rng::Engine& engine,
                                           std::size_t n) {
  std::vector<std::uint32_t> counts(n, 0U);
  for (std::size_t i = 0; i < n; ++i) ++counts[engine.NextBelow(n)];
  return counts;
}

RandomForestModel TrainForest(std::span<const PairExample> pairs,
                              const ForestConfig& config, std::uint64_t seed) {
  if (pairs.empty()) throw std::invalid_argument("no training pairs");
  if (config.n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (config.min_samples_leaf < 1) {
    throw std::invalid_argument("min_samples_leaf must be >= 1");
  }
  if (config.max_depth < 0) {
    throw std::invalid_argument("max_depth must be >= 0");
  }
  const PairMatrix matrix = BuildMatrix(pairs);

  int max_features = config.max_features;
  if (max_features == 0) {
    max_features = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(matrix.dim))));
  }
  if (max_features < 1 || static_cast<std::size_t>(max_features) > matrix.dim) {
    throw std::invalid_argument("max_features out of range");
  }

  const std::vector<std::uint32_t> sorted_all = SortAllColumns(matrix);

  std::vector<Tree> trees(config.n_trees);
  ParallelFor(static_cast<std::size_t>(config.n_trees), [&](std::size_t t) {
    TreeBuilder builder(matrix, sorted_all, config, max_features);
    trees[t] = builder.Build(rng::DeriveSeed(seed, "tree", t));
  });
  return RandomForestModel(config, matrix.dim, std::move(trees));
}

std::pair<int, double> PredictPair(const PreferenceModel& model,
                                   std::span<const double> f_i,
                                   std::span<const double> f_q) {
  if (f_i.size() != f_q.size() || f_i.size() * 2 != model.dim()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  std::vector<double> x;
  x.reserve(model.dim());
  x.insert(x.end(), f_i.begin(), f_i.end());
  x.insert(x.end(), f_q.begin(), f_q.end());
  const double prob = model.PredictProb(x);
  return {prob >= 0.5 ? +1 : -1, prob};
}

double ClassifierAccuracy(const PreferenceModel& model,
                          std::span<const PairExample> pairs) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  std::size_t hits = 0;
  for (const PairExample& pair : pairs) {
    if (model.PredictLabel(pair.features) == pair.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

}  // namespace l2p
