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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "l2p/forest.hpp"
#include "l2p/pairs.hpp"
#include "l2p/random.hpp"
#include "l2p/serialize.hpp"

using namespace l2p;

namespace {

// Pairs whose label depends only on one coordinate of the concatenated
// vector: +1 iff features[0] > 0.5. A depth-1 stump separates them exactly.
std::vector<PairExample> MakeStumpPairs(int n, std::uint64_t seed) {
  rng::Engine engine(seed);
  std::vector<PairExample> pairs;
  for (int i = 0; i < n; ++i) {
    PairExample p;
    p.left_id = 2 * i;
    p.right_id = 2 * i + 1;
    p.features = {engine.NextDouble(), engine.NextDouble(),
                  engine.NextDouble(), engine.NextDouble()};
    if (std::abs(p.features[0] - 0.5) < 0.01) {
      --i;
      continue;
    }
    p.label = p.features[0] > 0.5 ? +1 : -1;
    pairs.push_back(p);
  }
  return pairs;
}

// Rank pairs in one dimension: label = +1 iff left value > right value,
// with a margin so the boundary region is empty.
std::vector<PairExample> MakeRankPairs(int n, std::uint64_t seed) {
  rng::Engine engine(seed);
  std::vector<PairExample> pairs;
  for (int i = 0; i < n; ++i) {
    const double a = engine.NextDouble();
    const double b = engine.NextDouble();
    if (std::abs(a - b) < 0.05) {
      --i;
      continue;
    }
    PairExample p;
    p.left_id = 2 * i;
    p.right_id = 2 * i + 1;
    p.features = {a, b};
    p.label = a > b ? +1 : -1;
    pairs.push_back(p);
  }
  return pairs;
}

std::vector<PairExample> MakeCoinPairs(int n, std::uint64_t seed) {
  rng::Engine engine(seed);
  std::vector<PairExample> pairs;
  for (int i = 0; i < n; ++i) {
    PairExample p;
    p.left_id = 2 * i;
    p.right_id = 2 * i + 1;
    p.features = {engine.NextDouble(), engine.NextDouble(),
                  engine.NextDouble(), engine.NextDouble()};
    p.label = engine.NextDouble() < 0.5 ? +1 : -1;
    pairs.push_back(p);
  }
  return pairs;
}

// Exhaustive depth-1 oracle: best accuracy of any single-feature threshold
// rule over both polarities.
double BestStumpAccuracy(const std::vector<PairExample>& pairs) {
  const std::size_t n = pairs.size();
  const std::size_t dim = pairs.front().features.size();
  double best = 0.0;
  for (std::size_t f = 0; f < dim; ++f) {
    std::vector<std::pair<double, int>> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = {pairs[i].features[f], pairs[i].label};
    }
    std::sort(vals.begin(), vals.end());
    std::size_t total_pos = 0;
    for (const auto& [v, y] : vals) total_pos += y == +1;
    // Boundary b: left block is vals[0..b), rule "left side predicts s".
    std::size_t pos_left = 0;
    for (std::size_t b = 0; b <= n; ++b) {
      if (b > 0 && b < n && vals[b - 1].first == vals[b].first) {
        pos_left += vals[b - 1].second == +1;
        continue;
      }
      if (b > 0) pos_left += vals[b - 1].second == +1;
      const std::size_t neg_left = b - pos_left;
      const std::size_t pos_right = total_pos - pos_left;
      const std::size_t neg_right = (n - b) - pos_right;
      const std::size_t correct_a = pos_left + neg_right;   // left -> +1
      const std::size_t correct_b = neg_left + pos_right;   // left -> -1
      best = std::max(best, static_cast<double>(std::max(correct_a,
                                                         correct_b)) /
                                static_cast<double>(n));
    }
  }
  return best;
}

// Gini split score used by training: sum over children of
// (pos^2 + neg^2) / n_child. Higher is better.
double SplitScore(const std::vector<PairExample>& pairs, int feature,
                  double threshold) {
  double lp = 0, ln = 0, rp = 0, rn = 0;
  for (const auto& p : pairs) {
    const bool left = p.features[static_cast<std::size_t>(feature)] <=
                      threshold;
    if (left) {
      (p.label == +1 ? lp : ln) += 1.0;
    } else {
      (p.label == +1 ? rp : rn) += 1.0;
    }
  }
  const double nl = lp + ln;
  const double nr = rp + rn;
  double score = 0.0;
  if (nl > 0) score += (lp * lp + ln * ln) / nl;
  if (nr > 0) score += (rp * rp + rn * rn) / nr;
  return score;
}

// Exhaustive best split score over every feature and every threshold that
// separates two distinct adjacent values.
double BestSplitScore(const std::vector<PairExample>& pairs) {
  const std::size_t dim = pairs.front().features.size();
  double best = 0.0;
  for (std::size_t f = 0; f < dim; ++f) {
    std::vector<double> vals;
    for (const auto& p : pairs) vals.push_back(p.features[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      const double thr = vals[i] + (vals[i + 1] - vals[i]) / 2.0;
      best = std::max(best, SplitScore(pairs, static_cast<int>(f),
                                       std::min(thr, vals[i])));
      best = std::max(best, SplitScore(pairs, static_cast<int>(f), thr));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("forest memorizes a stump-separable training set") {
  const auto pairs = MakeStumpPairs(200, 1);
  CHECK(BestStumpAccuracy(pairs) == 1.0);  // construction sanity
  const auto model = TrainForest(pairs, {}, 7);
  CHECK(ClassifierAccuracy(model, pairs) >= 0.99);
}

TEST_CASE("forest memorizes rank pairs and orients probes") {
  const auto pairs = MakeRankPairs(200, 3);
  const auto model = TrainForest(pairs, {}, 11);
  CHECK(ClassifierAccuracy(model, pairs) >= 0.99);

  const auto hi_lo = PredictPair(model, std::vector<double>{0.9},
                                 std::vector<double>{0.1});
  CHECK(hi_lo.first == +1);
  CHECK(hi_lo.second >= 0.5);
  const auto lo_hi = PredictPair(model, std::vector<double>{0.1},
                                 std::vector<double>{0.9});
  CHECK(lo_hi.first == -1);
  CHECK(lo_hi.second < 0.5);

  // Swapping the halves flips the label on clearly separated probes.
  rng::Engine engine(13);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = engine.NextDouble();
    const double b = engine.NextDouble();
    if (std::abs(a - b) < 0.2) continue;
    const auto ab = PredictPair(model, std::vector<double>{a},
                                std::vector<double>{b});
    const auto ba = PredictPair(model, std::vector<double>{b},
                                std::vector<double>{a});
    CHECK(ab.first == -ba.first);
    CHECK(ab.first == (a > b ? +1 : -1));
  }
}

TEST_CASE("coin-flip labels stay near chance on held-out pairs") {
  const auto train = MakeCoinPairs(200, 17);
  const auto test = MakeCoinPairs(200, 18);
  const auto model = TrainForest(train, {}, 19);
  const double acc = ClassifierAccuracy(model, test);
  CHECK(acc >= 0.4);
  CHECK(acc <= 0.6);
}

TEST_CASE("single positive pair yields the constant +1 model") {
  std::vector<PairExample> pairs(1);
  pairs[0].features = {0.2, 0.8};
  pairs[0].label = +1;
  const auto model = TrainForest(pairs, {}, 5);
  const auto out = PredictPair(model, std::vector<double>{0.9},
                               std::vector<double>{0.9});
  CHECK(out.first == +1);
  CHECK(out.second == 1.0);
  CHECK(model.PredictProb(std::vector<double>{0.0, 0.0}) == 1.0);
}

TEST_CASE("single negative pair yields the constant -1 model") {
  std::vector<PairExample> pairs(1);
  pairs[0].features = {0.2, 0.8};
  pairs[0].label = -1;
  const auto model = TrainForest(pairs, {}, 5);
  CHECK(model.PredictProb(std::vector<double>{0.5, 0.5}) == 0.0);
  CHECK(model.PredictLabel(std::vector<double>{0.5, 0.5}) == -1);
}

TEST_CASE("constant model scores half on balanced pairs") {
  std::vector<PairExample> one(1);
  one[0].features = {0.0, 0.0};
  one[0].label = +1;
  const auto model = TrainForest(one, {}, 2);

  rng::Engine engine(23);
  std::vector<PairExample> eval(100);
  for (std::size_t i = 0; i < eval.size(); ++i) {
    eval[i].features = {engine.NextDouble(), engine.NextDouble()};
    eval[i].label = i % 2 == 0 ? +1 : -1;
  }
  CHECK(ClassifierAccuracy(model, eval) == doctest::Approx(0.5));
}

TEST_CASE("training rejects empty input and bad config") {
  CHECK_THROWS(TrainForest({}, {}, 1));
  const auto pairs = MakeRankPairs(10, 29);
  ForestConfig bad;
  bad.n_trees = 0;
  CHECK_THROWS(TrainForest(pairs, bad, 1));
  bad = {};
  bad.max_features = 3;  // dim is 2
  CHECK_THROWS(TrainForest(pairs, bad, 1));
  bad = {};
  bad.min_samples_leaf = 0;
  CHECK_THROWS(TrainForest(pairs, bad, 1));
  bad = {};
  bad.max_depth = -1;
  CHECK_THROWS(TrainForest(pairs, bad, 1));
}

TEST_CASE("accuracy rejects empty input") {
  const auto pairs = MakeRankPairs(5, 31);
  const auto model = TrainForest(pairs, {}, 1);
  CHECK_THROWS(ClassifierAccuracy(model, {}));
}

TEST_CASE("prediction rejects dimension mismatches") {
  const auto pairs = MakeRankPairs(20, 37);
  const auto model = TrainForest(pairs, {}, 3);
  CHECK_THROWS(model.PredictProb(std::vector<double>{1.0, 2.0, 3.0}));
  CHECK_THROWS(PredictPair(model, std::vector<double>{1.0, 2.0},
                           std::vector<double>{3.0}));
}

TEST_CASE("training is deterministic in the seed") {
  const auto pairs = MakeStumpPairs(60, 41);
  ForestConfig config;
  config.n_trees = 12;
  const auto a = TrainForest(pairs, config, 100);
  const auto b = TrainForest(pairs, config, 100);
  REQUIRE(a.trees().size() == b.trees().size());
  for (std::size_t t = 0; t < a.trees().size(); ++t) {
    const auto& ta = a.trees()[t].nodes;
    const auto& tb = b.trees()[t].nodes;
    REQUIRE(ta.size() == tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) {
      CHECK(ta[i].feature == tb[i].feature);
      CHECK(ta[i].left == tb[i].left);
      CHECK(ta[i].right == tb[i].right);
      CHECK(ta[i].threshold == tb[i].threshold);
      CHECK(ta[i].prob == tb[i].prob);
    }
  }

  const auto c = TrainForest(pairs, config, 101);
  bool any_diff = false;
  rng::Engine engine(43);
  for (int trial = 0; trial < 50 && !any_diff; ++trial) {
    std::vector<double> x{engine.NextDouble(), engine.NextDouble(),
                          engine.NextDouble(), engine.NextDouble()};
    any_diff = a.PredictProb(x) != c.PredictProb(x);
  }
  CHECK(any_diff);
}

TEST_CASE("leaf probabilities re-trace from the bootstrap stream") {
  const auto pairs = MakeRankPairs(60, 47);
  ForestConfig config;
  config.n_trees = 5;
  const std::uint64_t seed = 55;
  const auto model = TrainForest(pairs, config, seed);
  REQUIRE(model.trees().size() == 5);

  for (std::size_t t = 0; t < model.trees().size(); ++t) {
    rng::Engine engine(rng::DeriveSeed(seed, "tree", t));
    const auto counts = BootstrapCounts(engine, pairs.size());

    // Route every in-bag sample to its leaf and tally labels.
    const auto& tree = model.trees()[t];
    std::map<std::size_t, std::pair<double, double>> leaf_tally;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (counts[i] == 0) continue;
      std::size_t node = 0;
      while (!tree.nodes[node].IsLeaf()) {
        const auto& nd = tree.nodes[node];
        const double v =
            pairs[i].features[static_cast<std::size_t>(nd.feature)];
        node = static_cast<std::size_t>(v <= nd.threshold ? nd.left
                                                          : nd.right);
      }
      auto& [pos, total] = leaf_tally[node];
      if (pairs[i].label == +1) pos += counts[i];
      total += counts[i];
    }

    std::size_t n_leaves = 0;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if (tree.nodes[i].IsLeaf()) ++n_leaves;
    }
    CHECK(leaf_tally.size() == n_leaves);  // no starved leaves
    for (const auto& [node, tally] : leaf_tally) {
      CHECK(tree.nodes[node].prob ==
            doctest::Approx(tally.first / tally.second).epsilon(1e-12));
    }
  }
}

TEST_CASE("depth-1 split is gini-optimal among all features") {
  for (std::uint64_t seed : {61u, 62u, 63u}) {
    const auto pairs = MakeCoinPairs(30, seed);
    ForestConfig config;
    config.n_trees = 1;
    config.max_depth = 1;
    config.bootstrap = false;
    config.max_features = static_cast<int>(pairs.front().features.size());
    const auto model = TrainForest(pairs, config, seed + 1000);
    const auto& nodes = model.trees().front().nodes;
    REQUIRE(!nodes.empty());
    if (nodes[0].IsLeaf()) continue;  // degenerate labels, nothing to split
    std::vector<PairExample> mutable_pairs(pairs.begin(), pairs.end());
    const double chosen =
        SplitScore(mutable_pairs, nodes[0].feature, nodes[0].threshold);
    const double best = BestSplitScore(mutable_pairs);
    CHECK(chosen == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("forest probability is the mean of tree probabilities") {
  const auto pairs = MakeRankPairs(40, 67);
  ForestConfig config;
  config.n_trees = 7;
  const auto model = TrainForest(pairs, config, 71);
  rng::Engine engine(73);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x{engine.NextDouble(), engine.NextDouble()};
    double sum = 0.0;
    for (const auto& tree : model.trees()) sum += tree.Prob(x);
    CHECK(model.PredictProb(x) ==
          doctest::Approx(sum / 7.0).epsilon(1e-12));
  }
}

TEST_CASE("label follows the half rule") {
  const auto pairs = MakeRankPairs(40, 79);
  const auto model = TrainForest(pairs, {}, 83);
  rng::Engine engine(89);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<double> x{engine.NextDouble(), engine.NextDouble()};
    const double prob = model.PredictProb(x);
    CHECK(model.PredictLabel(x) == (prob >= 0.5 ? +1 : -1));
  }
}

TEST_CASE("forest json round-trip preserves structure and output") {
  const auto pairs = MakeStumpPairs(50, 97);
  ForestConfig config;
  config.n_trees = 9;
  config.max_depth = 6;
  const auto model = TrainForest(pairs, config, 101);
  const auto j = ForestToJson(model);
  const auto restored = ForestFromJson(j);

  REQUIRE(restored.trees().size() == model.trees().size());
  CHECK(restored.dim() == model.dim());
  CHECK(restored.config().n_trees == model.config().n_trees);
  for (std::size_t t = 0; t < model.trees().size(); ++t) {
    const auto& ta = model.trees()[t].nodes;
    const auto& tb = restored.trees()[t].nodes;
    REQUIRE(ta.size() == tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) {
      CHECK(ta[i].feature == tb[i].feature);
      CHECK(ta[i].threshold == tb[i].threshold);
      CHECK(ta[i].prob == tb[i].prob);
    }
  }
  rng::Engine engine(103);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x{engine.NextDouble(), engine.NextDouble(),
                                engine.NextDouble(), engine.NextDouble()};
    CHECK(model.PredictProb(x) == restored.PredictProb(x));
  }
  CHECK_THROWS(ForestFromJson(nlohmann::json::object()));
}
