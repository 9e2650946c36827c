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
#include <vector>

#include "doctest.h"
#include "l2p/dataset.hpp"
#include "l2p/forest.hpp"
#include "l2p/placement.hpp"
#include "l2p/random.hpp"

using namespace l2p;

namespace {

// Perfect pairwise judge for one-dimensional data whose single feature
// equals the target: P(left outranks right) is 1 or 0, ties count as not
// greater.
class OracleModel final : public PreferenceModel {
 public:
  std::size_t dim() const override { return 2; }
  double PredictProb(std::span<const double> x) const override {
    return x[0] > x[1] ? 1.0 : 0.0;
  }
};

Dataset LineDataset(const std::vector<double>& targets) {
  Dataset ds;
  ds.feature_names = {"x"};
  ds.target_name = "target";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ds.instances.push_back(
        {static_cast<InstanceId>(i), {targets[i]}, targets[i]});
  }
  return ds;
}

std::vector<Verdict> OracleVerdicts(const std::vector<double>& targets,
                                    double q) {
  std::vector<Verdict> verdicts;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int label = targets[i] > q ? +1 : -1;
    verdicts.push_back({static_cast<InstanceId>(i), label,
                        label == +1 ? 1.0 : 0.0});
  }
  return verdicts;
}

std::size_t Argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("partition of three distinct targets") {
  const std::vector<double> targets{10.0, 1.0, 5.0};
  const std::vector<InstanceId> ids{7, 8, 9};
  const auto partition = BuildPartition(targets, ids);
  CHECK(partition.edges == std::vector<double>{1.0, 5.0, 10.0});
  CHECK(partition.NumEdges() == 3);
  CHECK(partition.NumRegions() == 4);
  REQUIRE(partition.edge_instances.size() == 3);
  CHECK(partition.edge_instances[0] == std::vector<InstanceId>{8});
  CHECK(partition.edge_instances[1] == std::vector<InstanceId>{9});
  CHECK(partition.edge_instances[2] == std::vector<InstanceId>{7});
  CHECK(partition.edge_of.at(8) == 0);
  CHECK(partition.edge_of.at(9) == 1);
  CHECK(partition.edge_of.at(7) == 2);
}

TEST_CASE("tied targets collapse onto one edge") {
  const std::vector<double> targets{5.0, 5.0, 5.0, 7.0};
  const auto partition = BuildPartition(targets);
  CHECK(partition.edges == std::vector<double>{5.0, 7.0});
  CHECK(partition.NumRegions() == 3);
  CHECK(partition.edge_instances[0] == std::vector<InstanceId>{0, 1, 2});
  CHECK(partition.edge_instances[1] == std::vector<InstanceId>{3});
}

TEST_CASE("partition rejects degenerate input") {
  CHECK_THROWS(BuildPartition(std::vector<double>{3.0}));
  CHECK_THROWS(BuildPartition(std::vector<double>{4.0, 4.0, 4.0}));
  const std::vector<double> targets{1.0, 2.0};
  const std::vector<InstanceId> dup_ids{5, 5};
  CHECK_THROWS(BuildPartition(targets, dup_ids));
  const std::vector<InstanceId> short_ids{5};
  CHECK_THROWS(BuildPartition(targets, short_ids));
}

TEST_CASE("dataset partition matches the span overload") {
  const Dataset ds = LineDataset({2.0, 9.0, 4.0});
  const auto a = BuildPartition(ds);
  const auto b = BuildPartition(ds.targets(), ds.ids());
  CHECK(a.edges == b.edges);
  CHECK(a.edge_instances == b.edge_instances);
}

TEST_CASE("hand vote trace lands between the lower edges") {
  const auto partition = BuildPartition(std::vector<double>{1.0, 5.0, 10.0});
  // Query target 3: the instance at edge 1 is below it, the others above.
  const std::vector<Verdict> verdicts{
      {0, -1, 0.0}, {1, +1, 1.0}, {2, +1, 1.0}};
  const auto tally = Vote(partition, verdicts, VoteMode::kPlain);
  CHECK(tally.votes == std::vector<double>{1.0, 3.0, 1.0, -1.0});

  const auto placement = Place(tally, partition);
  CHECK(placement.region == 1);
  CHECK(placement.predicted_value == 3.0);
  REQUIRE(placement.lower_edge.has_value());
  REQUIRE(placement.upper_edge.has_value());
  CHECK(*placement.lower_edge == 1.0);
  CHECK(*placement.upper_edge == 5.0);
}

TEST_CASE("unanimous verdicts drive the extreme regions") {
  const auto partition = BuildPartition(std::vector<double>{1.0, 5.0, 10.0});
  const std::vector<Verdict> all_below{
      {0, -1, 0.0}, {1, -1, 0.0}, {2, -1, 0.0}};
  const auto tally = Vote(partition, all_below, VoteMode::kPlain);
  CHECK(tally.votes.back() == 3.0);
  for (std::size_t r = 0; r + 1 < tally.votes.size(); ++r) {
    CHECK(tally.votes[r] < 3.0);
  }
  const auto placement = Place(tally, partition);
  CHECK(placement.region == 3);
  CHECK(placement.predicted_value == 10.0);  // clamp to the top edge
  CHECK(!placement.upper_edge.has_value());
  CHECK(*placement.lower_edge == 10.0);

  const std::vector<Verdict> all_above{
      {0, +1, 1.0}, {1, +1, 1.0}, {2, +1, 1.0}};
  const auto low = Place(Vote(partition, all_above, VoteMode::kPlain),
                         partition);
  CHECK(low.region == 0);
  CHECK(low.predicted_value == 1.0);  // clamp to the bottom edge
  CHECK(!low.lower_edge.has_value());
}

TEST_CASE("weighted voting with even probabilities") {
  const auto partition = BuildPartition(std::vector<double>{1.0, 5.0, 10.0});
  const std::vector<Verdict> verdicts{
      {0, +1, 0.5}, {1, +1, 0.5}, {2, +1, 0.5}};
  const auto tally = Vote(partition, verdicts, VoteMode::kWeighted);
  REQUIRE(tally.votes.size() == 4);
  CHECK(tally.votes[0] == doctest::Approx(11.0 / 12.0).epsilon(1e-12));
  CHECK(tally.votes[1] == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(tally.votes[2] == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(tally.votes[3] == doctest::Approx(11.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("tied winners average their clamped midpoints") {
  const auto partition = BuildPartition(std::vector<double>{1.0, 5.0, 10.0});
  VoteTally tally;
  tally.votes = {0.0, 2.0, 2.0, 0.0};
  const auto averaged = Place(tally, partition);
  CHECK(averaged.region == 1);  // lowest winner is reported
  CHECK(averaged.predicted_value == doctest::Approx(5.25));

  const auto lowest = Place(tally, partition, TieRule::kLowestRegion);
  CHECK(lowest.region == 1);
  CHECK(lowest.predicted_value == 3.0);
}

TEST_CASE("vote validates its inputs") {
  const auto partition = BuildPartition(std::vector<double>{1.0, 2.0});
  CHECK_THROWS(Vote(partition, {}, VoteMode::kPlain));
  const std::vector<Verdict> unknown{{42, +1, 1.0}};
  CHECK_THROWS(Vote(partition, unknown, VoteMode::kPlain));
  const std::vector<Verdict> dup{{0, +1, 1.0}, {0, -1, 0.0}};
  CHECK_THROWS(Vote(partition, dup, VoteMode::kPlain));
  const std::vector<Verdict> bad_label{{0, 0, 0.5}};
  CHECK_THROWS(Vote(partition, bad_label, VoteMode::kPlain));
  const std::vector<Verdict> bad_prob{{0, +1, 1.5}};
  CHECK_THROWS(Vote(partition, bad_prob, VoteMode::kWeighted));
  const std::vector<Verdict> neg_prob{{0, +1, -0.5}};
  CHECK_THROWS(Vote(partition, neg_prob, VoteMode::kWeighted));

  VoteTally short_tally;
  short_tally.votes = {1.0, 2.0};
  CHECK_THROWS(Place(short_tally, partition));
}

TEST_CASE("plain tallies keep parity with the voter count") {
  const std::vector<double> targets{3.0, 1.0, 4.0, 1.5, 9.0, 2.6, 5.0};
  const auto partition = BuildPartition(targets);
  const auto verdicts = OracleVerdicts(targets, 2.0);
  const auto tally = Vote(partition, verdicts, VoteMode::kPlain);
  const int n = static_cast<int>(targets.size());
  for (double v : tally.votes) {
    CHECK(std::abs(v) <= n);
    CHECK((static_cast<long long>(v) - n) % 2 == 0);
  }
}

TEST_CASE("flipping one verdict shifts the tally by exactly two") {
  const std::vector<double> targets{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  const auto partition = BuildPartition(targets);
  auto verdicts = OracleVerdicts(targets, 3.5);
  const auto before = Vote(partition, verdicts, VoteMode::kPlain);

  for (std::size_t flip = 0; flip < verdicts.size(); ++flip) {
    auto mutated = verdicts;
    const int old_label = mutated[flip].label;
    mutated[flip].label = -old_label;
    const auto after = Vote(partition, mutated, VoteMode::kPlain);
    const std::size_t e = partition.edge_of.at(mutated[flip].id);
    for (std::size_t r = 0; r < after.votes.size(); ++r) {
      const double expected =
          before.votes[r] + (r <= e ? -2.0 : 2.0) * old_label;
      CHECK(after.votes[r] == expected);
    }
  }
}

TEST_CASE("oracle verdicts give a strictly unimodal tally") {
  rng::Engine engine(71);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + engine.NextBelow(9);
    std::vector<double> targets(n);
    for (auto& t : targets) t = engine.NextDouble() * 100.0;
    std::sort(targets.begin(), targets.end());
    bool distinct = true;
    for (std::size_t i = 1; i < n; ++i) distinct &= targets[i - 1] != targets[i];
    if (!distinct) continue;

    const double q = engine.NextDouble() * 120.0 - 10.0;
    if (std::find(targets.begin(), targets.end(), q) != targets.end()) {
      continue;
    }
    std::size_t true_region = 0;
    while (true_region < n && targets[true_region] < q) ++true_region;

    const auto partition = BuildPartition(targets);
    const auto tally =
        Vote(partition, OracleVerdicts(targets, q), VoteMode::kPlain);

    // Peak of n at the true region, dropping by exactly 2 per edge crossed.
    REQUIRE(tally.votes.size() == n + 1);
    for (std::size_t r = 0; r <= n; ++r) {
      const double dist = static_cast<double>(
          r > true_region ? r - true_region : true_region - r);
      CHECK(tally.votes[r] == static_cast<double>(n) - 2.0 * dist);
    }
    CHECK(Argmax(tally.votes) == true_region);
  }
}

TEST_CASE("weighted zero-one votes agree with plain votes at the argmax") {
  rng::Engine engine(73);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + engine.NextBelow(7);
    std::vector<double> targets(n);
    for (auto& t : targets) t = std::floor(engine.NextDouble() * 50.0);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.size() < 2) continue;

    const double q = engine.NextDouble() * 60.0 - 5.0;
    if (std::find(targets.begin(), targets.end(), q) != targets.end()) {
      continue;
    }
    const auto verdicts = OracleVerdicts(targets, q);
    const auto partition = BuildPartition(targets);
    const auto plain = Vote(partition, verdicts, VoteMode::kPlain);
    const auto weighted = Vote(partition, verdicts, VoteMode::kWeighted);

    // Brute-force re-evaluation of the weighted spread.
    const std::size_t m = targets.size();
    std::vector<double> expected(m + 1, 0.0);
    for (const Verdict& v : verdicts) {
      const std::size_t e = partition.edge_of.at(v.id);
      const double p_below = v.prob_greater;
      for (std::size_t r = 0; r <= m; ++r) {
        if (r <= e) {
          expected[r] += p_below / static_cast<double>(e + 1);
        } else {
          expected[r] += (1.0 - p_below) / static_cast<double>(m - e);
        }
      }
    }
    REQUIRE(weighted.votes.size() == expected.size());
    for (std::size_t r = 0; r <= m; ++r) {
      CHECK(weighted.votes[r] ==
            doctest::Approx(expected[r]).epsilon(1e-12));
    }
    CHECK(Argmax(weighted.votes) == Argmax(plain.votes));
  }
}

TEST_CASE("oracle-driven prediction recovers the exact region") {
  const std::vector<double> targets{2.0, 4.0, 8.0, 16.0, 32.0};
  const Dataset train = LineDataset(targets);
  const OracleModel model;

  for (std::size_t j = 0; j + 1 < targets.size(); ++j) {
    const double q = 0.5 * (targets[j] + targets[j + 1]);
    const auto placement = Predict(model, train, std::vector<double>{q});
    CHECK(placement.region == j + 1);
    CHECK(placement.predicted_value == doctest::Approx(q));
  }

  const auto below = Predict(model, train, std::vector<double>{1.0});
  CHECK(below.region == 0);
  CHECK(below.predicted_value == 2.0);

  const auto above = Predict(model, train, std::vector<double>{99.0});
  CHECK(above.region == targets.size());
  CHECK(above.predicted_value == 32.0);

  // A query tied with the unique maximum target clamps to that edge.
  const auto tied = Predict(model, train, std::vector<double>{32.0});
  CHECK(tied.region == targets.size());
  CHECK(tied.predicted_value == 32.0);
}

TEST_CASE("prediction ignores training-instance order") {
  std::vector<double> targets{5.0, 1.0, 9.0, 3.0, 7.0, 2.0};
  Dataset train = LineDataset(targets);
  Dataset shuffled = train;
  rng::Engine engine(79);
  engine.Shuffle(shuffled.instances);
  const OracleModel model;

  for (double q : {0.5, 2.5, 4.0, 6.0, 8.0, 10.0}) {
    const auto a = Predict(model, train, std::vector<double>{q});
    const auto b = Predict(model, shuffled, std::vector<double>{q});
    CHECK(a.region == b.region);
    CHECK(a.predicted_value == b.predicted_value);
    CHECK(a.tally.votes == b.tally.votes);
  }
}

TEST_CASE("prediction validates dimensions and targets") {
  const Dataset train = LineDataset({1.0, 2.0, 3.0});
  const OracleModel model;
  CHECK_THROWS(Predict(model, train, std::vector<double>{1.0, 2.0}));
  const Dataset flat = LineDataset({4.0, 4.0});
  CHECK_THROWS(Predict(model, flat, std::vector<double>{1.0}));

  Dataset wide = train;
  wide.feature_names = {"a", "b"};
  for (auto& inst : wide.instances) inst.features = {1.0, 2.0};
  CHECK_THROWS(Predict(model, wide, std::vector<double>{1.0, 2.0}));
}

TEST_CASE("predicted values never leave the training range") {
  rng::Engine engine(83);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + engine.NextBelow(8);
    std::vector<double> targets(n);
    for (auto& t : targets) t = engine.NextGaussian() * 10.0;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.size() < 2) continue;
    const auto partition = BuildPartition(targets);

    std::vector<Verdict> verdicts;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const int label = engine.NextDouble() < 0.5 ? +1 : -1;
      verdicts.push_back({static_cast<InstanceId>(i), label,
                          label == +1 ? 1.0 : 0.0});
    }
    for (VoteMode mode : {VoteMode::kPlain, VoteMode::kWeighted}) {
      const auto placement = Place(Vote(partition, verdicts, mode),
                                   partition);
      CHECK(placement.predicted_value >= targets.front());
      CHECK(placement.predicted_value <= targets.back());
    }
  }
}

TEST_CASE("explain reports the bracketing instances") {
  const Dataset train = LineDataset({1.0, 5.0, 10.0});
  const OracleModel model;
  const auto placement = Predict(model, train, std::vector<double>{3.0});
  REQUIRE(placement.region == 1);

  const auto report = Explain(placement, train, 1);
  CHECK(report.region == 1);
  CHECK(report.predicted_value == 3.0);
  REQUIRE(report.below.size() == 1);
  REQUIRE(report.above.size() == 1);
  CHECK(report.below[0].id == 0);
  CHECK(report.below[0].target == 1.0);
  CHECK(report.above[0].id == 1);
  CHECK(report.above[0].target == 5.0);
  CHECK(report.above[0].features == std::vector<double>{5.0});
}

TEST_CASE("explain at the bottom region has no lower side") {
  const Dataset train = LineDataset({1.0, 5.0, 10.0});
  const OracleModel model;
  const auto placement = Predict(model, train, std::vector<double>{0.5});
  REQUIRE(placement.region == 0);
  const auto report = Explain(placement, train, 2);
  CHECK(!report.lower_edge.has_value());
  CHECK(report.below.empty());
  REQUIRE(report.above.size() == 2);
  CHECK(report.above[0].target == 1.0);
  CHECK(report.above[1].target == 5.0);
}

TEST_CASE("explain truncates and orders both sides") {
  std::vector<double> targets;
  for (int i = 1; i <= 10; ++i) targets.push_back(static_cast<double>(i));
  const Dataset train = LineDataset(targets);
  const OracleModel model;
  const auto placement = Predict(model, train, std::vector<double>{5.5});
  REQUIRE(placement.region == 5);

  const auto report = Explain(placement, train, 2);
  REQUIRE(report.below.size() == 2);
  REQUIRE(report.above.size() == 2);
  // Nearest rank first on both sides.
  CHECK(report.below[0].target == 5.0);
  CHECK(report.below[1].target == 4.0);
  CHECK(report.above[0].target == 6.0);
  CHECK(report.above[1].target == 7.0);

  const auto empty = Explain(placement, train, 0);
  CHECK(empty.below.empty());
  CHECK(empty.above.empty());
  CHECK_THROWS(Explain(placement, train, -1));
}
