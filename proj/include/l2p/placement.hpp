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

#ifndef L2P_PLACEMENT_HPP_
#define L2P_PLACEMENT_HPP_

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "l2p/dataset.hpp"
#include "l2p/forest.hpp"

namespace l2p {

// The target axis cut at the m distinct training targets (edges), giving
// m+1 regions: one below the lowest edge, one between each adjacent pair,
// one above the highest.
struct BinPartition {
  std::vector<double> edges;  // strictly increasing
  std::vector<std::vector<InstanceId>> edge_instances;  // per edge, id order
  std::unordered_map<InstanceId, std::size_t> edge_of;

  std::size_t NumEdges() const { return edges.size(); }
  std::size_t NumRegions() const { return edges.size() + 1; }
};

struct VoteTally {
  std::vector<double> votes;  // one per region
};

// One training instance's view of the query: label +1 means the instance's
// target is predicted to exceed the query's, prob_greater is the
// classifier's probability of that event.
struct Verdict {
  InstanceId id = 0;
  int label = 0;
  double prob_greater = 0.0;
};

enum class VoteMode { kPlain, kWeighted };
enum class TieRule { kAverageMidpoints, kLowestRegion };

struct Placement {
  std::size_t region = 0;  // lowest winning region when tied
  double predicted_value = 0.0;
  VoteTally tally;
  std::optional<double> lower_edge;  // absent for the open extremes
  std::optional<double> upper_edge;
};

struct ExplainEntry {
  InstanceId id = 0;
  double target = 0.0;
  std::vector<double> features;
};

struct ExplainReport {
  std::size_t region = 0;
  double predicted_value = 0.0;
  std::optional<double> lower_edge;
  std::optional<double> upper_edge;
  std::vector<ExplainEntry> below;  // nearest rank first, at most top_n
  std::vector<ExplainEntry> above;
};

/// Builds the partition from training targets; ids identify the instances
/// tied at each edge.
BinPartition BuildPartition(std::span<const double> targets,
                            std::span<const InstanceId> ids);

/// Positional-id convenience overload (ids 0..n-1).
BinPartition BuildPartition(std::span<const double> targets);

BinPartition BuildPartition(const Dataset& train);

/// Accumulates verdicts into per-region votes. Plain mode: a +1 verdict at
/// edge e adds +1 to every region below e and -1 to every region above,
/// -1 reverses. Weighted mode spreads prob_greater over the regions below
/// and its complement over the regions above, each divided by the region
/// count on that side. Accumulation order is fixed by the partition, so
/// the tally is independent of verdict order.
VoteTally Vote(const BinPartition& partition,
               std::span<const Verdict> verdicts, VoteMode mode);

/// Argmax region of the tally. Interior regions predict their midpoint;
/// the open extremes clamp to the nearest edge; tied winners average
/// their (clamped) midpoints under the default rule.
Placement Place(const VoteTally& tally, const BinPartition& partition,
                TieRule tie_rule = TieRule::kAverageMidpoints);

/// Full stage-2 prediction: every training instance judges the query via
/// the pairwise model, the verdicts vote, and the winning region yields
/// the value. Runtime is linear in the training-set size.
Placement Predict(const PreferenceModel& model, const Dataset& train,
                  std::span<const double> q, VoteMode mode = VoteMode::kPlain,
                  TieRule tie_rule = TieRule::kAverageMidpoints);

/// Neighbor context for a placement: the bracketing edge instances and up
/// to top_n training instances per side, nearest in rank first.
ExplainReport Explain(const Placement& placement, const Dataset& train,
                      int top_n);

}  // namespace l2p

#endif  // L2P_PLACEMENT_HPP_
