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

#include "l2p/placement.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace l2p {
namespace {

double RegionMidpoint(const BinPartition& partition, std::size_t region) {
  const std::size_t m = partition.NumEdges();
  if (region == 0) return partition.edges.front();
  if (region == m) return partition.edges.back();
  return 0.5 * (partition.edges[region - 1] + partition.edges[region]);
}

}  // namespace

BinPartition BuildPartition(std::span<const double> targets,
                            std::span<const InstanceId> ids) {
  if (targets.size() != ids.size()) {
    throw std::invalid_argument("targets and ids sizes differ");
  }
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (targets[a] != targets[b]) return targets[a] < targets[b];
    return ids[a] < ids[b];
  });

  BinPartition partition;
  for (std::size_t i : order) {
    if (partition.edges.empty() || partition.edges.back() != targets[i]) {
      partition.edges.push_back(targets[i]);
      partition.edge_instances.emplace_back();
    }
    partition.edge_instances.back().push_back(ids[i]);
    const auto inserted =
        partition.edge_of.emplace(ids[i], partition.edges.size() - 1);
    if (!inserted.second) {
      throw std::invalid_argument("duplicate instance id in partition");
    }
  }
  if (partition.edges.size() < 2) {
    throw std::invalid_argument(
        "partition needs at least 2 distinct target values");
  }
  return partition;
}

BinPartition BuildPartition(std::span<const double> targets) {
  std::vector<InstanceId> ids(targets.size());
  std::iota(ids.begin(), ids.end(), InstanceId{0});
  return BuildPartition(targets, ids);
}

BinPartition BuildPartition(const Dataset& train) {
  const std::vector<double> targets = train.targets();
  const std::vector<InstanceId> ids = train.ids();
  return BuildPartition(targets, ids);
}

VoteTally Vote(const BinPartition& partition,
               std::span<const Verdict> verdicts, VoteMode mode) {
  if (verdicts.empty()) throw std::invalid_argument("no verdicts to tally");
  const std::size_t m = partition.NumEdges();

  std::unordered_map<InstanceId, const Verdict*> by_id;
  by_id.reserve(verdicts.size());
  for (const Verdict& v : verdicts) {
    if (v.label != 1 && v.label != -1) {
      throw std::invalid_argument("verdict label must be +1 or -1");
    }
    if (mode == VoteMode::kWeighted &&
        !(v.prob_greater >= 0.0 && v.prob_greater <= 1.0)) {
      throw std::invalid_argument("verdict probability outside [0,1]");
    }
    if (partition.edge_of.find(v.id) == partition.edge_of.end()) {
      throw std::invalid_argument("verdict for unknown instance id");
    }
    if (!by_id.emplace(v.id, &v).second) {
      throw std::invalid_argument("duplicate verdict for one instance");
    }
  }

  // A verdict at edge e supports either the regions below the edge
  // (R_0..R_e) or the ones above (R_{e+1}..R_m). Contributions are
  // accumulated per edge in the partition's canonical instance order and
  // applied as range updates on a difference array.
  std::vector<double> diff(m + 2, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    double below = 0.0;
    double above = 0.0;
    for (InstanceId id : partition.edge_instances[e]) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) continue;
      const Verdict& v = *it->second;
      if (mode == VoteMode::kPlain) {
        // Label +1 means the voter sits above the query: +1 to every
        // region below its edge, -1 to every region above.
        below += v.label;
        above -= v.label;
      } else {
        const double p_below = v.prob_greater;
        below += p_below / static_cast<double>(e + 1);
        above += (1.0 - p_below) / static_cast<double>(m - e);
      }
    }
    diff[0] += below;
    diff[e + 1] += above - below;
  }

  VoteTally tally;
  tally.votes.resize(m + 1);
  double running = 0.0;
  for (std::size_t r = 0; r <= m; ++r) {
    running += diff[r];
    tally.votes[r] = running;
  }
  return tally;
}

Placement Place(const VoteTally& tally, const BinPartition& partition,
                TieRule tie_rule) {
  if (tally.votes.size() != partition.NumRegions()) {
    throw std::invalid_argument("tally and partition sizes disagree");
  }
  const double best = *std::max_element(tally.votes.begin(),
                                        tally.votes.end());
  std::vector<std::size_t> winners;
  for (std::size_t r = 0; r < tally.votes.size(); ++r) {
    if (tally.votes[r] == best) winners.push_back(r);
  }

  Placement placement;
  placement.tally = tally;
  placement.region = winners.front();
  if (winners.size() == 1 || tie_rule == TieRule::kLowestRegion) {
    placement.predicted_value = RegionMidpoint(partition, winners.front());
  } else {
    double sum = 0.0;
    for (std::size_t r : winners) sum += RegionMidpoint(partition, r);
    placement.predicted_value = sum / static_cast<double>(winners.size());
  }

  const std::size_t m = partition.NumEdges();
  if (placement.region > 0) {
    placement.lower_edge = partition.edges[placement.region - 1];
  }
  if (placement.region < m) {
    placement.upper_edge = partition.edges[placement.region];
  }
  return placement;
}

Placement Predict(const PreferenceModel& model, const Dataset& train,
                  std::span<const double> q, VoteMode mode,
                  TieRule tie_rule) {
  const std::size_t d = train.dim();
  if (q.size() != d) throw std::invalid_argument("query dimension mismatch");
  if (model.dim() != 2 * d) {
    throw std::invalid_argument("model dimension mismatch");
  }
  const BinPartition partition = BuildPartition(train);

  // X_iq = [f_i, f_q]; the query half stays fixed across voters.
  std::vector<double> x(2 * d);
  std::copy(q.begin(), q.end(), x.begin() + static_cast<std::ptrdiff_t>(d));
  std::vector<Verdict> verdicts;
  verdicts.reserve(train.size());
  for (const Instance& inst : train.instances) {
    std::copy(inst.features.begin(), inst.features.end(), x.begin());
    const double prob = model.PredictProb(x);
    verdicts.push_back({inst.id, prob >= 0.5 ? +1 : -1, prob});
  }

  const VoteTally tally = Vote(partition, verdicts, mode);
  return Place(tally, partition, tie_rule);
}

ExplainReport Explain(const Placement& placement, const Dataset& train,
                      int top_n) {
  if (top_n < 0) throw std::invalid_argument("top_n must be non-negative");
  ExplainReport report;
  report.region = placement.region;
  report.predicted_value = placement.predicted_value;
  report.lower_edge = placement.lower_edge;
  report.upper_edge = placement.upper_edge;

  const auto take = [&](bool below_side) {
    std::vector<const Instance*> side;
    for (const Instance& inst : train.instances) {
      if (below_side && placement.lower_edge &&
          inst.target <= *placement.lower_edge) {
        side.push_back(&inst);
      } else if (!below_side && placement.upper_edge &&
                 inst.target >= *placement.upper_edge) {
        side.push_back(&inst);
      }
    }
    // Nearest rank first; ids ascending among ties.
    std::sort(side.begin(), side.end(),
              [below_side](const Instance* a, const Instance* b) {
                if (a->target != b->target) {
                  return below_side ? a->target > b->target
                                    : a->target < b->target;
                }
                return a->id < b->id;
              });
    std::vector<ExplainEntry> entries;
    for (const Instance* inst : side) {
      if (static_cast<int>(entries.size()) >= top_n) break;
      entries.push_back({inst->id, inst->target, inst->features});
    }
    return entries;
  };
  report.below = take(true);
  report.above = take(false);
  return report;
}

}  // namespace l2p
