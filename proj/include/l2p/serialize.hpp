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

#ifndef L2P_SERIALIZE_HPP_
#define L2P_SERIALIZE_HPP_

#include "json.hpp"
#include "l2p/forest.hpp"
#include "l2p/metrics.hpp"
#include "l2p/placement.hpp"

namespace l2p {

/// Scalar metrics only; point sets (Q-Q, ROC, CCDF) are CSV artifacts.
nlohmann::json ToJson(const metrics::MetricReport& report);

/// Forest model round-trip. Layout (see docs/forest_model.schema.json):
/// nodes are [feature, left, right, threshold, prob] with feature -1
/// marking a leaf.
nlohmann::json ForestToJson(const RandomForestModel& model);
RandomForestModel ForestFromJson(const nlohmann::json& j);

/// Placement with bracket instance ids resolved from the partition.
nlohmann::json PlacementToJson(const Placement& placement,
                               const BinPartition& partition);

nlohmann::json ExplainToJson(const ExplainReport& report);

}  // namespace l2p

#endif  // L2P_SERIALIZE_HPP_
