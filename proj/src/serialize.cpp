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

#include "l2p/serialize.hpp"

#include <stdexcept>

namespace l2p {

namespace {
constexpr const char kForestFormat[] = "l2p-forest";
constexpr int kForestVersion = 1;
}  // namespace

nlohmann::json ToJson(const metrics::MetricReport& report) {
  return nlohmann::json{
      {"ks", report.ks}, {"emd", report.emd}, {"auc", report.auc}};
}

nlohmann::json ForestToJson(const RandomForestModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : model.trees()) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes) {
      nodes.push_back(nlohmann::json::array(
          {node.feature, node.left, node.right, node.threshold, node.prob}));
    }
    trees.push_back(std::move(nodes));
  }
  const ForestConfig& config = model.config();
  return nlohmann::json{
      {"format", kForestFormat},
      {"version", kForestVersion},
      {"dim", model.dim()},
      {"config",
       {{"n_trees", config.n_trees},
        {"max_features", config.max_features},
        {"min_samples_leaf", config.min_samples_leaf},
        {"max_depth", config.max_depth},
        {"bootstrap", config.bootstrap}}},
      {"trees", std::move(trees)}};
}

RandomForestModel ForestFromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != kForestFormat) {
    throw std::invalid_argument("not a forest model document");
  }
  if (j.value("version", 0) != kForestVersion) {
    throw std::invalid_argument("unsupported forest model version");
  }
  const auto dim = j.at("dim").get<std::size_t>();
  if (dim == 0) throw std::invalid_argument("dim must be positive");

  ForestConfig config;
  const nlohmann::json& jc = j.at("config");
  config.n_trees = jc.at("n_trees").get<int>();
  config.max_features = jc.at("max_features").get<int>();
  config.min_samples_leaf = jc.at("min_samples_leaf").get<int>();
  config.max_depth = jc.at("max_depth").get<int>();
  config.bootstrap = jc.at("bootstrap").get<bool>();

  std::vector<Tree> trees;
  for (const nlohmann::json& jt : j.at("trees")) {
    Tree tree;
    for (const nlohmann::json& jn : jt) {
      if (!jn.is_array() || jn.size() != 5) {
        throw std::invalid_argument("malformed tree node");
      }
      TreeNode node;
      node.feature = jn[0].get<std::int32_t>();
      node.left = jn[1].get<std::int32_t>();
      node.right = jn[2].get<std::int32_t>();
      node.threshold = jn[3].get<double>();
      node.prob = jn[4].get<double>();
      if (node.feature >= static_cast<std::int32_t>(dim)) {
        throw std::invalid_argument("node feature out of range");
      }
      if (node.IsLeaf() && !(node.prob >= 0.0 && node.prob <= 1.0)) {
        throw std::invalid_argument("leaf probability outside [0,1]");
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) {
      throw std::invalid_argument("tree with no nodes");
    }
    const auto n_nodes = static_cast<std::int32_t>(tree.nodes.size());
    for (const TreeNode& node : tree.nodes) {
      if (node.IsLeaf()) continue;
      if (node.left < 0 || node.left >= n_nodes || node.right < 0 ||
          node.right >= n_nodes) {
        throw std::invalid_argument("node child index out of range");
      }
    }
    trees.push_back(std::move(tree));
  }
  if (trees.empty()) throw std::invalid_argument("forest with no trees");
  return RandomForestModel(config, dim, std::move(trees));
}

nlohmann::json PlacementToJson(const Placement& placement,
                               const BinPartition& partition) {
  nlohmann::json j{
      {"region", placement.region},
      {"predicted_value", placement.predicted_value},
      {"tally", placement.tally.votes},
      {"lower_edge", nullptr},
      {"upper_edge", nullptr},
      {"lower_edge_ids", nlohmann::json::array()},
      {"upper_edge_ids", nlohmann::json::array()},
  };
  if (placement.lower_edge) {
    j["lower_edge"] = *placement.lower_edge;
    j["lower_edge_ids"] = partition.edge_instances[placement.region - 1];
  }
  if (placement.upper_edge) {
    j["upper_edge"] = *placement.upper_edge;
    j["upper_edge_ids"] = partition.edge_instances[placement.region];
  }
  return j;
}

nlohmann::json ExplainToJson(const ExplainReport& report) {
  const auto entries = [](const std::vector<ExplainEntry>& side) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ExplainEntry& entry : side) {
      arr.push_back({{"id", entry.id},
                     {"target", entry.target},
                     {"features", entry.features}});
    }
    return arr;
  };
  nlohmann::json j{
      {"region", report.region},
      {"predicted_value", report.predicted_value},
      {"lower_edge", nullptr},
      {"upper_edge", nullptr},
      {"below", entries(report.below)},
      {"above", entries(report.above)},
  };
  if (report.lower_edge) j["lower_edge"] = *report.lower_edge;
  if (report.upper_edge) j["upper_edge"] = *report.upper_edge;
  return j;
}

}  // namespace l2p
