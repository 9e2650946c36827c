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

#include "l2p/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "CLI11.hpp"
#include "l2p/evaluation.hpp"
#include "l2p/random.hpp"
#include "l2p/robustness.hpp"
#include "l2p/serialize.hpp"

namespace l2p::cli {
namespace {

namespace fs = std::filesystem;

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Collects files written by one command and removes them unless the
// command reaches Commit, so failed runs leave no partial outputs.
class OutputSet {
 public:
  explicit OutputSet(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir_);
  }

  ~OutputSet() {
    if (committed_) return;
    for (const fs::path& path : written_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }

  fs::path Dir() const { return dir_; }

  void WriteText(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written_.push_back(path);
    out << content;
    if (!out.flush()) {
      throw std::runtime_error("write failed: " + path.string());
    }
  }

  void Track(const fs::path& path) { written_.push_back(path); }

  void Commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string CcdfCsv(const std::vector<std::pair<double, double>>& points) {
  std::string csv = "value,ccdf\n";
  for (const auto& [value, fraction] : points) {
    csv += FormatDouble(value) + "," + FormatDouble(fraction) + "\n";
  }
  return csv;
}

std::string QqCsv(const std::vector<std::pair<double, double>>& points) {
  std::string csv = "q_actual,q_predicted\n";
  for (const auto& [qa, qp] : points) {
    csv += FormatDouble(qa) + "," + FormatDouble(qp) + "\n";
  }
  return csv;
}

std::string RocCsv(const metrics::RocCurve& curve) {
  std::string csv = "fpr,tpr,threshold\n";
  for (const metrics::RocPoint& p : curve.points) {
    csv += FormatDouble(p.fpr) + "," + FormatDouble(p.tpr) + "," +
           FormatDouble(p.threshold) + "\n";
  }
  return csv;
}

PairingPolicy ParsePairing(const std::string& mode, int ns, int k) {
  if (mode == "full") return PairingPolicy::Full();
  if (mode == "sampled") return PairingPolicy::Sampled(ns, k);
  throw std::invalid_argument("unknown pairing mode: " + mode);
}

VoteMode ParseVote(const std::string& mode) {
  if (mode == "plain") return VoteMode::kPlain;
  if (mode == "weighted") return VoteMode::kWeighted;
  throw std::invalid_argument("unknown vote mode: " + mode);
}

ErrorMechanism::Kind ParseMechanism(const std::string& name) {
  if (name == "random") return ErrorMechanism::Kind::kRandom;
  if (name == "distance") return ErrorMechanism::Kind::kDistanceDependent;
  throw std::invalid_argument("unknown mechanism: " + name);
}

std::vector<double> ParseGrid(const std::string& grid) {
  std::vector<double> values;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const char* begin = item.data();
    const char* end = begin + item.size();
    while (begin < end && *begin == ' ') ++begin;
    while (end > begin && end[-1] == ' ') --end;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || begin == end) {
      throw std::invalid_argument("bad grid value: '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("empty grid");
  return values;
}

// Query rows: the training feature columns in order, with the target
// column optionally present (ignored) anywhere in the header.
std::vector<std::vector<double>> LoadQueryCsv(
    const std::string& path, const std::vector<std::string>& feature_names,
    const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::size_t target_idx = header.size();
  std::vector<std::size_t> feature_cols;
  for (std::size_t i = 0, f = 0; i < header.size(); ++i) {
    if (header[i] == target_column && target_idx == header.size()) {
      target_idx = i;
      continue;
    }
    if (f >= feature_names.size() || header[i] != feature_names[f]) {
      throw std::invalid_argument(
          "query column '" + header[i] +
          "' does not match the training features");
    }
    feature_cols.push_back(i);
    ++f;
  }
  if (feature_cols.size() != feature_names.size()) {
    throw std::invalid_argument("query file is missing feature columns");
  }

  std::vector<std::vector<double>> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(row) +
                                  " has the wrong cell count");
    }
    std::vector<double> features;
    features.reserve(feature_cols.size());
    for (std::size_t col : feature_cols) {
      double v = 0.0;
      const std::string& c = cells[col];
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size() || c.empty()) {
        throw std::invalid_argument("non-numeric cell at row " +
                                    std::to_string(row));
      }
      features.push_back(v);
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw std::invalid_argument("no query rows in " + path);
  return rows;
}

nlohmann::json MethodJson(const MethodResult& method) {
  nlohmann::json per_fold = nlohmann::json::array();
  for (const auto& report : method.fold_reports) {
    per_fold.push_back(ToJson(report));
  }
  return nlohmann::json{{"per_fold", std::move(per_fold)},
                        {"pooled", ToJson(method.pooled)},
                        {"auc_mean", method.auc_mean},
                        {"auc_std", method.auc_std}};
}

}  // namespace

void CmdSummary(const SummaryOptions& options) {
  const Dataset ds = LoadCsv(options.input, options.target_column);
  const std::vector<double> targets = ds.targets();
  const double kurt = Kurtosis(targets);

  OutputSet out(options.out_dir);
  const nlohmann::json summary{{"n", ds.size()},
                               {"d", ds.dim()},
                               {"target", ds.target_name},
                               {"kurtosis", kurt}};
  out.WriteText("summary.json", summary.dump(2) + "\n");
  out.WriteText("ccdf.csv", CcdfCsv(CcdfPoints(targets)));
  out.Commit();
}

void CmdCv(const CvOptions& options) {
  const Dataset ds = LoadCsv(options.input, options.target_column);

  EvalConfig config;
  config.seed = options.seed;
  config.n_folds = options.folds;
  config.n_strata = options.strata;
  config.forest.n_trees = options.trees;
  config.forest.max_depth = options.max_depth;
  config.pairing = ParsePairing(options.pairing, options.ns, options.k);
  config.vote_mode = ParseVote(options.vote);

  const CvResult result = EvaluateCv(ds, config);

  nlohmann::json summary{
      {"dataset",
       {{"n", ds.size()}, {"d", ds.dim()}, {"target", ds.target_name}}},
      {"config",
       {{"seed", options.seed},
        {"folds", options.folds},
        {"strata", options.strata},
        {"trees", options.trees},
        {"max_depth", options.max_depth},
        {"pairing", options.pairing},
        {"ns", options.ns},
        {"k", options.k},
        {"vote", options.vote},
        {"knn_k", config.knn.k}}},
      {"pairs",
       {{"per_fold", result.pair_count_per_fold},
        {"total", result.pair_count_total}}},
      {"methods",
       {{"l2p", MethodJson(result.l2p)},
        {"knn", MethodJson(result.knn)},
        {"random", MethodJson(result.random)}}}};

  OutputSet out(options.out_dir);
  out.WriteText("cv_summary.json", summary.dump(2) + "\n");
  const struct {
    const char* name;
    const MethodResult* method;
  } methods[] = {{"l2p", &result.l2p},
                 {"knn", &result.knn},
                 {"random", &result.random}};
  for (const auto& [name, method] : methods) {
    out.WriteText(std::string("qq_") + name + ".csv",
                  QqCsv(method->pooled.qq));
    out.WriteText(std::string("roc_") + name + ".csv",
                  RocCsv(metrics::RocAuc(result.actual, method->predicted)));
    out.WriteText(std::string("ccdf_") + name + ".csv",
                  CcdfCsv(CcdfPoints(method->predicted)));
  }
  out.WriteText("ccdf_actual.csv", CcdfCsv(CcdfPoints(result.actual)));
  out.Commit();
}

void CmdPredict(const PredictOptions& options) {
  const Dataset train = LoadCsv(options.input, options.target_column);
  const std::vector<std::vector<double>> queries = LoadQueryCsv(
      options.query, train.feature_names, options.target_column);

  const PairingPolicy pairing =
      ParsePairing(options.pairing, options.ns, options.k);
  const VoteMode vote_mode = ParseVote(options.vote);
  ForestConfig forest;
  forest.n_trees = options.trees;
  forest.max_depth = options.max_depth;

  const std::vector<PairExample> pairs =
      pairing.mode == PairingPolicy::Mode::kFull
          ? BuildFullPairs(train)
          : BuildSampledPairs(train, pairing,
                              rng::DeriveSeed(options.seed, "pairs"));
  const RandomForestModel model =
      TrainForest(pairs, forest, rng::DeriveSeed(options.seed, "forest"));
  const BinPartition partition = BuildPartition(train);

  std::string csv = "id,predicted\n";
  nlohmann::json explanations = nlohmann::json::array();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Placement placement =
        Predict(model, train, queries[i], vote_mode);
    csv += std::to_string(i) + "," +
           FormatDouble(placement.predicted_value) + "\n";
    if (options.explain) {
      const ExplainReport context =
          Explain(placement, train, options.top_n);
      nlohmann::json record = PlacementToJson(placement, partition);
      const nlohmann::json detail = ExplainToJson(context);
      record["query_id"] = i;
      record["below"] = detail.at("below");
      record["above"] = detail.at("above");
      explanations.push_back(std::move(record));
    }
  }

  OutputSet out(options.out_dir);
  out.WriteText("predictions.csv", csv);
  if (options.explain) {
    out.WriteText("explanations.json", explanations.dump(2) + "\n");
  }
  out.Commit();
}

void CmdRobustness(const RobustnessOptions& options) {
  const Dataset ds = LoadCsv(options.input, options.target_column);
  const ErrorMechanism::Kind kind = ParseMechanism(options.mechanism);
  const std::vector<double> grid = ParseGrid(options.grid);

  const RobustnessCurve curve = RobustnessSweep(
      ds, kind, grid, options.folds, options.seed, options.strata);

  std::string csv = "parameter,realized_accuracy,auc\n";
  for (const RobustnessPoint& p : curve.points) {
    csv += FormatDouble(p.parameter) + "," +
           FormatDouble(p.realized_accuracy) + "," + FormatDouble(p.auc) +
           "\n";
  }

  OutputSet out(options.out_dir);
  out.WriteText("robustness_" + options.mechanism + ".csv", csv);
  out.Commit();
}

void CmdSynth(const SynthOptions& options) {
  if (options.output.empty()) {
    throw std::invalid_argument("--output path required");
  }
  const Dataset ds = GenerateSynthetic(options.n, options.dim,
                                       options.tail_index, options.noise,
                                       options.seed);
  const fs::path path(options.output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  OutputSet out(path.has_parent_path() ? path.parent_path().string()
                                       : std::string("."));
  out.Track(path);
  WriteCsv(ds, options.output);
  out.Commit();
}

int Run(int argc, const char* const* argv) {
  CLI::App app{"Pairwise-placement estimation for heavy-tailed outcomes"};
  app.require_subcommand(1);

  SummaryOptions summary;
  CLI::App* cmd_summary =
      app.add_subcommand("summary", "Dataset summary: size, kurtosis, CCDF");
  cmd_summary->add_option("--input", summary.input, "Input CSV")->required();
  cmd_summary->add_option("--target-column", summary.target_column,
                          "Target column name");
  cmd_summary->add_option("--out-dir", summary.out_dir, "Output directory");

  CvOptions cv;
  CLI::App* cmd_cv = app.add_subcommand(
      "cv", "Cross-validated evaluation against kNN and random baselines");
  cmd_cv->add_option("--input", cv.input, "Input CSV")->required();
  cmd_cv->add_option("--target-column", cv.target_column,
                     "Target column name");
  cmd_cv->add_option("--out-dir", cv.out_dir, "Output directory");
  cmd_cv->add_option("--seed", cv.seed, "Root random seed");
  cmd_cv->add_option("--folds", cv.folds, "Cross-validation folds");
  cmd_cv->add_option("--strata", cv.strata, "Stratification bins");
  cmd_cv->add_option("--trees", cv.trees, "Forest size");
  cmd_cv->add_option("--max-depth", cv.max_depth,
                     "Tree depth cap (0 = unlimited)");
  cmd_cv->add_option("--pairing", cv.pairing, "Pair construction")
      ->check(CLI::IsMember({"full", "sampled"}));
  cmd_cv->add_option("--ns", cv.ns, "Comparisons per instance (sampled)");
  cmd_cv->add_option("--k", cv.k, "Rank neighbors per instance (sampled)");
  cmd_cv->add_option("--vote", cv.vote, "Vote mode")
      ->check(CLI::IsMember({"plain", "weighted"}));

  PredictOptions predict;
  CLI::App* cmd_predict =
      app.add_subcommand("predict", "Train on one CSV, place queries from "
                                    "another");
  cmd_predict->add_option("--input", predict.input, "Training CSV")
      ->required();
  cmd_predict->add_option("--query", predict.query, "Query CSV")->required();
  cmd_predict->add_option("--target-column", predict.target_column,
                          "Target column name");
  cmd_predict->add_option("--out-dir", predict.out_dir, "Output directory");
  cmd_predict->add_option("--seed", predict.seed, "Root random seed");
  cmd_predict->add_option("--trees", predict.trees, "Forest size");
  cmd_predict->add_option("--max-depth", predict.max_depth,
                          "Tree depth cap (0 = unlimited)");
  cmd_predict->add_option("--pairing", predict.pairing, "Pair construction")
      ->check(CLI::IsMember({"full", "sampled"}));
  cmd_predict->add_option("--ns", predict.ns,
                          "Comparisons per instance (sampled)");
  cmd_predict->add_option("--k", predict.k,
                          "Rank neighbors per instance (sampled)");
  cmd_predict->add_option("--vote", predict.vote, "Vote mode")
      ->check(CLI::IsMember({"plain", "weighted"}));
  cmd_predict->add_flag("--explain", predict.explain,
                        "Write per-query placement explanations");

  RobustnessOptions robustness;
  CLI::App* cmd_robustness = app.add_subcommand(
      "robustness", "Sweep oracle corruption against final AUC");
  cmd_robustness->add_option("--input", robustness.input, "Input CSV")
      ->required();
  cmd_robustness->add_option("--target-column", robustness.target_column,
                             "Target column name");
  cmd_robustness->add_option("--out-dir", robustness.out_dir,
                             "Output directory");
  cmd_robustness->add_option("--seed", robustness.seed, "Root random seed");
  cmd_robustness->add_option("--folds", robustness.folds,
                             "Cross-validation folds");
  cmd_robustness->add_option("--strata", robustness.strata,
                             "Stratification bins");
  cmd_robustness->add_option("--mechanism", robustness.mechanism,
                             "Error mechanism")
      ->check(CLI::IsMember({"random", "distance"}));
  cmd_robustness->add_option("--grid", robustness.grid,
                             "Comma-separated parameter values");

  SynthOptions synth;
  CLI::App* cmd_synth =
      app.add_subcommand("synth", "Generate a heavy-tailed synthetic CSV");
  cmd_synth->add_option("--n", synth.n, "Instance count");
  cmd_synth->add_option("--dim", synth.dim, "Feature count");
  cmd_synth->add_option("--tail-index", synth.tail_index,
                        "Pareto shape (smaller = heavier tail)");
  cmd_synth->add_option("--noise", synth.noise, "Score noise scale");
  cmd_synth->add_option("--seed", synth.seed, "Root random seed");
  cmd_synth->add_option("--output", synth.output, "Output CSV path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cmd_summary->parsed()) CmdSummary(summary);
    if (cmd_cv->parsed()) CmdCv(cv);
    if (cmd_predict->parsed()) CmdPredict(predict);
    if (cmd_robustness->parsed()) CmdRobustness(robustness);
    if (cmd_synth->parsed()) CmdSynth(synth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace l2p::cli
