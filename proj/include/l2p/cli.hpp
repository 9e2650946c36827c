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

#ifndef L2P_CLI_HPP_
#define L2P_CLI_HPP_

#include <cstdint>
#include <string>

namespace l2p::cli {

// Each command writes its outputs atomically: on any error the files
// already written by that invocation are removed and the error propagates
// as an exception (nonzero exit from Run).

struct SummaryOptions {
  std::string input;
  std::string target_column = "target";
  std::string out_dir = ".";
};

struct CvOptions {
  std::string input;
  std::string target_column = "target";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int folds = 5;
  int strata = 10;
  int trees = 100;
  int max_depth = 0;  // 0 = unlimited
  std::string pairing = "full";  // full | sampled
  int ns = 50;
  int k = 10;
  std::string vote = "plain";  // plain | weighted
};

struct PredictOptions {
  std::string input;  // training csv
  std::string query;  // query csv: training feature columns, target optional
  std::string target_column = "target";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int trees = 100;
  int max_depth = 0;
  std::string pairing = "full";
  int ns = 50;
  int k = 10;
  std::string vote = "plain";
  bool explain = false;
  int top_n = 3;  // context neighbors per side in explanations
};

struct RobustnessOptions {
  std::string input;
  std::string target_column = "target";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int folds = 5;
  int strata = 10;
  std::string mechanism = "random";  // random | distance
  std::string grid = "0,0.25,0.5";   // comma-separated parameter values
};

struct SynthOptions {
  std::size_t n = 500;
  std::size_t dim = 9;
  double tail_index = 1.5;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string output;
};

/// Writes summary.json and ccdf.csv.
void CmdSummary(const SummaryOptions& options);

/// Writes cv_summary.json plus qq/roc/ccdf point CSVs per method and
/// ccdf_actual.csv.
void CmdCv(const CvOptions& options);

/// Writes predictions.csv, plus explanations.json when explain is set.
void CmdPredict(const PredictOptions& options);

/// Writes robustness_<mechanism>.csv.
void CmdRobustness(const RobustnessOptions& options);

/// Writes the generated dataset to options.output.
void CmdSynth(const SynthOptions& options);

/// Parses argv and dispatches; returns the process exit code.
int Run(int argc, const char* const* argv);

}  // namespace l2p::cli

#endif  // L2P_CLI_HPP_
