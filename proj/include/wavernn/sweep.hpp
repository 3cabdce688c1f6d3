// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <string>
#include <vector>

#include "wavernn/train.hpp"

namespace wavernn {

/// One sweep trial: a labeled configuration patch applied to the base config.
struct SweepTrial {
  std::string label;
  std::string config_json;  // full config after patching
};

struct SweepTrialResult {
  std::string label;
  std::string dir;
  TrainResult train;
};

struct SweepResult {
  std::vector<SweepTrialResult> trials;
  std::vector<size_t> ranking;  // indices into trials, best first
  std::string best_config_path;
  std::string summary_path;
};

/// Expands a grid document into trials.  The document holds a "base" config
/// plus "grid": an object mapping dotted field paths (e.g. "optim.lr") to
/// value lists; the cartesian product over all listed fields is returned in
/// deterministic order.
std::vector<SweepTrial> expand_grid(const std::string& grid_json);

/// The Table-3 ablation preset on the copy task: wRNN with and without the
/// shift and sparse-encoder initializations, and the iRNN with identity,
/// Sigma, and Sigma+sparse-encoder initializations.
std::vector<SweepTrial> table3_preset(const RunConfig& base);

/// Runs every trial under out_dir/trial_NNN, ranks by final eval metric
/// (ascending for MSE tasks, descending for accuracy tasks; failed trials
/// last), writes sweep.csv and best_config.json.
SweepResult run_sweep(const std::vector<SweepTrial>& trials, const std::string& out_dir);

}  // namespace wavernn
