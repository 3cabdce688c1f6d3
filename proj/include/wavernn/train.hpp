// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <utility>
#include <vector>

#include "wavernn/backward.hpp"
#include "wavernn/cells.hpp"
#include "wavernn/config.hpp"
#include "wavernn/rng.hpp"

namespace wavernn {

/// "Solved" threshold for the adding task: eval MSE at or below this value.
inline constexpr double kAddingSolvedMse = 5e-2;

/// Stream id deriving the held-out evaluation data from the data seed; shared
/// by train and analyze so both see the same evaluation sequences.
inline constexpr uint64_t kEvalStream = 0x65766131;

struct TrainResult {
  std::string status = "ok";  // ok | diverged
  long long iters_run = 0;
  long long solved_iter = -1;  // adding: first eval at or under kAddingSolvedMse
  double final_train_loss = 0;
  double final_eval_loss = 0;
  double final_eval_metric = 0;
  double best_eval_metric = 0;
  double test_metric = -1;  // image tasks: test accuracy after training
  std::string checkpoint_path;
  std::string metrics_path;
  std::vector<std::pair<long long, double>> eval_history;  // (iter, eval metric)
};

/// True when the task's eval metric improves upward (accuracy) rather than
/// downward (MSE).
bool metric_higher_is_better(const std::string& task_kind);

/// Builds the cell a config describes, drawing from the given parameter rng.
CellParams<float> build_cell(const RunConfig& config, Rng& rng);

/// Frozen-tensor names implied by the config's freeze flags.  Freezing the
/// encoder freezes both V and the bias b (the encoder's affine part).
FreezeMask freeze_mask(const ModelConfig& model);

/// Runs the full training loop: generate/draw batch, forward, backward,
/// clip, Adam, schedule; evaluates on a fixed held-out set, writes
/// metrics.csv, config.json, result.json and checkpoint.wrnc under
/// config.out_dir.  Divergence terminates the run with status "diverged".
TrainResult train(const RunConfig& config);

}  // namespace wavernn
