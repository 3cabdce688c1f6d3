// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cstdint>
#include <string>

namespace wavernn {

/// Post-hoc analysis of a trained checkpoint on a task: dumps the hidden
/// trace of one evaluation sequence, its (optionally onset-sorted)
/// shuffle-normalized spectrum, the estimated wave velocity, and per-step
/// predictions for the copy task.
struct AnalyzeOptions {
  std::string checkpoint;
  std::string out_dir = "analysis";
  std::string task = "copy";
  int length = 30;           // copy delay / adding length
  std::string data_dir = "data";
  uint64_t data_seed = 1;
  uint64_t shuffle_seed = 2;
  uint64_t permutation_seed = 1;
  int items = 128;   // evaluation batch size
  int channel = 0;   // channel analyzed for the spectrum
  int shuffles = 20;
  bool onset_sorted = false;  // additionally analyze the onset-sorted full state
};

struct AnalyzeResult {
  double eval_loss = 0;
  double eval_metric = 0;  // copy: probability MSE; adding: MSE; images: accuracy
  double velocity = 0;
  double velocity_score = 0;
  double sorted_velocity = 0;       // filled when onset_sorted
  double sorted_velocity_score = 0;
  std::string trace_path;
  std::string spectrum_path;
};

AnalyzeResult analyze(const AnalyzeOptions& options);

}  // namespace wavernn
