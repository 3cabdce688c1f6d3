// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cstdint>
#include <string>

namespace wavernn {

// Run configuration, serializable to/from JSON with stable round-trips.
// Defaults follow the paper protocol's best-performing settings per task
// where known; default_config(task, model) applies the per-task table.

struct TaskConfig {
  std::string kind = "copy";  // copy | adding | smnist | psmnist | nscifar
  int length = 30;            // copy delay T / adding sequence length
  std::string data_dir = "data";
  uint64_t permutation_seed = 1;  // psmnist pixel order
  int cifar_pad = 1000;           // nscifar padded length
};

struct ModelConfig {
  std::string kind = "wrnn";  // wrnn | irnn | local
  int n = 100;                // units per channel (wrnn/local) or total units (irnn)
  int c = 6;                  // channels
  int k = 3;                  // kernel width
  std::string activation = "relu";
  std::string u_init = "shift";  // see RecurrentInit
  std::string v_init = "sparse-identity";
  std::string readout;  // empty = task default
  int mlp_hidden = 0;   // 0 = hidden-state size
  bool freeze_recurrent = false;
  bool freeze_encoder = false;
  bool freeze_readout = false;
};

struct OptimConfig {
  double lr = 1e-3;
  double clip = 0.0;  // 0 = no clipping
  double lr_drop_rate = 1.0;
  int lr_drop_epoch = 0;
  int batch_size = 128;
  long long iters = 60000;  // synthetic tasks
  int epochs = 0;           // image tasks
  double stop_metric_le = 0.0;  // early stop once eval metric <= this (0 = off)
};

struct SeedConfig {
  uint64_t params = 0;
  uint64_t data = 1;
  uint64_t shuffle = 2;  // diagnostics shuffles
};

struct EvalConfig {
  int every = 100;   // evaluation cadence in iterations (synthetic tasks)
  int size = 1000;   // held-out sequences (synthetic tasks)
};

struct RunConfig {
  TaskConfig task;
  ModelConfig model;
  OptimConfig optim;
  SeedConfig seeds;
  EvalConfig eval;
  std::string out_dir = "runs/run";
  int log_every = 0;  // 0 = log at the evaluation cadence
  bool dump_trace = false;
};

/// Paper-protocol defaults for a (task, model-kind) pair.
RunConfig default_config(const std::string& task, const std::string& model_kind);

std::string to_json_string(const RunConfig& config);
RunConfig config_from_json_string(const std::string& text);
RunConfig config_from_json_file(const std::string& path);
void write_config(const std::string& path, const RunConfig& config);

/// Input/output dimensions implied by a task.
void task_dims(const std::string& task_kind, int* d, int* o);

/// Readout mode used when the config leaves it empty.
std::string default_readout(const std::string& task_kind);

}  // namespace wavernn
