// Copyright 2026 The wavernn Authors. Apache 2.0 License.
//
// Command-line front end: train / sweep / analyze / data check.
// Exit codes: 0 ok, 2 diverged, 3 config error, 4 data error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "wavernn/analyze.hpp"
#include "wavernn/cifar.hpp"
#include "wavernn/idx.hpp"
#include "wavernn/sweep.hpp"
#include "wavernn/train.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiverged = 2;
constexpr int kExitConfig = 3;
constexpr int kExitData = 4;

struct TrainFlags {
  std::string config_path;
  std::string task;   // empty = from config, or "copy"
  std::string model;  // empty = from config, or "wrnn"
  int length = -1;
  int n = -1, c = -1, k = -1;
  double lr = -1, clip = -1;
  long long iters = -1;
  int epochs = -1;
  int batch_size = -1;
  long long seed = -1;
  std::string out;
  std::string activation, u_init, v_init, readout;
  std::string data_dir;
  double stop_metric_le = -1;
  int eval_every = -1;
  int eval_size = -1;
  int log_every = -1;
  bool dump_trace = false;
  bool freeze_recurrent = false, freeze_encoder = false, freeze_readout = false;
};

wavernn::RunConfig resolve_config(const TrainFlags& f) {
  wavernn::RunConfig config;
  if (!f.config_path.empty()) {
    config = wavernn::config_from_json_file(f.config_path);
    if (!f.task.empty()) config.task.kind = f.task;
    if (!f.model.empty()) config.model.kind = f.model;
  } else {
    config = wavernn::default_config(f.task.empty() ? "copy" : f.task,
                                     f.model.empty() ? "wrnn" : f.model);
  }
  // Remaining flags override the file / defaults.
  if (f.length >= 0) config.task.length = f.length;
  if (f.n > 0) config.model.n = f.n;
  if (f.c > 0) config.model.c = f.c;
  if (f.k > 0) config.model.k = f.k;
  if (f.lr > 0) config.optim.lr = f.lr;
  if (f.clip >= 0) config.optim.clip = f.clip;
  if (f.iters > 0) config.optim.iters = f.iters;
  if (f.epochs > 0) config.optim.epochs = f.epochs;
  if (f.batch_size > 0) config.optim.batch_size = f.batch_size;
  if (f.seed >= 0) {
    config.seeds.params = static_cast<uint64_t>(f.seed);
    config.seeds.data = static_cast<uint64_t>(f.seed) + 1;
    config.seeds.shuffle = static_cast<uint64_t>(f.seed) + 2;
  }
  if (!f.out.empty()) config.out_dir = f.out;
  if (!f.activation.empty()) config.model.activation = f.activation;
  if (!f.u_init.empty()) config.model.u_init = f.u_init;
  if (!f.v_init.empty()) config.model.v_init = f.v_init;
  if (!f.readout.empty()) config.model.readout = f.readout;
  if (!f.data_dir.empty()) config.task.data_dir = f.data_dir;
  if (f.stop_metric_le >= 0) config.optim.stop_metric_le = f.stop_metric_le;
  if (f.eval_every > 0) config.eval.every = f.eval_every;
  if (f.eval_size > 0) config.eval.size = f.eval_size;
  if (f.log_every > 0) config.log_every = f.log_every;
  if (f.dump_trace) config.dump_trace = true;
  if (f.freeze_recurrent) config.model.freeze_recurrent = true;
  if (f.freeze_encoder) config.model.freeze_encoder = true;
  if (f.freeze_readout) config.model.freeze_readout = true;
  // Re-validate after overrides.
  return wavernn::config_from_json_string(wavernn::to_json_string(config));
}

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags override its fields)");
  cmd->add_option("--task", f.task, "copy | adding | smnist | psmnist | nscifar");
  cmd->add_option("--model", f.model, "wrnn | irnn | local");
  cmd->add_option("--T,--length", f.length, "copy delay / adding sequence length");
  cmd->add_option("--n", f.n, "units per channel (wrnn/local) or total units (irnn)");
  cmd->add_option("--c", f.c, "channels");
  cmd->add_option("--k", f.k, "kernel width (odd)");
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--clip", f.clip, "gradient clip magnitude (0 = off)");
  cmd->add_option("--iters", f.iters, "training iterations (synthetic tasks)");
  cmd->add_option("--epochs", f.epochs, "training epochs (image tasks)");
  cmd->add_option("--bsz", f.batch_size, "batch size");
  cmd->add_option("--seed", f.seed, "base seed (params=s, data=s+1, shuffle=s+2)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--act", f.activation, "relu | tanh | identity");
  cmd->add_option("--u-init", f.u_init, "recurrent init scheme");
  cmd->add_option("--v-init", f.v_init, "encoder init scheme");
  cmd->add_option("--readout", f.readout, "readout mode override");
  cmd->add_option("--data-dir", f.data_dir, "dataset directory (image tasks)");
  cmd->add_option("--stop-metric-le", f.stop_metric_le, "early stop once eval metric <= value");
  cmd->add_option("--eval-every", f.eval_every, "evaluation cadence in iterations");
  cmd->add_option("--eval-size", f.eval_size, "held-out sequences for evaluation");
  cmd->add_option("--log-every", f.log_every, "metrics cadence (default: eval cadence)");
  cmd->add_flag("--dump-trace", f.dump_trace, "dump the first eval sequence's hidden trace");
  cmd->add_flag("--freeze-recurrent", f.freeze_recurrent, "freeze recurrent weights");
  cmd->add_flag("--freeze-encoder", f.freeze_encoder, "freeze encoder V and bias");
  cmd->add_flag("--freeze-readout", f.freeze_readout, "freeze readout weights");
}

int run_train(const TrainFlags& flags) {
  auto config = resolve_config(flags);
  auto result = wavernn::train(config);
  std::cout << "status: " << result.status << "\n"
            << "iters:  " << result.iters_run << "\n"
            << "eval_loss: " << result.final_eval_loss << "\n"
            << "eval_metric: " << result.final_eval_metric << "\n";
  if (result.solved_iter >= 0) std::cout << "solved_iter: " << result.solved_iter << "\n";
  if (result.test_metric >= 0) std::cout << "test_metric: " << result.test_metric << "\n";
  std::cout << "checkpoint: " << result.checkpoint_path << "\n"
            << "metrics: " << result.metrics_path << "\n";
  return result.status == "ok" ? kExitOk : kExitDiverged;
}

int run_sweep_cmd(const std::string& grid_path, const std::string& preset,
                  const TrainFlags& flags, const std::string& out_dir) {
  std::vector<wavernn::SweepTrial> trials;
  if (!preset.empty()) {
    if (preset != "table3")
      throw std::invalid_argument("unknown sweep preset: " + preset);
    auto base = resolve_config(flags);
    trials = wavernn::table3_preset(base);
  } else {
    if (grid_path.empty())
      throw std::invalid_argument("sweep needs --config GRID.json or --preset table3");
    std::ifstream is(grid_path);
    if (!is) throw std::invalid_argument("cannot open " + grid_path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    trials = wavernn::expand_grid(text);
  }
  auto result = wavernn::run_sweep(trials, out_dir);
  std::cout << "trials: " << result.trials.size() << "\n"
            << "summary: " << result.summary_path << "\n"
            << "best: " << result.trials[result.ranking.front()].label << " ("
            << result.trials[result.ranking.front()].train.final_eval_metric << ")\n"
            << "best_config: " << result.best_config_path << "\n";
  return kExitOk;
}

int run_data_check(const std::string& task, const std::string& data_dir) {
  if (task == "nscifar") {
    std::vector<std::string> files;
    for (int i = 1; i <= 5; ++i) files.push_back(data_dir + "/data_batch_" + std::to_string(i) + ".bin");
    auto train = wavernn::load_cifar10(files);
    auto test = wavernn::load_cifar10({data_dir + "/test_batch.bin"});
    std::cout << "cifar10 train: " << train.count << " images\n"
              << "cifar10 test:  " << test.count << " images\n";
  } else {
    auto train = wavernn::load_idx(data_dir + "/train-images-idx3-ubyte",
                                   data_dir + "/train-labels-idx1-ubyte");
    auto test = wavernn::load_idx(data_dir + "/t10k-images-idx3-ubyte",
                                  data_dir + "/t10k-labels-idx1-ubyte");
    std::cout << "mnist train: " << train.count << " images (" << train.rows << "x" << train.cols
              << ")\n"
              << "mnist test:  " << test.count << " images\n";
  }
  std::cout << "ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-RNN sequence learning toolkit"};
  app.require_subcommand(1);

  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Train one model");
  add_train_flags(train_cmd, train_flags);

  TrainFlags sweep_base_flags;
  std::string sweep_grid, sweep_preset, sweep_out = "sweeps/sweep";
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid search or ablation preset");
  add_train_flags(sweep_cmd, sweep_base_flags);
  sweep_cmd->add_option("--grid", sweep_grid, "grid JSON ({base:..., grid:{field:[...]}})");
  sweep_cmd->add_option("--preset", sweep_preset, "ablation preset (table3)");
  sweep_cmd->add_option("--sweep-out", sweep_out, "sweep output directory");

  wavernn::AnalyzeOptions an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a trained checkpoint");
  analyze_cmd->add_option("--checkpoint", an.checkpoint, "checkpoint path")->required();
  analyze_cmd->add_option("--out", an.out_dir, "analysis output directory");
  analyze_cmd->add_option("--task", an.task, "task the checkpoint was trained on");
  analyze_cmd->add_option("--T,--length", an.length, "copy delay / adding length");
  analyze_cmd->add_option("--data-dir", an.data_dir, "dataset directory (image tasks)");
  analyze_cmd->add_option("--data-seed", an.data_seed, "evaluation data seed");
  analyze_cmd->add_option("--shuffle-seed", an.shuffle_seed, "spectrum shuffle seed");
  analyze_cmd->add_option("--perm-seed", an.permutation_seed, "psmnist permutation seed");
  analyze_cmd->add_option("--items", an.items, "evaluation batch size");
  analyze_cmd->add_option("--channel", an.channel, "channel analyzed");
  analyze_cmd->add_option("--shuffles", an.shuffles, "shuffle count for normalization");
  analyze_cmd->add_flag("--sorted", an.onset_sorted, "also analyze the onset-sorted trace");

  auto* data_cmd = app.add_subcommand("data", "Dataset utilities");
  std::string check_task = "smnist", check_dir = "data";
  auto* check_cmd = data_cmd->add_subcommand("check", "Validate dataset files");
  check_cmd->add_option("--task", check_task, "smnist | psmnist | nscifar");
  check_cmd->add_option("--data-dir", check_dir, "dataset directory");
  data_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train_cmd) return run_train(train_flags);
    if (*sweep_cmd) return run_sweep_cmd(sweep_grid, sweep_preset, sweep_base_flags, sweep_out);
    if (*analyze_cmd) {
      auto result = wavernn::analyze(an);
      std::cout << "eval_loss: " << result.eval_loss << "\n"
                << "eval_metric: " << result.eval_metric << "\n"
                << "velocity: " << result.velocity << " (score " << result.velocity_score << ")\n";
      if (an.onset_sorted)
        std::cout << "sorted velocity: " << result.sorted_velocity << " (score "
                  << result.sorted_velocity_score << ")\n";
      std::cout << "trace: " << result.trace_path << "\n"
                << "spectrum: " << result.spectrum_path << "\n";
      return kExitOk;
    }
    if (*check_cmd) return run_data_check(check_task, check_dir);
  } catch (const wavernn::DivergedError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const wavernn::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
