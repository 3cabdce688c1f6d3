// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/train.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "wavernn/backward.hpp"
#include "wavernn/init.hpp"
#include "wavernn/io.hpp"
#include "wavernn/metrics.hpp"
#include "wavernn/optim.hpp"
#include "wavernn/tasks.hpp"

namespace wavernn {

namespace {

namespace fs = std::filesystem;

struct EvalStats {
  double loss = 0;
  double metric = 0;
};

bool is_image_task(const std::string& kind) {
  return kind == "smnist" || kind == "psmnist" || kind == "nscifar";
}

SequenceBatch<float> synthetic_batch(const TaskConfig& task, Rng& rng, int items) {
  if (task.kind == "copy") return copy_batch<float>(rng, items, task.length);
  if (task.kind == "adding") return adding_batch<float>(rng, items, task.length);
  throw std::invalid_argument("synthetic_batch: not a synthetic task: " + task.kind);
}

std::vector<SequenceBatch<float>> make_eval_set(const TaskConfig& task, int total, int batch_size,
                                                Rng rng) {
  std::vector<SequenceBatch<float>> out;
  int left = total;
  while (left > 0) {
    const int take = std::min(left, batch_size);
    out.push_back(synthetic_batch(task, rng, take));
    left -= take;
  }
  return out;
}

// Mean squared error between per-step softmax probabilities and one-hot
// targets, averaged over timesteps, items and classes.
double copy_probability_mse(const std::vector<Mat<float>>& step_logits,
                            const Eigen::MatrixXi& classes) {
  double sq = 0;
  long long count = 0;
  for (size_t t = 0; t < step_logits.size(); ++t) {
    const Mat<float> p = softmax_columns(step_logits[t]);
    for (Index b = 0; b < p.cols(); ++b) {
      for (Index k = 0; k < p.rows(); ++k) {
        const double target = classes(static_cast<Index>(t), b) == k ? 1.0 : 0.0;
        const double diff = static_cast<double>(p(k, b)) - target;
        sq += diff * diff;
      }
      count += p.rows();
    }
  }
  return sq / static_cast<double>(count);
}

EvalStats evaluate_synthetic(const CellParams<float>& cell,
                             const std::vector<SequenceBatch<float>>& eval_set) {
  EvalStats stats;
  double loss_weighted = 0, metric_weighted = 0;
  long long items = 0;
  for (const auto& batch : eval_set) {
    ForwardOptions opt;
    opt.keep_step_logits = batch.mode == LossMode::kPerStepCategorical;
    auto r = forward_sequence(cell, batch, opt);
    loss_weighted += r.loss * batch.items;
    if (batch.mode == LossMode::kPerStepCategorical) {
      metric_weighted += copy_probability_mse(r.step_logits, batch.step_classes) * batch.items;
    } else {
      metric_weighted += r.loss * batch.items;  // adding: MSE is the loss
    }
    items += batch.items;
  }
  stats.loss = loss_weighted / items;
  stats.metric = metric_weighted / items;
  return stats;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_result_json(const std::string& path, const TrainResult& result) {
  nlohmann::json j;
  j["status"] = result.status;
  j["iters_run"] = result.iters_run;
  j["solved_iter"] = result.solved_iter;
  j["final_train_loss"] = result.final_train_loss;
  j["final_eval_loss"] = result.final_eval_loss;
  j["final_eval_metric"] = result.final_eval_metric;
  j["best_eval_metric"] = result.best_eval_metric;
  j["test_metric"] = result.test_metric;
  j["checkpoint"] = result.checkpoint_path;
  j["metrics"] = result.metrics_path;
  std::ofstream os(path);
  require(static_cast<bool>(os), "train: cannot write " + path);
  os << j.dump(2) << "\n";
}

void dump_first_item_trace(const CellParams<float>& cell, const SequenceBatch<float>& batch,
                           const std::string& path) {
  ForwardOptions opt;
  opt.trace = true;
  auto r = forward_sequence(cell, batch, opt);
  dump_trace(path, r.trace);
}

TrainResult train_synthetic(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  fs::create_directories(config.out_dir);
  result.metrics_path = config.out_dir + "/metrics.csv";
  result.checkpoint_path = config.out_dir + "/checkpoint.wrnc";
  write_config(config.out_dir + "/config.json", config);

  Rng param_rng(config.seeds.params);
  CellParams<float> cell = build_cell(config, param_rng);

  Rng data_rng(config.seeds.data);
  const auto eval_set =
      make_eval_set(config.task, config.eval.size, config.optim.batch_size,
                    Rng(config.seeds.data).split(kEvalStream));

  OptState<float> opt;
  opt.clip = config.optim.clip;
  opt.freeze = freeze_mask(config.model);
  const FreezeMask freeze = opt.freeze;
  const LrSchedule schedule{config.optim.lr, config.optim.lr_drop_rate, config.optim.lr_drop_epoch};

  MetricsWriter metrics(result.metrics_path);
  const int log_every = config.log_every > 0 ? config.log_every : config.eval.every;
  const bool higher_better = metric_higher_is_better(config.task.kind);
  result.best_eval_metric = higher_better ? -1e300 : 1e300;

  double interval_loss = 0;
  long long interval_count = 0;
  double last_norm = 0;
  // Synthetic tasks use a constant learning rate (schedules are epoch-based).
  const double lr_now = lr_at(schedule, 0);

  for (long long iter = 1; iter <= config.optim.iters; ++iter) {
    try {
      auto batch = synthetic_batch(config.task, data_rng, config.optim.batch_size);
      ForwardOptions fopt;
      fopt.cache = true;
      auto fwd = forward_sequence(cell, batch, fopt);
      auto grads = backward_sequence(cell, batch, fwd.cache, freeze);
      last_norm = adam_step(opt, cell, grads, lr_now);
      interval_loss += fwd.loss;
      ++interval_count;
      result.iters_run = iter;
    } catch (const DivergedError&) {
      result.status = "diverged";
      result.iters_run = iter;
      break;
    }

    if (iter % log_every == 0 || iter == config.optim.iters) {
      EvalStats stats;
      try {
        stats = evaluate_synthetic(cell, eval_set);
      } catch (const DivergedError&) {
        result.status = "diverged";
        break;
      }
      MetricsRow row;
      row.iter = iter;
      row.train_loss = interval_loss / std::max<long long>(interval_count, 1);
      row.eval_loss = stats.loss;
      row.eval_metric = stats.metric;
      row.lr = lr_now;
      row.grad_norm = last_norm;
      row.wallclock_s = elapsed_seconds(start);
      metrics.append(row);
      result.final_train_loss = row.train_loss;
      result.final_eval_loss = stats.loss;
      result.final_eval_metric = stats.metric;
      result.eval_history.emplace_back(iter, stats.metric);
      interval_loss = 0;
      interval_count = 0;
      if (higher_better ? stats.metric > result.best_eval_metric
                        : stats.metric < result.best_eval_metric)
        result.best_eval_metric = stats.metric;
      if (config.task.kind == "adding" && result.solved_iter < 0 &&
          stats.metric <= kAddingSolvedMse)
        result.solved_iter = iter;
      if (config.optim.stop_metric_le > 0 && !higher_better &&
          stats.metric <= config.optim.stop_metric_le)
        break;
    }
  }

  save_checkpoint(result.checkpoint_path, cell);
  if (config.dump_trace && !eval_set.empty() && result.status == "ok")
    dump_first_item_trace(cell, eval_set.front(), config.out_dir + "/trace.wrnh");
  write_result_json(config.out_dir + "/result.json", result);
  return result;
}

// --- image tasks -------------------------------------------------------------

struct ImageData {
  // MNIST-style or CIFAR; exactly one of idx/cifar is populated.
  IdxDataset idx_train, idx_test;
  CifarDataset cifar_train, cifar_test;
  bool cifar = false;
  std::vector<int> train_indices, val_indices, test_indices;
};

ImageData load_image_data(const RunConfig& config) {
  ImageData data;
  const std::string& dir = config.task.data_dir;
  if (config.task.kind == "nscifar") {
    data.cifar = true;
    std::vector<std::string> train_files;
    for (int i = 1; i <= 5; ++i)
      train_files.push_back(dir + "/data_batch_" + std::to_string(i) + ".bin");
    data.cifar_train = load_cifar10(train_files);
    data.cifar_test = load_cifar10({dir + "/test_batch.bin"});
  } else {
    data.idx_train = load_idx(dir + "/train-images-idx3-ubyte", dir + "/train-labels-idx1-ubyte");
    data.idx_test = load_idx(dir + "/t10k-images-idx3-ubyte", dir + "/t10k-labels-idx1-ubyte");
  }
  const int train_count = data.cifar ? data.cifar_train.count : data.idx_train.count;
  const int test_count = data.cifar ? data.cifar_test.count : data.idx_test.count;
  // Hold out the last 5,000 training images for validation.
  const int holdout = std::min(5000, train_count / 10);
  for (int i = 0; i < train_count - holdout; ++i) data.train_indices.push_back(i);
  for (int i = train_count - holdout; i < train_count; ++i) data.val_indices.push_back(i);
  for (int i = 0; i < test_count; ++i) data.test_indices.push_back(i);
  return data;
}

SequenceBatch<float> image_batch(const RunConfig& config, const ImageData& data, bool test_split,
                                 const std::vector<int>& indices, Rng& noise_rng,
                                 const std::vector<int>* permutation) {
  if (data.cifar)
    return seq_cifar_batch<float>(test_split ? data.cifar_test : data.cifar_train, indices,
                                  noise_rng, config.task.cifar_pad);
  return seq_mnist_batch<float>(test_split ? data.idx_test : data.idx_train, indices, permutation);
}

EvalStats evaluate_images(const CellParams<float>& cell, const RunConfig& config,
                          const ImageData& data, bool test_split, const std::vector<int>& indices,
                          Rng noise_rng, const std::vector<int>* permutation) {
  EvalStats stats;
  double loss_weighted = 0;
  long long correct = 0, total = 0;
  for (size_t at = 0; at < indices.size(); at += config.optim.batch_size) {
    const size_t end = std::min(indices.size(), at + config.optim.batch_size);
    std::vector<int> chunk(indices.begin() + at, indices.begin() + end);
    auto batch = image_batch(config, data, test_split, chunk, noise_rng, permutation);
    auto r = forward_sequence(cell, batch);
    loss_weighted += r.loss * batch.items;
    for (Index b = 0; b < r.final_logits.cols(); ++b) {
      Index argmax = 0;
      r.final_logits.col(b).maxCoeff(&argmax);
      correct += argmax == batch.final_classes(b);
      ++total;
    }
  }
  stats.loss = loss_weighted / total;
  stats.metric = static_cast<double>(correct) / total;
  return stats;
}

TrainResult train_images(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  fs::create_directories(config.out_dir);
  result.metrics_path = config.out_dir + "/metrics.csv";
  result.checkpoint_path = config.out_dir + "/checkpoint.wrnc";
  write_config(config.out_dir + "/config.json", config);

  ImageData data = load_image_data(config);
  std::vector<int> permutation;
  const std::vector<int>* perm_ptr = nullptr;
  if (config.task.kind == "psmnist") {
    Rng perm_rng(config.task.permutation_seed);
    permutation = perm_rng.permutation(data.idx_train.pixels());
    perm_ptr = &permutation;
  }

  Rng param_rng(config.seeds.params);
  CellParams<float> cell = build_cell(config, param_rng);
  Rng data_rng(config.seeds.data);
  Rng eval_noise = Rng(config.seeds.data).split(kEvalStream);

  OptState<float> opt;
  opt.clip = config.optim.clip;
  opt.freeze = freeze_mask(config.model);
  const FreezeMask freeze = opt.freeze;
  const LrSchedule schedule{config.optim.lr, config.optim.lr_drop_rate, config.optim.lr_drop_epoch};

  MetricsWriter metrics(result.metrics_path);
  result.best_eval_metric = -1e300;
  long long global_iter = 0;
  double last_norm = 0;

  for (int epoch = 0; epoch < config.optim.epochs && result.status == "ok"; ++epoch) {
    const double lr_now = lr_at(schedule, epoch);
    auto order = data_rng.permutation(static_cast<int>(data.train_indices.size()));
    double interval_loss = 0;
    long long interval_count = 0;
    for (size_t at = 0; at < order.size(); at += config.optim.batch_size) {
      const size_t end = std::min(order.size(), at + config.optim.batch_size);
      std::vector<int> chunk;
      chunk.reserve(end - at);
      for (size_t i = at; i < end; ++i) chunk.push_back(data.train_indices[order[i]]);
      try {
        auto batch = image_batch(config, data, false, chunk, data_rng, perm_ptr);
        ForwardOptions fopt;
        fopt.cache = true;
        auto fwd = forward_sequence(cell, batch, fopt);
        auto grads = backward_sequence(cell, batch, fwd.cache, freeze);
        last_norm = adam_step(opt, cell, grads, lr_now);
        interval_loss += fwd.loss;
        ++interval_count;
        ++global_iter;
        result.iters_run = global_iter;
      } catch (const DivergedError&) {
        result.status = "diverged";
        break;
      }
    }
    if (result.status != "ok") break;

    EvalStats stats;
    try {
      stats = evaluate_images(cell, config, data, false, data.val_indices, eval_noise, perm_ptr);
    } catch (const DivergedError&) {
      result.status = "diverged";
      break;
    }
    MetricsRow row;
    row.iter = global_iter;
    row.train_loss = interval_loss / std::max<long long>(interval_count, 1);
    row.eval_loss = stats.loss;
    row.eval_metric = stats.metric;
    row.lr = lr_now;
    row.grad_norm = last_norm;
    row.wallclock_s = elapsed_seconds(start);
    metrics.append(row);
    result.final_train_loss = row.train_loss;
    result.final_eval_loss = stats.loss;
    result.final_eval_metric = stats.metric;
    result.eval_history.emplace_back(global_iter, stats.metric);
    result.best_eval_metric = std::max(result.best_eval_metric, stats.metric);
  }

  if (result.status == "ok")
    result.test_metric =
        evaluate_images(cell, config, data, true, data.test_indices, eval_noise, perm_ptr).metric;

  save_checkpoint(result.checkpoint_path, cell);
  if (config.dump_trace && result.status == "ok") {
    auto batch = image_batch(config, data, false, {data.val_indices.front()}, eval_noise, perm_ptr);
    dump_first_item_trace(cell, batch, config.out_dir + "/trace.wrnh");
  }
  write_result_json(config.out_dir + "/result.json", result);
  return result;
}

}  // namespace

bool metric_higher_is_better(const std::string& task_kind) { return is_image_task(task_kind); }

FreezeMask freeze_mask(const ModelConfig& model) {
  FreezeMask mask;
  if (model.freeze_recurrent) mask.insert("recur");
  if (model.freeze_encoder) {
    mask.insert("V");
    mask.insert("b");
  }
  if (model.freeze_readout) {
    mask.insert("W1");
    mask.insert("b1");
    mask.insert("W2");
    mask.insert("b2");
  }
  return mask;
}

CellParams<float> build_cell(const RunConfig& config, Rng& rng) {
  int d = 0, o = 0;
  task_dims(config.task.kind, &d, &o);
  const std::string readout_name =
      config.model.readout.empty() ? default_readout(config.task.kind) : config.model.readout;
  const ReadoutMode readout = readout_from_string(readout_name);
  const Activation act = activation_from_string(config.model.activation);
  const RecurrentInit u_init = recurrent_init_from_string(config.model.u_init);
  const EncoderInit v_init = encoder_init_from_string(config.model.v_init);
  if (config.model.kind == "wrnn")
    return init_wrnn<float>(config.model.n, config.model.c, config.model.k, d, o, act, readout,
                            rng, u_init, v_init, config.model.mlp_hidden);
  if (config.model.kind == "irnn")
    return init_irnn<float>(config.model.n, d, o, act, readout, rng, u_init, v_init,
                            config.model.mlp_hidden);
  if (config.model.kind == "local")
    return init_local<float>(config.model.n, config.model.c, config.model.k, d, o, act, readout,
                             rng, u_init, v_init, config.model.mlp_hidden);
  throw std::invalid_argument("build_cell: unknown model kind " + config.model.kind);
}

TrainResult train(const RunConfig& config) {
  if (is_image_task(config.task.kind)) return train_images(config);
  require(config.optim.iters > 0, "train: synthetic tasks need optim.iters > 0");
  return train_synthetic(config);
}

}  // namespace wavernn
