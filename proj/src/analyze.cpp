// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/analyze.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "wavernn/config.hpp"
#include "wavernn/diagnostics.hpp"
#include "wavernn/io.hpp"
#include "wavernn/tasks.hpp"
#include "wavernn/train.hpp"

namespace wavernn {

namespace {

SequenceBatch<float> analysis_batch(const AnalyzeOptions& opt) {
  Rng rng = Rng(opt.data_seed).split(kEvalStream);  // same stream train() evaluates on
  if (opt.task == "copy") return copy_batch<float>(rng, opt.items, opt.length);
  if (opt.task == "adding") return adding_batch<float>(rng, opt.items, opt.length);
  if (opt.task == "smnist" || opt.task == "psmnist") {
    auto ds = load_idx(opt.data_dir + "/t10k-images-idx3-ubyte",
                       opt.data_dir + "/t10k-labels-idx1-ubyte");
    std::vector<int> indices;
    for (int i = 0; i < std::min(opt.items, ds.count); ++i) indices.push_back(i);
    if (opt.task == "psmnist") {
      Rng perm_rng(opt.permutation_seed);
      auto perm = perm_rng.permutation(ds.pixels());
      return seq_mnist_batch<float>(ds, indices, &perm);
    }
    return seq_mnist_batch<float>(ds, indices);
  }
  if (opt.task == "nscifar") {
    auto ds = load_cifar10({opt.data_dir + "/test_batch.bin"});
    std::vector<int> indices;
    for (int i = 0; i < std::min(opt.items, ds.count); ++i) indices.push_back(i);
    return seq_cifar_batch<float>(ds, indices, rng);
  }
  throw std::invalid_argument("analyze: unknown task " + opt.task);
}

void write_copy_predictions(const std::string& path, const std::vector<Mat<float>>& step_logits,
                            const Eigen::MatrixXi& classes) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "analyze: cannot write " + path);
  os << "step,target,prediction\n";
  for (size_t t = 0; t < step_logits.size(); ++t) {
    Index argmax = 0;
    step_logits[t].col(0).maxCoeff(&argmax);
    os << t << "," << classes(static_cast<Index>(t), 0) << "," << argmax << "\n";
  }
}

}  // namespace

AnalyzeResult analyze(const AnalyzeOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(options.out_dir);
  AnalyzeResult result;

  CellParams<float> cell = load_checkpoint(options.checkpoint);
  int d = 0, o = 0;
  task_dims(options.task, &d, &o);
  std::visit(
      [&](const auto& p) {
        require(p.d == d && p.o == o, "analyze: checkpoint dims (" + std::to_string(p.d) + "," +
                                          std::to_string(p.o) + ") do not match task " +
                                          options.task);
      },
      cell);

  auto batch = analysis_batch(options);
  ForwardOptions fopt;
  fopt.trace = true;
  fopt.keep_step_logits = batch.mode == LossMode::kPerStepCategorical;
  auto r = forward_sequence(cell, batch, fopt);
  result.eval_loss = r.loss;

  if (batch.mode == LossMode::kFinalCategorical) {
    long long correct = 0;
    for (Index b = 0; b < r.final_logits.cols(); ++b) {
      Index argmax = 0;
      r.final_logits.col(b).maxCoeff(&argmax);
      correct += argmax == batch.final_classes(b);
    }
    result.eval_metric = static_cast<double>(correct) / batch.items;
  } else if (batch.mode == LossMode::kPerStepCategorical) {
    double sq = 0;
    long long count = 0;
    for (size_t t = 0; t < r.step_logits.size(); ++t) {
      const Mat<float> p = softmax_columns(r.step_logits[t]);
      for (Index b = 0; b < p.cols(); ++b)
        for (Index k = 0; k < p.rows(); ++k) {
          const double target = batch.step_classes(static_cast<Index>(t), b) == k ? 1.0 : 0.0;
          sq += (p(k, b) - target) * (p(k, b) - target);
          ++count;
        }
    }
    result.eval_metric = sq / count;
    write_copy_predictions(options.out_dir + "/predictions.csv", r.step_logits,
                           batch.step_classes);
  } else {
    result.eval_metric = r.loss;
  }

  result.trace_path = options.out_dir + "/trace.wrnh";
  dump_trace(result.trace_path, r.trace);

  Rng shuffle_rng(options.shuffle_seed);
  auto spec = power_spectrum_2d(r.trace, options.channel, options.shuffles, shuffle_rng);
  std::tie(result.velocity, result.velocity_score) = estimate_velocity(spec);
  result.spectrum_path = options.out_dir + "/spectrum.csv";
  write_spectrum_csv(result.spectrum_path, spec);
  write_spectrum_csv(options.out_dir + "/spectrum_raw.csv", spec, /*normalized=*/false);

  if (options.onset_sorted) {
    auto order = onset_sort(r.trace);
    auto sorted = reorder_neurons(r.trace, order);
    dump_trace(options.out_dir + "/trace_sorted.wrnh", sorted);
    Rng sorted_rng(options.shuffle_seed + 1);
    auto sorted_spec = power_spectrum_2d(sorted, 0, options.shuffles, sorted_rng);
    std::tie(result.sorted_velocity, result.sorted_velocity_score) =
        estimate_velocity(sorted_spec);
    write_spectrum_csv(options.out_dir + "/spectrum_sorted.csv", sorted_spec);
  }

  nlohmann::json j;
  j["eval_loss"] = result.eval_loss;
  j["eval_metric"] = result.eval_metric;
  j["velocity"] = result.velocity;
  j["velocity_score"] = result.velocity_score;
  if (options.onset_sorted) {
    j["sorted_velocity"] = result.sorted_velocity;
    j["sorted_velocity_score"] = result.sorted_velocity_score;
  }
  j["channel"] = options.channel;
  j["shuffles"] = options.shuffles;
  std::ofstream os(options.out_dir + "/analysis.json");
  os << j.dump(2) << "\n";
  return result;
}

}  // namespace wavernn
