// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include <doctest.h>

#include "wavernn/gradcheck.hpp"
#include "wavernn/init.hpp"
#include "wavernn/tasks.hpp"

using namespace wavernn;

namespace {

// Gradient-check instances need O(1) parameter scales: the paper's
// N(0, 0.001) encoder init makes recurrent-weight gradients so small that
// finite-difference roundoff dominates the relative error.
template <typename Cell>
void randomize_tensors(Cell& cell, Rng& rng) {
  for (auto& view : tensor_views(cell)) {
    auto m = Eigen::Map<Vec<double>>(view.data, view.size());
    rng.fill_uniform(m, -0.6, 0.6);
  }
}

SequenceBatch<double> random_batch(LossMode mode, int steps, int items, int dim, int classes,
                                   Rng& rng) {
  SequenceBatch<double> b;
  b.mode = mode;
  b.steps = steps;
  b.items = items;
  b.dim = dim;
  b.inputs.assign(steps, Mat<double>(dim, items));
  for (auto& x : b.inputs) rng.fill_uniform(x, -1.0, 1.0);
  switch (mode) {
    case LossMode::kPerStepCategorical:
      b.step_classes.resize(steps, items);
      for (int t = 0; t < steps; ++t)
        for (int i = 0; i < items; ++i)
          b.step_classes(t, i) = static_cast<int>(rng.randint(classes));
      break;
    case LossMode::kFinalCategorical:
      b.final_classes.resize(items);
      for (int i = 0; i < items; ++i) b.final_classes(i) = static_cast<int>(rng.randint(classes));
      break;
    case LossMode::kFinalScalar:
      b.final_values.resize(items);
      for (int i = 0; i < items; ++i) b.final_values(i) = rng.uniform(-1.0, 1.0);
      break;
  }
  return b;
}

}  // namespace

TEST_CASE("T=1 linear cell: BPTT reduces to the single-layer CE gradient") {
  Rng rng(5);
  auto cell = init_irnn<double>(6, 3, 4, Activation::kIdentity, ReadoutMode::kPerStepLinear, rng,
                                RecurrentInit::kRandom, EncoderInit::kNormal);
  auto batch = random_batch(LossMode::kPerStepCategorical, 1, 5, 3, 4, rng);
  ForwardOptions opt;
  opt.cache = true;
  auto fwd = forward_sequence(cell, batch, opt);
  auto grads = backward_sequence(cell, batch, fwd.cache);

  // Closed form: h_1 = V x_0 + b, logits = W1 h_1 + b1,
  // dW1 = (p - y) h_1^T / B, dV = W1^T (p - y) x_0^T / B.
  const Mat<double>& h1 = fwd.cache.h[1];
  Mat<double> logits = cell.readout.w1 * h1;
  logits.colwise() += cell.readout.b1;
  Mat<double> dlogits;
  softmax_cross_entropy(logits, batch.step_classes.row(0).transpose(), dlogits);
  dlogits /= 5.0;
  const Mat<double> want_w1 = dlogits * h1.transpose();
  const Mat<double> want_v = cell.readout.w1.transpose() * dlogits * batch.inputs[0].transpose();
  CHECK((grads.w1 - want_w1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((grads.encoder - want_v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("wRNN BPTT matches central finite differences") {
  Rng rng(11);
  auto cell = init_wrnn<double>(8, 2, 3, 3, 4, Activation::kRelu, ReadoutMode::kPerStepLinear, rng,
                                RecurrentInit::kRandom, EncoderInit::kNormal);
  randomize_tensors(cell, rng);
  auto batch = random_batch(LossMode::kPerStepCategorical, 5, 3, 3, 4, rng);
  auto report = finite_diff_check(cell, batch, 1e-5);
  CHECK(report.max_rel_err < 1e-5);
  for (const auto& e : report.entries) CHECK(e.checked > 0);
}

TEST_CASE("iRNN U-gradient equals the tied wRNN kernel gradient summed over the circulant") {
  Rng rng(13);
  const int n = 6, c = 2, f = 3;
  auto wrnn = init_wrnn<double>(n, c, f, 2, 3, Activation::kTanh, ReadoutMode::kFinalLinear, rng,
                                RecurrentInit::kRandom, EncoderInit::kNormal);
  auto irnn = init_irnn<double>(n * c, 2, 3, Activation::kTanh, ReadoutMode::kFinalLinear, rng);
  irnn.recur = conv_as_matrix(wrnn.kernel, n);
  irnn.encoder = wrnn.encoder;
  irnn.bias = wrnn.bias;
  irnn.readout = wrnn.readout;
  auto batch = random_batch(LossMode::kFinalCategorical, 4, 3, 2, 3, rng);

  ForwardOptions opt;
  opt.cache = true;
  auto fw = forward_sequence(wrnn, batch, opt);
  auto fi = forward_sequence(irnn, batch, opt);
  CHECK(fw.loss == doctest::Approx(fi.loss).epsilon(1e-12));
  auto gw = backward_sequence(wrnn, batch, fw.cache);
  auto gi = backward_sequence(irnn, batch, fi.cache);

  for (int o = 0; o < c; ++o)
    for (int j = 0; j < c; ++j)
      for (int m = 0; m < f; ++m) {
        double want = 0;
        for (int i = 0; i < n; ++i)
          want += gi.recur(o * n + i, j * n + ((i - m + f / 2 + n) % n));
        CHECK(gw.recur(o, j * f + m) == doctest::Approx(want).epsilon(1e-10));
      }
}

TEST_CASE("finite_diff_check passes for all cell kinds, activations, readouts") {
  Rng rng(17);
  const int n = 6, c = 2, f = 3, d = 3, classes = 4, steps = 4, items = 2;
  int combos = 0;
  for (auto act : {Activation::kRelu, Activation::kTanh, Activation::kIdentity}) {
    for (auto [mode, loss] :
         std::vector<std::pair<ReadoutMode, LossMode>>{
             {ReadoutMode::kPerStepLinear, LossMode::kPerStepCategorical},
             {ReadoutMode::kFinalLinear, LossMode::kFinalCategorical},
             {ReadoutMode::kFinalScalar, LossMode::kFinalScalar},
             {ReadoutMode::kFinalMlp2, LossMode::kFinalCategorical}}) {
      const int o = mode == ReadoutMode::kFinalScalar ? 1 : classes;
      auto batch = random_batch(loss, steps, items, d, o, rng);
      {
        auto cell = init_wrnn<double>(n, c, f, d, o, act, mode, rng, RecurrentInit::kRandom,
                                      EncoderInit::kNormal, 5);
        randomize_tensors(cell, rng);
        CHECK_MESSAGE(finite_diff_check(cell, batch).passed(1e-5),
                      "wrnn act=" << std::string(to_string(act))
                                  << " readout=" << std::string(to_string(mode)));
      }
      {
        auto cell = init_irnn<double>(n, d, o, act, mode, rng, RecurrentInit::kRandom,
                                      EncoderInit::kNormal, 5);
        randomize_tensors(cell, rng);
        CHECK_MESSAGE(finite_diff_check(cell, batch).passed(1e-5),
                      "irnn act=" << std::string(to_string(act))
                                  << " readout=" << std::string(to_string(mode)));
      }
      {
        auto cell = init_local<double>(n, c, f, d, o, act, mode, rng, RecurrentInit::kRandom,
                                       EncoderInit::kNormal, 5);
        randomize_tensors(cell, rng);
        CHECK_MESSAGE(finite_diff_check(cell, batch).passed(1e-5),
                      "local act=" << std::string(to_string(act))
                                   << " readout=" << std::string(to_string(mode)));
      }
      ++combos;
    }
  }
  CHECK(combos == 12);
}

TEST_CASE("a corrupted gradient fails the finite-difference comparison") {
  Rng rng(19);
  auto cell = init_wrnn<double>(6, 1, 3, 2, 3, Activation::kTanh, ReadoutMode::kFinalLinear, rng,
                                RecurrentInit::kRandom, EncoderInit::kNormal);
  auto batch = random_batch(LossMode::kFinalCategorical, 4, 2, 2, 3, rng);
  ForwardOptions opt;
  opt.cache = true;
  auto fwd = forward_sequence(cell, batch, opt);
  auto grads = backward_sequence(cell, batch, fwd.cache);
  grads.encoder *= 1.01;  // deliberate corruption
  const double eps = 1e-5;
  double max_rel = 0;
  for (int i = 0; i < cell.encoder.size(); ++i) {
    double& theta = cell.encoder.data()[i];
    const double saved = theta;
    theta = saved + eps;
    const double up = forward_sequence(cell, batch).loss;
    theta = saved - eps;
    const double down = forward_sequence(cell, batch).loss;
    theta = saved;
    const double fd = (up - down) / (2 * eps);
    max_rel = std::max(max_rel,
                       std::abs(grads.encoder.data()[i] - fd) / std::max(std::abs(fd), 1e-8));
  }
  CHECK(max_rel > 1e-5);
}

TEST_CASE("local cell passes the gradient check") {
  Rng rng(23);
  auto cell = init_local<double>(5, 2, 3, 2, 3, Activation::kRelu, ReadoutMode::kFinalLinear, rng,
                                 RecurrentInit::kVariableVelocity, EncoderInit::kNormal);
  // Keep the variable-velocity bank; rescale the rest to healthy magnitudes.
  rng.fill_uniform(cell.encoder, -0.6, 0.6);
  rng.fill_uniform(cell.bias, -0.2, 0.2);
  auto batch = random_batch(LossMode::kFinalCategorical, 4, 2, 2, 3, rng);
  auto report = finite_diff_check(cell, batch);
  CHECK(report.passed(1e-5));
}

TEST_CASE("frozen parameters have exactly zero gradient") {
  Rng rng(29);
  auto cell = init_wrnn<double>(6, 2, 3, 2, 3, Activation::kRelu, ReadoutMode::kFinalLinear, rng,
                                RecurrentInit::kRandom, EncoderInit::kNormal);
  auto batch = random_batch(LossMode::kFinalCategorical, 3, 2, 2, 3, rng);
  ForwardOptions opt;
  opt.cache = true;
  auto fwd = forward_sequence(cell, batch, opt);
  auto grads = backward_sequence(cell, batch, fwd.cache, FreezeMask{"V", "recur"});
  CHECK(grads.encoder.cwiseAbs().maxCoeff() == 0.0);
  CHECK(grads.recur.cwiseAbs().maxCoeff() == 0.0);
  CHECK(grads.w1.cwiseAbs().maxCoeff() > 0.0);
  CHECK(grads.bias.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("backward requires a cache") {
  Rng rng(31);
  auto cell = init_irnn<double>(4, 1, 2, Activation::kRelu, ReadoutMode::kFinalLinear, rng);
  auto batch = random_batch(LossMode::kFinalCategorical, 3, 2, 1, 2, rng);
  ForwardCache<double> empty;
  CHECK_THROWS_AS(backward_sequence(cell, batch, empty), std::invalid_argument);
}
