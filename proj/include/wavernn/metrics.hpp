// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <fstream>
#include <string>

namespace wavernn {

struct MetricsRow {
  long long iter = 0;
  double train_loss = 0;
  double eval_loss = 0;
  double eval_metric = 0;  // accuracy (image tasks) or MSE (synthetic)
  double lr = 0;
  double grad_norm = 0;
  double wallclock_s = 0;
};

/// Appends rows under the fixed header
/// iter,train_loss,eval_loss,eval_metric,lr,grad_norm,wallclock_s.
/// All numeric fields are printed with %.10g so reruns of a deterministic
/// computation produce byte-identical rows (wallclock aside).
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void append(const MetricsRow& row);

 private:
  std::ofstream os_;
};

}  // namespace wavernn
