// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/metrics.hpp"

#include <cstdio>

#include "wavernn/types.hpp"

namespace wavernn {

MetricsWriter::MetricsWriter(const std::string& path) : os_(path) {
  require(static_cast<bool>(os_), "metrics: cannot open " + path);
  os_ << "iter,train_loss,eval_loss,eval_metric,lr,grad_norm,wallclock_s\n";
  os_.flush();
}

void MetricsWriter::append(const MetricsRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%lld,%.10g,%.10g,%.10g,%.10g,%.10g,%.3f\n", row.iter,
                row.train_loss, row.eval_loss, row.eval_metric, row.lr, row.grad_norm,
                row.wallclock_s);
  os_ << buf;
  os_.flush();
}

}  // namespace wavernn
