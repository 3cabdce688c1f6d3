// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/sweep.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "wavernn/types.hpp"

namespace wavernn {

namespace {

using nlohmann::json;

json::json_pointer pointer_for(const std::string& dotted) {
  std::string p = "/" + dotted;
  for (char& ch : p)
    if (ch == '.') ch = '/';
  return json::json_pointer(p);
}

std::string value_label(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::vector<SweepTrial> expand_grid(const std::string& grid_json) {
  json doc;
  try {
    doc = json::parse(grid_json);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("sweep: JSON parse error: ") + e.what());
  }
  require(doc.contains("base"), "sweep: grid document needs a \"base\" config");
  require(doc.contains("grid") && doc["grid"].is_object() && !doc["grid"].empty(),
          "sweep: grid document needs a non-empty \"grid\" object");
  // Validate the base parses as a config at all.
  config_from_json_string(doc["base"].dump());

  std::vector<std::pair<std::string, std::vector<json>>> axes;
  for (const auto& [field, values] : doc["grid"].items()) {
    require(values.is_array() && !values.empty(),
            "sweep: grid field '" + field + "' must be a non-empty array");
    axes.emplace_back(field, std::vector<json>(values.begin(), values.end()));
  }

  std::vector<SweepTrial> trials;
  std::vector<size_t> at(axes.size(), 0);
  while (true) {
    json cfg = doc["base"];
    std::string label;
    for (size_t i = 0; i < axes.size(); ++i) {
      cfg[pointer_for(axes[i].first)] = axes[i].second[at[i]];
      if (!label.empty()) label += ";";
      label += axes[i].first + "=" + value_label(axes[i].second[at[i]]);
    }
    trials.push_back({label, cfg.dump()});
    size_t axis = axes.size();
    while (axis > 0) {
      --axis;
      if (++at[axis] < axes[axis].second.size()) break;
      at[axis] = 0;
      if (axis == 0) return trials;
    }
  }
}

std::vector<SweepTrial> table3_preset(const RunConfig& base) {
  require(base.task.kind == "copy", "table3 preset runs on the copy task");
  struct Row {
    const char* label;
    const char* kind;
    const char* u_init;
    const char* v_init;
  };
  // Paper Table 3 rows: wRNN ablations and iRNN with added initializations.
  const Row rows[] = {
      {"wrnn", "wrnn", "shift", "sparse-identity"},
      {"wrnn -V-init", "wrnn", "shift", "normal"},
      {"wrnn -u-shift-init", "wrnn", "random", "sparse-identity"},
      {"wrnn -V-init -u-shift-init", "wrnn", "random", "normal"},
      {"irnn", "irnn", "identity", "normal"},
      {"irnn +Sigma-init", "irnn", "sigma-shift", "normal"},
      {"irnn +Sigma-init +V-init", "irnn", "sigma-shift", "sparse-identity"},
  };
  std::vector<SweepTrial> trials;
  for (const auto& row : rows) {
    RunConfig c = base;
    c.model.kind = row.kind;
    c.model.u_init = row.u_init;
    c.model.v_init = row.v_init;
    if (std::string(row.kind) == "irnn") c.model.c = 1;
    trials.push_back({row.label, to_json_string(c)});
  }
  return trials;
}

SweepResult run_sweep(const std::vector<SweepTrial>& trials, const std::string& out_dir) {
  require(!trials.empty(), "sweep: no trials");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  SweepResult result;

  std::string task_kind;
  for (size_t i = 0; i < trials.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "trial_%03zu", i);
    SweepTrialResult tr;
    tr.label = trials[i].label;
    tr.dir = out_dir + "/" + name;
    // A broken trial is recorded and the sweep continues.
    try {
      RunConfig config = config_from_json_string(trials[i].config_json);
      config.out_dir = tr.dir;
      task_kind = config.task.kind;
      tr.train = train(config);
    } catch (const std::exception& e) {
      tr.train.status = std::string("failed: ") + e.what();
    }
    result.trials.push_back(std::move(tr));
  }
  require(!task_kind.empty(), "sweep: every trial failed to configure");

  const bool higher = metric_higher_is_better(task_kind);
  result.ranking.resize(result.trials.size());
  for (size_t i = 0; i < result.ranking.size(); ++i) result.ranking[i] = i;
  std::stable_sort(result.ranking.begin(), result.ranking.end(), [&](size_t a, size_t b) {
    const auto& ta = result.trials[a].train;
    const auto& tb = result.trials[b].train;
    const bool ok_a = ta.status == "ok", ok_b = tb.status == "ok";
    if (ok_a != ok_b) return ok_a;
    if (!ok_a) return false;
    return higher ? ta.final_eval_metric > tb.final_eval_metric
                  : ta.final_eval_metric < tb.final_eval_metric;
  });

  result.summary_path = out_dir + "/sweep.csv";
  std::ofstream csv(result.summary_path);
  require(static_cast<bool>(csv), "sweep: cannot write " + result.summary_path);
  csv << "rank,trial,label,status,eval_loss,eval_metric,solved_iter,dir\n";
  for (size_t rank = 0; rank < result.ranking.size(); ++rank) {
    const size_t i = result.ranking[rank];
    const auto& t = result.trials[i];
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu,%zu,", rank, i);
    csv << buf << "\"" << t.label << "\"," << t.train.status << "," << t.train.final_eval_loss
        << "," << t.train.final_eval_metric << "," << t.train.solved_iter << "," << t.dir << "\n";
  }
  csv.close();

  const size_t best = result.ranking.front();
  result.best_config_path = out_dir + "/best_config.json";
  std::ofstream best_os(result.best_config_path);
  best_os << trials[best].config_json << "\n";
  return result;
}

}  // namespace wavernn
