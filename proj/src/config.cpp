// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/config.hpp"

#include <fstream>
#include <json.hpp>

#include "wavernn/types.hpp"

namespace wavernn {

namespace {

using nlohmann::json;

const char* kTasks[] = {"copy", "adding", "smnist", "psmnist", "nscifar"};
const char* kModels[] = {"wrnn", "irnn", "local"};

bool known(const std::string& v, const char* const* list, size_t count) {
  for (size_t i = 0; i < count; ++i)
    if (v == list[i]) return true;
  return false;
}

void validate(const RunConfig& c) {
  require(known(c.task.kind, kTasks, 5), "config: unknown task kind '" + c.task.kind + "'");
  require(known(c.model.kind, kModels, 3), "config: unknown model kind '" + c.model.kind + "'");
  require(c.model.n >= 1 && c.model.c >= 1, "config: model dims must be positive");
  require(c.model.k >= 1 && c.model.k % 2 == 1, "config: kernel width must be odd");
  require(c.optim.batch_size >= 1, "config: batch size must be positive");
  require(c.optim.lr >= 0, "config: learning rate must be >= 0");
  require(c.optim.clip >= 0, "config: clip must be >= 0");
  require(c.optim.lr_drop_rate >= 1.0, "config: lr drop rate must be >= 1");
  require(c.eval.every >= 1 && c.eval.size >= 1, "config: eval settings must be positive");
  require(c.task.length >= 0, "config: task length must be >= 0");
}

}  // namespace

void task_dims(const std::string& task_kind, int* d, int* o) {
  if (task_kind == "copy") {
    *d = 10;
    *o = 10;
  } else if (task_kind == "adding") {
    *d = 2;
    *o = 1;
  } else if (task_kind == "smnist" || task_kind == "psmnist") {
    *d = 1;
    *o = 10;
  } else if (task_kind == "nscifar") {
    *d = 96;
    *o = 10;
  } else {
    throw std::invalid_argument("task_dims: unknown task " + task_kind);
  }
}

std::string default_readout(const std::string& task_kind) {
  if (task_kind == "copy") return "per-step-linear";
  if (task_kind == "adding") return "final-scalar";
  return "final-linear";
}

RunConfig default_config(const std::string& task, const std::string& model_kind) {
  RunConfig c;
  c.task.kind = task;
  c.model.kind = model_kind;
  const bool wavey = model_kind != "irnn";
  if (model_kind == "irnn") {
    c.model.u_init = "identity";
    c.model.v_init = "normal";
    c.model.c = 1;
  }
  if (task == "copy") {
    c.task.length = 30;
    c.optim.iters = 60000;
    if (wavey) {
      c.model.n = 100;
      c.model.c = 6;
      c.optim.lr = 1e-3;
      c.optim.clip = 0.0;
    } else {
      c.model.n = 100;
      c.optim.lr = 1e-4;
      c.optim.clip = 1.0;
    }
  } else if (task == "adding") {
    c.task.length = 100;
    c.optim.iters = 60000;
    if (wavey) {
      c.model.n = 100;
      c.model.c = 27;
      c.optim.lr = 1e-3;
      c.optim.clip = 100.0;
    } else {
      c.model.n = 100;
      c.optim.lr = 1e-3;
      c.optim.clip = 1000.0;
    }
  } else if (task == "smnist" || task == "psmnist") {
    c.optim.epochs = 120;
    c.optim.iters = 0;
    c.optim.lr = 1e-4;
    c.optim.lr_drop_rate = 10.0;
    c.optim.lr_drop_epoch = 100;
    if (wavey) {
      c.model.n = 256;
      c.model.c = 16;
      c.optim.clip = task == "smnist" ? 1.0 : 100.0;
    } else {
      c.model.n = 256;
      c.optim.clip = task == "smnist" ? 0.0 : 1000.0;
    }
  } else if (task == "nscifar") {
    c.optim.epochs = 250;
    c.optim.iters = 0;
    c.optim.batch_size = 256;
    c.optim.lr = wavey ? 1e-4 : 1e-5;
    c.optim.lr_drop_rate = 10.0;
    c.optim.lr_drop_epoch = 100;
    if (wavey) {
      c.model.n = 256;
      c.model.c = 16;
    } else {
      c.model.n = 529;
    }
  } else {
    throw std::invalid_argument("default_config: unknown task " + task);
  }
  return c;
}

std::string to_json_string(const RunConfig& c) {
  json j;
  j["task"] = {{"kind", c.task.kind},
               {"length", c.task.length},
               {"data_dir", c.task.data_dir},
               {"permutation_seed", c.task.permutation_seed},
               {"cifar_pad", c.task.cifar_pad}};
  j["model"] = {{"kind", c.model.kind},
                {"n", c.model.n},
                {"c", c.model.c},
                {"k", c.model.k},
                {"activation", c.model.activation},
                {"u_init", c.model.u_init},
                {"v_init", c.model.v_init},
                {"readout", c.model.readout},
                {"mlp_hidden", c.model.mlp_hidden},
                {"freeze_recurrent", c.model.freeze_recurrent},
                {"freeze_encoder", c.model.freeze_encoder},
                {"freeze_readout", c.model.freeze_readout}};
  j["optim"] = {{"lr", c.optim.lr},
                {"clip", c.optim.clip},
                {"lr_drop_rate", c.optim.lr_drop_rate},
                {"lr_drop_epoch", c.optim.lr_drop_epoch},
                {"batch_size", c.optim.batch_size},
                {"iters", c.optim.iters},
                {"epochs", c.optim.epochs},
                {"stop_metric_le", c.optim.stop_metric_le}};
  j["seeds"] = {{"params", c.seeds.params}, {"data", c.seeds.data}, {"shuffle", c.seeds.shuffle}};
  j["eval"] = {{"every", c.eval.every}, {"size", c.eval.size}};
  j["out_dir"] = c.out_dir;
  j["log_every"] = c.log_every;
  j["dump_trace"] = c.dump_trace;
  return j.dump(2);
}

RunConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  RunConfig c;
  try {
    if (j.contains("task")) {
      const auto& t = j["task"];
      c.task.kind = t.value("kind", c.task.kind);
      c.task.length = t.value("length", c.task.length);
      c.task.data_dir = t.value("data_dir", c.task.data_dir);
      c.task.permutation_seed = t.value("permutation_seed", c.task.permutation_seed);
      c.task.cifar_pad = t.value("cifar_pad", c.task.cifar_pad);
    }
    if (j.contains("model")) {
      const auto& m = j["model"];
      c.model.kind = m.value("kind", c.model.kind);
      c.model.n = m.value("n", c.model.n);
      c.model.c = m.value("c", c.model.c);
      c.model.k = m.value("k", c.model.k);
      c.model.activation = m.value("activation", c.model.activation);
      c.model.u_init = m.value("u_init", c.model.u_init);
      c.model.v_init = m.value("v_init", c.model.v_init);
      c.model.readout = m.value("readout", c.model.readout);
      c.model.mlp_hidden = m.value("mlp_hidden", c.model.mlp_hidden);
      c.model.freeze_recurrent = m.value("freeze_recurrent", c.model.freeze_recurrent);
      c.model.freeze_encoder = m.value("freeze_encoder", c.model.freeze_encoder);
      c.model.freeze_readout = m.value("freeze_readout", c.model.freeze_readout);
    }
    if (j.contains("optim")) {
      const auto& o = j["optim"];
      c.optim.lr = o.value("lr", c.optim.lr);
      c.optim.clip = o.value("clip", c.optim.clip);
      c.optim.lr_drop_rate = o.value("lr_drop_rate", c.optim.lr_drop_rate);
      c.optim.lr_drop_epoch = o.value("lr_drop_epoch", c.optim.lr_drop_epoch);
      c.optim.batch_size = o.value("batch_size", c.optim.batch_size);
      c.optim.iters = o.value("iters", c.optim.iters);
      c.optim.epochs = o.value("epochs", c.optim.epochs);
      c.optim.stop_metric_le = o.value("stop_metric_le", c.optim.stop_metric_le);
    }
    if (j.contains("seeds")) {
      const auto& s = j["seeds"];
      c.seeds.params = s.value("params", c.seeds.params);
      c.seeds.data = s.value("data", c.seeds.data);
      c.seeds.shuffle = s.value("shuffle", c.seeds.shuffle);
    }
    if (j.contains("eval")) {
      const auto& e = j["eval"];
      c.eval.every = e.value("every", c.eval.every);
      c.eval.size = e.value("size", c.eval.size);
    }
    c.out_dir = j.value("out_dir", c.out_dir);
    c.log_every = j.value("log_every", c.log_every);
    c.dump_trace = j.value("dump_trace", c.dump_trace);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad field type: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig config_from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return config_from_json_string(text);
}

void write_config(const std::string& path, const RunConfig& config) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "write_config: cannot open " + path);
  os << to_json_string(config) << "\n";
}

}  // namespace wavernn
