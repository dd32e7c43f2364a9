#include "graphaug/config.hpp"

#include <algorithm>

namespace graphaug {

void validate_keys(const nlohmann::json& j, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) return;
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      fail(ErrorKind::InvalidArgument, "config: unknown key '" + key + "' in " + where);
  }
}

std::uint64_t config_hash(const nlohmann::json& resolved) {
  const std::string dump = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const nlohmann::json& resolved) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(resolved)));
  return buf;
}

DatasetConfig DatasetConfig::from_json(const nlohmann::json& j) {
  validate_keys(j, "dataset",
                {"kind", "path", "n_graphs", "min_nodes", "max_nodes", "seed", "degree_cap",
                 "n_train", "n_val", "n_test"});
  DatasetConfig cfg;
  cfg.kind = j.value("kind", cfg.kind);
  cfg.path = j.value("path", cfg.path);
  cfg.n_graphs = j.value("n_graphs", 0);
  cfg.min_nodes = j.value("min_nodes", 0);
  cfg.max_nodes = j.value("max_nodes", 0);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.degree_cap = j.value("degree_cap", cfg.degree_cap);
  cfg.n_train = j.value("n_train", 0);
  cfg.n_val = j.value("n_val", 0);
  cfg.n_test = j.value("n_test", 0);

  if (cfg.kind == "colors" || cfg.kind == "triangles") {
    // desk-scale defaults; paper scale reachable by overriding these fields
    if (cfg.n_graphs == 0) {
      if (cfg.n_train == 0) cfg.n_train = cfg.kind == "colors" ? 2000 : 5000;
      if (cfg.n_val == 0) cfg.n_val = cfg.kind == "colors" ? 500 : 1000;
      if (cfg.n_test == 0) cfg.n_test = cfg.kind == "colors" ? 500 : 1000;
    }
    if (cfg.min_nodes == 0) cfg.min_nodes = cfg.kind == "colors" ? 4 : 8;
    if (cfg.max_nodes == 0) cfg.max_nodes = 25;
  } else if (cfg.kind == "tu" || cfg.kind == "file") {
    check_arg(!cfg.path.empty(), "config: dataset kind '" + cfg.kind + "' requires 'path'");
  } else {
    fail(ErrorKind::InvalidArgument,
         "config: bad dataset kind '" + cfg.kind + "' (want colors|triangles|tu|file)");
  }
  return cfg;
}

nlohmann::json DatasetConfig::to_json() const {
  nlohmann::json j = {{"kind", kind},           {"seed", seed},      {"degree_cap", degree_cap},
                      {"min_nodes", min_nodes}, {"max_nodes", max_nodes},
                      {"n_train", n_train},     {"n_val", n_val},    {"n_test", n_test}};
  if (n_graphs > 0) j["n_graphs"] = n_graphs;
  if (!path.empty()) j["path"] = path;
  return j;
}

Dataset DatasetConfig::materialize() const {
  if (kind == "colors")
    return gen_colors(total_graphs(), {min_nodes, max_nodes}, seed);
  if (kind == "triangles")
    return gen_triangles(total_graphs(), {min_nodes, max_nodes}, seed);
  if (kind == "tu") return parse_tu_dataset(path, degree_cap);
  return load_dataset(path);
}

SplitSpec DatasetConfig::fixed_split_spec() const {
  check_arg(n_train > 0 && n_val > 0 && n_test > 0,
            "config: fixed split needs n_train/n_val/n_test (dataset kind '" + kind + "')");
  return fixed_split(n_train, n_val, n_test);
}

ClassifierStageConfig ClassifierStageConfig::from_json(const nlohmann::json& j) {
  validate_keys(j, "classifier",
                {"model", "layers", "hidden", "readout", "epochs", "batch_size", "lr", "seeds",
                 "augment", "policy_checkpoint", "eval"});
  ClassifierStageConfig cfg;
  cfg.model = j.value("model", cfg.model);
  cfg.layers = j.value("layers", cfg.layers);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.readout = j.value("readout", cfg.readout);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.lr = j.value("lr", cfg.lr);
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("augment")) {
    const auto& a = j.at("augment");
    validate_keys(a, "classifier.augment", {"mode", "kind", "rate", "steps", "cap", "apply_cap"});
    cfg.augment_mode = a.value("mode", cfg.augment_mode);
    cfg.augment_kind = a.value("kind", cfg.augment_kind);
    cfg.rate = a.value("rate", cfg.rate);
    cfg.steps = a.value("steps", cfg.steps);
    cfg.cap = a.value("cap", cfg.cap);
    cfg.apply_cap = a.value("apply_cap", cfg.apply_cap);
  }
  cfg.policy_checkpoint = j.value("policy_checkpoint", cfg.policy_checkpoint);
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    validate_keys(e, "classifier.eval", {"protocol", "folds", "repeats"});
    cfg.protocol = e.value("protocol", cfg.protocol);
    cfg.folds = e.value("folds", cfg.folds);
    cfg.repeats = e.value("repeats", cfg.repeats);
  }
  check_arg(cfg.protocol == "fixed" || cfg.protocol == "cv",
            "config: bad eval protocol '" + cfg.protocol + "' (want fixed|cv)");
  return cfg;
}

nlohmann::json ClassifierStageConfig::to_json() const {
  return {{"model", model},
          {"layers", layers},
          {"hidden", hidden},
          {"readout", readout},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"lr", lr},
          {"seeds", seeds},
          {"augment",
           {{"mode", augment_mode},
            {"kind", augment_kind},
            {"rate", rate},
            {"steps", steps},
            {"cap", cap},
            {"apply_cap", apply_cap}}},
          {"policy_checkpoint", policy_checkpoint},
          {"eval", {{"protocol", protocol}, {"folds", folds}, {"repeats", repeats}}}};
}

std::string default_readout_for(const std::string& dataset_name) {
  if (dataset_name == "COLORS") return "max";
  if (dataset_name == "TRIANGLES") return "sum";
  return "mean";
}

}  // namespace graphaug
