#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "graphaug/dataset.hpp"
#include "graphaug/transforms.hpp"

namespace graphaug {

// Rejects keys outside `allowed`; `where` names the section in the error.
void validate_keys(const nlohmann::json& j, const std::string& where,
                   std::initializer_list<const char*> allowed);

// FNV-1a over the canonical (sorted-key) dump; recorded with every stage.
std::uint64_t config_hash(const nlohmann::json& resolved);
std::string config_hash_hex(const nlohmann::json& resolved);

// --- dataset section ----------------------------------------------------------

struct DatasetConfig {
  std::string kind = "colors";  // colors | triangles | tu | file
  std::string path;             // tu directory or serialized dataset file
  int n_graphs = 0;             // explicit total for generation; 0 = sum of split sizes
  int min_nodes = 0, max_nodes = 0;  // 0 = per-kind default
  std::uint64_t seed = 1;
  int degree_cap = 64;
  // fixed split sizes; 0 = per-kind desk-scale default
  int n_train = 0, n_val = 0, n_test = 0;

  static DatasetConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int total_graphs() const { return n_graphs > 0 ? n_graphs : n_train + n_val + n_test; }
  Dataset materialize() const;          // generate / load / parse
  SplitSpec fixed_split_spec() const;   // contiguous blocks
};

// --- classifier stage section ----------------------------------------------------

struct ClassifierStageConfig {
  std::string model = "gin";
  int layers = 3;
  int hidden = 64;
  std::string readout;  // empty = per-dataset default (max COLORS, sum TRIANGLES, mean TU)
  int epochs = 50;
  int batch_size = 32;
  double lr = 1e-3;
  std::vector<std::uint64_t> seeds = {3, 4, 5, 6, 7};

  std::string augment_mode = "none";  // none | uniform | gt | policy
  std::string augment_kind = "masknf";
  double rate = kDefaultUniformRate;
  int steps = 8;
  double cap = 0.05;
  bool apply_cap = true;
  std::string policy_checkpoint;

  std::string protocol = "fixed";  // fixed | cv
  int folds = 10;
  int repeats = 3;

  static ClassifierStageConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

std::string default_readout_for(const std::string& dataset_name);

}  // namespace graphaug
