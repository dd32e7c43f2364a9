#include "graphaug/capi.h"

#include <string>

#include "graphaug/config.hpp"
#include "graphaug/dataset.hpp"
#include "graphaug/experiments.hpp"

namespace {

thread_local std::string g_last_error;

ga_status status_of(const graphaug::Error& e) {
  using graphaug::ErrorKind;
  switch (e.kind()) {
    case ErrorKind::InvalidArgument: return GA_ERROR_INVALID_ARGUMENT;
    case ErrorKind::Io: return GA_ERROR_IO;
    case ErrorKind::Parse: return GA_ERROR_PARSE;
    case ErrorKind::State: return GA_ERROR_STATE;
    case ErrorKind::Divergence: return GA_ERROR_DIVERGED;
    case ErrorKind::Internal: return GA_ERROR_INTERNAL;
  }
  return GA_ERROR_INTERNAL;
}

template <typename Fn>
ga_status guarded(Fn&& fn) {
  try {
    fn();
    return GA_OK;
  } catch (const graphaug::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GA_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GA_ERROR_INTERNAL;
  }
}

ga_status require(const void* p, const char* what) {
  if (p) return GA_OK;
  g_last_error = std::string("null ") + what;
  return GA_ERROR_INVALID_ARGUMENT;
}

nlohmann::json parse_config(const char* config_json) {
  try {
    return nlohmann::json::parse(config_json ? config_json : "{}");
  } catch (const nlohmann::json::parse_error& e) {
    graphaug::fail(graphaug::ErrorKind::Parse, std::string("config JSON: ") + e.what());
  }
}

}  // namespace

struct ga_dataset {
  graphaug::Dataset data;
};

extern "C" {

const char* ga_version(void) { return "1.0.0"; }

const char* ga_error_message(void) { return g_last_error.c_str(); }

ga_status ga_dataset_generate(const char* kind, int n_graphs, int min_nodes, int max_nodes,
                              uint64_t seed, ga_dataset** out) {
  if (ga_status s = require(out, "output pointer"); s != GA_OK) return s;
  if (ga_status s = require(kind, "kind"); s != GA_OK) return s;
  *out = nullptr;
  return guarded([&] {
    const std::string k = kind;
    graphaug::Dataset d;
    if (k == "colors")
      d = graphaug::gen_colors(n_graphs, {min_nodes, max_nodes}, seed);
    else if (k == "triangles")
      d = graphaug::gen_triangles(n_graphs, {min_nodes, max_nodes}, seed);
    else
      graphaug::fail(graphaug::ErrorKind::InvalidArgument,
                     "ga_dataset_generate: bad kind '" + k + "' (want colors|triangles)");
    *out = new ga_dataset{std::move(d)};
  });
}

ga_status ga_dataset_open(const char* path, ga_dataset** out) {
  if (ga_status s = require(out, "output pointer"); s != GA_OK) return s;
  if (ga_status s = require(path, "path"); s != GA_OK) return s;
  *out = nullptr;
  return guarded([&] { *out = new ga_dataset{graphaug::load_dataset(path)}; });
}

ga_status ga_dataset_open_tu(const char* directory, ga_dataset** out) {
  if (ga_status s = require(out, "output pointer"); s != GA_OK) return s;
  if (ga_status s = require(directory, "directory"); s != GA_OK) return s;
  *out = nullptr;
  return guarded([&] { *out = new ga_dataset{graphaug::parse_tu_dataset(directory)}; });
}

ga_status ga_dataset_save(const ga_dataset* dataset, const char* path) {
  if (ga_status s = require(dataset, "dataset"); s != GA_OK) return s;
  if (ga_status s = require(path, "path"); s != GA_OK) return s;
  return guarded([&] { graphaug::save_dataset(dataset->data, path); });
}

void ga_dataset_close(ga_dataset* dataset) { delete dataset; }

int ga_dataset_num_graphs(const ga_dataset* dataset) { return dataset ? dataset->data.size() : 0; }

int ga_dataset_num_classes(const ga_dataset* dataset) {
  return dataset ? dataset->data.num_classes : 0;
}

int ga_dataset_feature_dim(const ga_dataset* dataset) {
  return dataset ? dataset->data.feature_dim : 0;
}

int ga_dataset_label(const ga_dataset* dataset, int index) {
  if (!dataset || index < 0 || index >= dataset->data.size()) return 0;
  return dataset->data.graphs[static_cast<std::size_t>(index)].label;
}

ga_status ga_gen_data(const char* config_json, const char* out_dir) {
  if (ga_status s = require(out_dir, "out_dir"); s != GA_OK) return s;
  return guarded([&] { graphaug::experiments::gen_data(parse_config(config_json), out_dir); });
}

ga_status ga_train_reward(const char* config_json, const char* out_dir) {
  if (ga_status s = require(out_dir, "out_dir"); s != GA_OK) return s;
  return guarded(
      [&] { graphaug::experiments::train_reward_stage(parse_config(config_json), out_dir); });
}

ga_status ga_train_policy(const char* config_json, const char* out_dir) {
  if (ga_status s = require(out_dir, "out_dir"); s != GA_OK) return s;
  return guarded(
      [&] { graphaug::experiments::train_policy_stage(parse_config(config_json), out_dir); });
}

ga_status ga_train_classifier(const char* config_json, const char* out_dir) {
  if (ga_status s = require(out_dir, "out_dir"); s != GA_OK) return s;
  return guarded(
      [&] { graphaug::experiments::train_classifier_stage(parse_config(config_json), out_dir); });
}

ga_status ga_reproduce(const char* config_json, const char* out_dir) {
  if (ga_status s = require(out_dir, "out_dir"); s != GA_OK) return s;
  return guarded([&] { graphaug::experiments::reproduce(parse_config(config_json), out_dir); });
}

}  // extern "C"
