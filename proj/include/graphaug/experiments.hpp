#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace graphaug::experiments {

// Each stage writes its outputs (checkpoints, CSV reports, summary.json) plus
// the exact resolved config and its hash into `out_dir`.
void gen_data(const nlohmann::json& config, const std::string& out_dir);
void train_reward_stage(const nlohmann::json& config, const std::string& out_dir);
void train_policy_stage(const nlohmann::json& config, const std::string& out_dir);
void train_classifier_stage(const nlohmann::json& config, const std::string& out_dir);

// Full pipeline presets: "colors-ordering", "triangles-suite", "smoke".
void reproduce(const nlohmann::json& config, const std::string& out_dir);

// Minimal SVG emitters for flag-gated static plots.
void write_svg_bars(const std::string& path, const std::string& title,
                    const std::vector<std::pair<std::string, double>>& bars);
void write_svg_curve(const std::string& path, const std::string& title,
                     const std::vector<double>& values);

}  // namespace graphaug::experiments
