#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gnv/mc.hpp"

namespace gnv {

/// Reads an experiment configuration. Every key is optional; unknown keys and wrong types
/// raise ConfigError. Schema:
///
///     {
///       "kernel": {"name": "fbm" | "subfbm", "H": 0.7},
///       "params": {"k": 1.0, "mu": 2.0, "sigma": 1.0},
///       "x0": 0.0,
///       "T_list": [100, 400],
///       "dt": 0.05,
///       "replications": 200,
///       "master_seed": 42,
///       "modes": ["pathwise", "skorohod_oracle", "skorohod_plugin"],
///       "sampler": "circulant" | "cholesky",
///       "scheme": "exact_recursion" | "euler"
///     }
///
/// When "sampler" is absent it defaults to circulant for fbm and cholesky otherwise.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace gnv
