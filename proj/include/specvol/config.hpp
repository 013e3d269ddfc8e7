#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "specvol/mcharness.hpp"

namespace specvol {

/// Experiment configuration as JSON.
///
///   {
///     "name": "table1",
///     "model": {"type": "heston", "mu": 0.05, ...} | {"type": "brownian", "sig2": 0.01}
///              | {"type": "ou", "sig2": 0.01, "theta": -1},
///     "grid": {"N": 23400, "T": 0.003968...} or {"N": 23400, "days": 1},
///     "noise": {"type": "white", "sig2": 2.5e-7} | {"type": "ma", "theta": [...], "sig2_eta": v},
///     "estimators": ["b", "m1", ...],
///     "paths": 2000, "master_seed": 1,
///     "noise_model": "white" | "ma:q" | "aicc:qmax",
///     "fit": {"rel_tol": 1e-10, "max_evals_per_dim": 500, "multistarts": 3, "q_max": 8},
///     "tsrv_k": 33, "tsrv_noise": "realized" | "whittle"
///   }
///
/// Missing keys take the defaults of ExperimentConfig. Errors name the key.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

} // namespace specvol
