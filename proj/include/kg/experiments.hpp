#pragma once

#include "kg/config.hpp"
#include "kg/manifest.hpp"

namespace kg {

/// Validates, runs the named experiment, writes CSV artifacts plus
/// manifest.json into cfg.output_dir, and returns the manifest.
/// Throws std::invalid_argument for unrunnable configs.
RunManifest run_experiment(const ExperimentConfig& cfg);

}  // namespace kg
