#ifndef ABRLAB_RUNNER_HPP
#define ABRLAB_RUNNER_HPP

#include <filesystem>

#include "abrlab/config.hpp"

namespace abrlab {

struct RunArtifacts {
    std::filesystem::path manifest;
    std::filesystem::path summary;
    std::filesystem::path distribution;  // empty for models without one
    std::filesystem::path outcomes;      // stochastic models only
    std::filesystem::path convergence;   // limit_study only
};

/// Execute a validated config and write its artifacts. Output directory is
/// config.output_dir unless the ABRLAB_OUTPUT_DIR environment variable
/// overrides it. All result files are deterministic for a given config and
/// seed; wall time appears only in the manifest.
RunArtifacts run_experiment(const ExperimentConfig& config);

}  // namespace abrlab

#endif
