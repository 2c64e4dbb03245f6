#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lobscale/io.hpp"

namespace lobscale {

/// Driver configuration: experiment name, experiment-specific parameters
/// (schema-checked, unknown keys rejected), replication/seeding/threading and
/// the output directory. The fully resolved configuration is written next to
/// the outputs of every run.
struct ExperimentConfig {
    std::string name;
    json params;  // experiment-specific; defaults filled in by resolve
    std::uint64_t seed = 12345;
    std::int64_t replications = 0;  // 0 = experiment default
    int threads = 1;
    std::filesystem::path out_dir = "out";
};

const std::vector<std::string>& experiment_names();

/// Validates, fills defaults, runs, writes artifacts, returns the summary
/// (also written as summary.json in out_dir).
json run_experiment(const ExperimentConfig& cfg);

}  // namespace lobscale
