#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/config.hpp"

namespace frontlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string name;
    std::vector<CheckResult> checks;
    nlohmann::json summary;
    int exit_code = 0;  ///< 0 all checks pass, 1 a check failed, 3 nonconvergence
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Runs a named experiment, writes its CSVs and summary.json under out_dir and
/// returns the report. Unknown names throw InvalidArgument.
ExperimentReport run_experiment(const std::string& name, const RunConfig& cfg,
                                const std::filesystem::path& out_dir, int threads = 1);

}  // namespace frontlab
