#pragma once

#include <string>
#include <vector>

#include "polariton2d/run_config.hpp"

namespace p2d {

struct TaskTiming {
    std::string task;
    double milliseconds = 0.0;
};

struct RunResult {
    std::vector<std::string> output_files; ///< relative to the output directory
    std::vector<TaskTiming> timings;
    std::string validate_report; ///< filled by the validate task
};

/// Executes the config's task list (or the override), writes every output
/// file plus a manifest recording the full configuration, library version,
/// per-task timing and the retained eigenvalue labels. An empty task list
/// still writes the manifest.
RunResult run(const RunConfig& config);
RunResult run(const RunConfig& config, const std::vector<std::string>& tasks);

} // namespace p2d
