// Command-line front end: every subcommand reads one config file and runs
// the corresponding task (the `run` subcommand executes the config's task
// list). Exit codes: 0 success, 2 configuration error, 3 numerical failure.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "polariton2d/constants.hpp"
#include "polariton2d/errors.hpp"
#include "polariton2d/tasks.hpp"

namespace {

int execute(const std::string& config_path, const std::string& task) {
    const p2d::RunConfig config = p2d::parse_config_file(config_path);
    p2d::RunResult result;
    if (task == "run") {
        result = p2d::run(config);
    } else {
        result = p2d::run(config, {task});
    }
    if (!result.validate_report.empty()) std::fputs(result.validate_report.c_str(), stdout);
    for (const auto& t : result.timings)
        std::fprintf(stderr, "%s: %.1f ms\n", t.task.c_str(), t.milliseconds);
    if (!result.output_files.empty())
        std::fprintf(stderr, "wrote %zu file(s) to %s\n", result.output_files.size(),
                     config.output_directory.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("polariton 2D electronic spectroscopy simulator v") +
                 p2d::version_string};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);

    const char* subcommands[] = {"run",     "eig",   "linear", "emission", "twod", "pathways",
                                 "buildup", "trace", "popdyn", "fit",      "validate"};
    const char* descriptions[] = {
        "execute the task list from the config file",
        "eigenvalue table and block structure of the Liouvillian",
        "linear absorption spectrum",
        "excitation-emission map under weak cw drive",
        "2D spectra at the configured waiting times",
        "Feynman-pathway decomposition of the 2D spectrum",
        "stage-by-stage build-up traces",
        "peak amplitude versus waiting time",
        "population dynamics from a polariton superposition",
        "decay-parameter fit of a peak trace",
        "parameter and grid diagnostics",
    };
    for (size_t i = 0; i < std::size(subcommands); ++i)
        app.add_subcommand(subcommands[i], descriptions[i])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string task = app.get_subcommands().front()->get_name();
    try {
        return execute(config_path, task);
    } catch (const p2d::NumericalError& e) {
        std::fprintf(stderr, "numerical failure in task '%s': %s\n", task.c_str(), e.what());
        return 3;
    } catch (const p2d::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
