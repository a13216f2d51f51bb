#pragma once

#include <string>
#include <vector>

#include "polariton2d/model.hpp"

namespace p2d {

/// "min:max:count" frequency axis.
struct GridSpec {
    double min_ev = 0.0;
    double max_ev = 0.0;
    int count = 0;
    Eigen::VectorXd values() const;
};

/// Everything a run needs, resolved from one config file. Unknown keys are
/// rejected at parse time; writing and re-reading a config is lossless.
struct RunConfig {
    ModelParams model;
    DephasingModel dephasing = DephasingModel::Brw;

    std::vector<std::string> tasks;
    std::string output_directory = "out";
    bool write_text = true;
    bool write_binary = false;

    GridSpec grid_tau, grid_t;          // 2D axes
    GridSpec grid_linear;               // absorption axis
    GridSpec grid_emission_excitation;  // laser axis
    GridSpec grid_emission_detection;   // emission axis

    std::vector<double> waiting_times_fs = {0.0};
    std::vector<std::string> twod_components = {"absorptive"};
    double prune_threshold = 1e-6;
    bool oracle_check = false;

    std::vector<std::string> pathway_names = {"GSB", "GSR", "SE", "ESA", "ESAprime"};

    std::vector<std::string> buildup_stages = {"after-pulse-2", "after-T", "after-pulse-3",
                                               "detection"};
    double buildup_cut_ev = 0.0; // 0 -> upper polariton line

    std::vector<std::string> trace_peaks = {"LL", "LU", "UL", "UU"};
    double trace_t_max_fs = 0.0; // 0 -> five Rabi periods
    int trace_t_count = 251;

    double popdyn_c_l = 0.70710678118654752;
    double popdyn_c_u = 0.70710678118654752;
    double popdyn_t_max_fs = 300.0;
    int popdyn_t_count = 301;

    std::string fit_peak = "LL";

    double emission_drive_ev = -1.0; // negative -> 1e-3 * rabi
    bool emission_linearity_check = true;

    /// Fills grid definitions that were left empty from the model scales.
    void resolve_defaults();
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string write_config(const RunConfig& config);

} // namespace p2d
