#include "polariton2d/tasks.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "polariton2d/analysis.hpp"
#include "polariton2d/constants.hpp"
#include "polariton2d/errors.hpp"
#include "polariton2d/linear_spectra.hpp"
#include "polariton2d/output.hpp"
#include "polariton2d/pathways.hpp"
#include "polariton2d/twodes.hpp"

namespace p2d {

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string grid_header(const std::string& name, const Eigen::VectorXd& axis) {
    return name + "_ev: " + format_double(axis.minCoeff()) + " " +
           format_double(axis.maxCoeff()) + " " + std::to_string(axis.size());
}

// Lazily built shared state: most tasks need the eigensystem, several the
// decomposition and the default masks.
struct Context {
    const RunConfig& cfg;
    std::optional<HamiltonianSystem> sys_;
    std::optional<LiouvilleEigendecomposition> eig_;
    std::optional<MaskSet> masks_;

    explicit Context(const RunConfig& c) : cfg(c) {}

    const HamiltonianSystem& sys() {
        if (!sys_) sys_ = build_hamiltonian(cfg.model);
        return *sys_;
    }
    const LiouvilleEigendecomposition& eig() {
        if (!eig_) {
            const auto L = assemble_liouvillian(sys(), cfg.model.kappa_ev(), cfg.model.bath(),
                                                cfg.dephasing);
            eig_ = diagonalize(L, sys());
        }
        return *eig_;
    }
    const MaskSet& masks() {
        if (!masks_)
            masks_ = build_masks(eig(), sys(), cfg.grid_tau.values(), cfg.grid_t.values(),
                                 cfg.prune_threshold);
        return *masks_;
    }
};

struct Sink {
    const RunConfig& cfg;
    std::filesystem::path dir;
    RunResult& result;
    std::vector<std::string> notes; ///< free-form manifest lines (oracle checks etc.)

    std::string path(const std::string& name) const { return (dir / name).string(); }
    void record(const std::string& name) { result.output_files.push_back(name); }
};

void write_spectrum2d(Sink& sink, const std::string& base, SpectrumGrid2D spec) {
    spec.normalize_max_abs();
    const std::vector<std::string> header = {
        std::string("polariton2d v") + version_string,
        "table: spectrum2d",
        "component: " + spec.component,
        "waiting_time_fs: " + format_double(spec.waiting_time_fs),
        grid_header("omega_tau", spec.omega_tau_ev),
        grid_header("omega_t", spec.omega_t_ev),
        "normalization: max_abs " + format_double(spec.normalization),
    };
    if (sink.cfg.write_text) {
        Eigen::MatrixXd rows(spec.values.rows() * spec.values.cols(), 4);
        int r = 0;
        for (int i = 0; i < spec.values.rows(); ++i)
            for (int j = 0; j < spec.values.cols(); ++j, ++r)
                rows.row(r) << spec.omega_tau_ev(i), spec.omega_t_ev(j), spec.values(i, j).real(),
                    spec.values(i, j).imag();
        write_text_table(sink.path(base + ".txt"), header, {"omega_tau_ev", "omega_t_ev", "re", "im"},
                         rows);
        sink.record(base + ".txt");
    }
    if (sink.cfg.write_binary) {
        write_binary_table(sink.path(base + ".bin"), static_cast<int>(spec.values.rows()),
                           static_cast<int>(spec.values.cols()), true,
                           reinterpret_cast<const double*>(spec.values.data()));
        sink.record(base + ".bin");
    }
}

std::string waiting_tag(int index) { return "T" + std::to_string(index); }

void task_eig(Context& ctx, Sink& sink) {
    const auto& eig = ctx.eig();
    std::ofstream out(sink.path("eig_table.txt"), std::ios::binary);
    out << "# polariton2d v" << version_string << "\n";
    out << "# table: liouvillian eigenvalues\n";
    out << "# n_emitters: " << ctx.cfg.model.n_emitters << "  dim: " << ctx.sys().dim << "\n";
    out << "# eigenvector condition estimate: " << format_double(eig.condition_number) << "\n";
    out << "# columns: index re_lambda_ev im_lambda_ev gamma_ev omega_ev ket bra confidence\n";
    for (int k = 0; k < eig.eigenvalues.size(); ++k) {
        out << k << " " << format_double(eig.eigenvalues(k).real()) << " "
            << format_double(eig.eigenvalues(k).imag()) << " "
            << format_double(-eig.eigenvalues(k).real()) << " "
            << format_double(-eig.eigenvalues(k).imag()) << " " << eig.labels[k].ket << " "
            << eig.labels[k].bra << " " << format_double(eig.labels[k].confidence) << "\n";
    }
    sink.record("eig_table.txt");

    const auto parts = assemble_liouvillian_parts(ctx.sys(), ctx.cfg.model.kappa_ev(),
                                                  ctx.cfg.model.bath(), ctx.cfg.dephasing);
    const auto report = block_structure(parts);
    std::ofstream blocks(sink.path("block_structure.txt"), std::ios::binary);
    blocks << "# polariton2d v" << version_string << "\n";
    blocks << "# table: liouvillian block map (H coherent, P photon loss, D dephasing, B both)\n";
    blocks << "# blocks: " << report.blocks.size() << "\n";
    blocks << report.map_string(ctx.sys());
    sink.record("block_structure.txt");
}

void task_linear(Context& ctx, Sink& sink) {
    const auto spec = absorption(ctx.eig(), ctx.sys(), ctx.cfg.grid_linear.values());
    Eigen::MatrixXd rows(spec.omega_ev.size(), 2);
    rows.col(0) = spec.omega_ev;
    rows.col(1) = spec.values;
    write_text_table(sink.path("absorption.txt"),
                     {std::string("polariton2d v") + version_string, "table: absorption",
                      grid_header("omega", spec.omega_ev),
                      "normalization: max_abs " + format_double(spec.normalization)},
                     {"omega_ev", "value"}, rows);
    sink.record("absorption.txt");
}

void task_emission(Context& ctx, Sink& sink) {
    EmissionOptions opts;
    opts.drive_ev = ctx.cfg.emission_drive_ev;
    opts.linearity_check = ctx.cfg.emission_linearity_check;
    const auto map = emission_map(ctx.sys(), ctx.cfg.model.kappa_ev(), ctx.cfg.model.bath(),
                                  ctx.cfg.dephasing, ctx.cfg.grid_emission_excitation.values(),
                                  ctx.cfg.grid_emission_detection.values(), opts);
    Eigen::MatrixXd rows(map.values.rows() * map.values.cols(), 3);
    int r = 0;
    for (int i = 0; i < map.values.rows(); ++i)
        for (int j = 0; j < map.values.cols(); ++j, ++r)
            rows.row(r) << map.omega_laser_ev(i), map.omega_ev(j), map.values(i, j);
    write_text_table(sink.path("emission_map.txt"),
                     {std::string("polariton2d v") + version_string, "table: emission map",
                      grid_header("omega_laser", map.omega_laser_ev),
                      grid_header("omega", map.omega_ev),
                      "normalization: max_abs " + format_double(map.normalization)},
                     {"omega_laser_ev", "omega_ev", "value"}, rows);
    sink.record("emission_map.txt");
}

Component component_from_name(const std::string& name) {
    if (name == "r") return Component::Rephasing;
    if (name == "nr") return Component::NonRephasing;
    if (name == "total") return Component::Total;
    return Component::Absorptive;
}

void task_twod(Context& ctx, Sink& sink) {
    for (size_t ti = 0; ti < ctx.cfg.waiting_times_fs.size(); ++ti) {
        const double T = ctx.cfg.waiting_times_fs[ti];
        for (const auto& comp : ctx.cfg.twod_components) {
            const auto spec = spectrum_2d(ctx.masks(), T, component_from_name(comp));
            write_spectrum2d(sink, "twod_" + comp + "_" + waiting_tag(static_cast<int>(ti)),
                             spec);
        }
        if (ctx.cfg.oracle_check) {
            const auto ospec = default_oracle_spec(ctx.eig(), ctx.sys());
            const auto oracle =
                time_domain_oracle(ctx.eig(), ctx.sys(), T, Component::Absorptive, ospec);
            const auto fine = build_masks(ctx.eig(), ctx.sys(), oracle.omega_tau_ev,
                                          oracle.omega_t_ev, 0.0);
            const auto direct = spectrum_2d(fine, T, Component::Absorptive);
            const double dist =
                (oracle.values - direct.values).norm() / direct.values.norm();
            sink.notes.push_back("oracle_relative_l2 T=" + format_double(T) + ": " +
                                 format_double(dist));
        }
    }
}

void task_pathways(Context& ctx, Sink& sink) {
    for (size_t ti = 0; ti < ctx.cfg.waiting_times_fs.size(); ++ti) {
        const double T = ctx.cfg.waiting_times_fs[ti];
        for (const auto& name : ctx.cfg.pathway_names) {
            const auto spec =
                pathway_spectrum(ctx.eig(), ctx.sys(), ctx.cfg.grid_tau.values(),
                                 ctx.cfg.grid_t.values(), T, pathway_from_name(name),
                                 ctx.cfg.prune_threshold);
            write_spectrum2d(sink, "pathway_" + name + "_" + waiting_tag(static_cast<int>(ti)),
                             spec);
        }
    }
}

void task_buildup(Context& ctx, Sink& sink) {
    const double cut = ctx.cfg.buildup_cut_ev > 0.0
                           ? ctx.cfg.buildup_cut_ev
                           : ctx.sys().transition_from_ground_ev("U");
    for (size_t ti = 0; ti < ctx.cfg.waiting_times_fs.size(); ++ti) {
        const double T = ctx.cfg.waiting_times_fs[ti];
        for (const auto& stage_name : ctx.cfg.buildup_stages) {
            const auto stage = buildup_stage_from_name(stage_name);
            const bool detection = stage == BuildupStage::Detection;
            const auto trace =
                buildup_trace(ctx.eig(), ctx.sys(), stage, T,
                              detection ? ctx.cfg.grid_t.values() : ctx.cfg.grid_tau.values(),
                              cut);
            Eigen::MatrixXd rows(trace.omega_ev.size(), trace.values.cols() + 1);
            rows.col(0) = trace.omega_ev;
            rows.rightCols(trace.values.cols()) = trace.values;
            std::vector<std::string> columns = {detection ? "omega_t_ev" : "omega_tau_ev"};
            for (auto& c : trace.components) columns.push_back(c);
            std::vector<std::string> header = {
                std::string("polariton2d v") + version_string, "table: buildup",
                "stage: " + stage_name, "waiting_time_fs: " + format_double(T)};
            if (detection) header.push_back("omega_tau_cut_ev: " + format_double(cut));
            const std::string base =
                "buildup_" + stage_name + "_" + waiting_tag(static_cast<int>(ti)) + ".txt";
            write_text_table(sink.path(base), header, columns, rows);
            sink.record(base);
        }
    }
}

Eigen::VectorXd trace_times(const RunConfig& cfg) {
    Eigen::VectorXd t(cfg.trace_t_count);
    for (int i = 0; i < cfg.trace_t_count; ++i)
        t(i) = cfg.trace_t_max_fs * i / (cfg.trace_t_count - 1);
    return t;
}

PeakId peak_from_name(const std::string& name) {
    if (name == "LL") return PeakId::LL;
    if (name == "LU") return PeakId::LU;
    if (name == "UL") return PeakId::UL;
    if (name == "UU") return PeakId::UU;
    throw InvalidParams("unknown peak '" + name + "' (expected LL, LU, UL or UU)");
}

void task_trace(Context& ctx, Sink& sink) {
    const auto times = trace_times(ctx.cfg);
    for (const auto& name : ctx.cfg.trace_peaks) {
        const auto trace = peak_trace(ctx.masks(), peak_from_name(name), times);
        Eigen::MatrixXd rows(times.size(), 8);
        for (int i = 0; i < times.size(); ++i)
            rows.row(i) << times(i), trace.values(i).real(), trace.values(i).imag(),
                trace.abs_values(i), trace.population_part(i).real(),
                trace.population_part(i).imag(), trace.coherence_part(i).real(),
                trace.coherence_part(i).imag();
        const std::string base = "trace_" + name + ".txt";
        write_text_table(sink.path(base),
                         {std::string("polariton2d v") + version_string, "table: peak trace",
                          "peak: " + peak_name(peak_from_name(name)),
                          "omega_tau_ev: " + format_double(trace.omega_tau_ev),
                          "omega_t_ev: " + format_double(trace.omega_t_ev)},
                         {"T_fs", "re", "im", "abs", "pop_re", "pop_im", "coh_re", "coh_im"},
                         rows);
        sink.record(base);
    }
}

void task_popdyn(Context& ctx, Sink& sink) {
    Eigen::VectorXd t(ctx.cfg.popdyn_t_count);
    for (int i = 0; i < ctx.cfg.popdyn_t_count; ++i)
        t(i) = ctx.cfg.popdyn_t_max_fs * i / (ctx.cfg.popdyn_t_count - 1);
    const auto pops =
        population_dynamics(ctx.eig(), ctx.sys(), ctx.cfg.popdyn_c_l, ctx.cfg.popdyn_c_u, t);
    Eigen::MatrixXd rows(t.size(), pops.cols() + 1);
    rows.col(0) = t;
    rows.rightCols(pops.cols()) = pops;
    std::vector<std::string> columns = {"t_fs"};
    for (auto& l : ctx.sys().labels) columns.push_back(l);
    write_text_table(sink.path("popdyn.txt"),
                     {std::string("polariton2d v") + version_string,
                      "table: population dynamics",
                      "c_l: " + format_double(ctx.cfg.popdyn_c_l),
                      "c_u: " + format_double(ctx.cfg.popdyn_c_u)},
                     columns, rows);
    sink.record("popdyn.txt");
}

void task_fit(Context& ctx, Sink& sink) {
    const auto times = trace_times(ctx.cfg);
    const auto trace = peak_trace(ctx.masks(), peak_from_name(ctx.cfg.fit_peak), times);
    const auto fit = fit_ll_peak(trace);
    std::ofstream out(sink.path("fit_" + ctx.cfg.fit_peak + ".txt"), std::ios::binary);
    out << "# polariton2d v" << version_string << "\n";
    out << "# table: decay fit of the " << peak_name(peak_from_name(ctx.cfg.fit_peak))
        << " trace\n";
    const char* status = fit.status == FitStatus::Converged
                             ? "converged"
                             : (fit.status == FitStatus::DegenerateTrace ? "degenerate-trace"
                                                                         : "no-convergence");
    out << "status: " << status << "\n";
    out << "a: " << format_double(fit.a) << "\n";
    out << "b: " << format_double(fit.b) << "\n";
    out << "c: " << format_double(fit.c) << "\n";
    out << "gamma_ll_ev: " << format_double(fit.gamma_ll_ev) << "\n";
    out << "gamma_ul_ev: " << format_double(fit.gamma_ul_ev) << "\n";
    out << "omega_r_ev: " << format_double(fit.omega_r_ev) << "\n";
    out << "kappa_lifetime_fs: " << format_double(fit.kappa_lifetime_fs()) << "\n";
    out << "gamma_lifetime_fs: " << format_double(fit.gamma_lifetime_fs()) << "\n";
    out << "residual_rms: " << format_double(fit.residual) << "\n";
    out << "starts_agree: " << (fit.starts_agree ? "true" : "false") << "\n";
    sink.record("fit_" + ctx.cfg.fit_peak + ".txt");
    if (fit.status == FitStatus::NoConvergence)
        throw NumericalError("decay fit did not converge (residual " +
                             format_double(fit.residual) + ")");
}

std::string validate_report(Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::ostringstream out;
    const int dim = ctx.sys().dim;
    const double kappa_mev = cfg.model.kappa_ev() * 1e3;
    const double gamma_mev = cfg.model.gamma_ev() * 1e3;
    char buf[160];
    std::snprintf(buf, sizeof buf, "model: N=%d, dim=%d, Liouville dimension %d\n",
                  cfg.model.n_emitters, dim, dim * dim);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "rates: hbar*kappa = %.2f meV (lifetime %g fs), hbar*gamma = %.2f meV "
                  "(lifetime %g fs)\n",
                  kappa_mev, cfg.model.kappa_lifetime_fs, gamma_mev, cfg.model.gamma_lifetime_fs);
    out << buf;
    std::snprintf(buf, sizeof buf, "coupling: g = %.3f meV, Rabi period = %.3f fs\n",
                  cfg.model.coupling_g_ev() * 1e3, cfg.model.rabi_period_fs());
    out << buf;
    const double mem_gb = 3.0 * 16.0 * std::pow(static_cast<double>(dim), 4) / 1e9;
    std::snprintf(buf, sizeof buf, "memory: ~%.2f GB for the dense decomposition\n", mem_gb);
    out << buf;
    if (dim * dim > 1000)
        out << "note: dense eigensolve at this size is expected to take seconds to minutes\n";
    const double step = (cfg.grid_tau.max_ev - cfg.grid_tau.min_ev) / (cfg.grid_tau.count - 1);
    if (step > cfg.model.rabi_splitting_ev / 10.0)
        out << "warning: omega_tau grid step exceeds one tenth of the Rabi splitting\n";
    const double step_t = (cfg.grid_t.max_ev - cfg.grid_t.min_ev) / (cfg.grid_t.count - 1);
    if (step_t > cfg.model.rabi_splitting_ev / 10.0)
        out << "warning: omega_t grid step exceeds one tenth of the Rabi splitting\n";
    if (cfg.model.n_max < 2)
        out << "warning: third-order spectra need n_max >= 2\n";
    return out.str();
}

} // namespace

RunResult run(const RunConfig& config, const std::vector<std::string>& tasks) {
    RunResult result;
    Context ctx(config);
    std::filesystem::create_directories(config.output_directory);
    Sink sink{config, config.output_directory, result, {}};

    for (const auto& task : tasks) {
        const auto start = std::chrono::steady_clock::now();
        if (task == "eig") task_eig(ctx, sink);
        else if (task == "linear") task_linear(ctx, sink);
        else if (task == "emission") task_emission(ctx, sink);
        else if (task == "twod") task_twod(ctx, sink);
        else if (task == "pathways") task_pathways(ctx, sink);
        else if (task == "buildup") task_buildup(ctx, sink);
        else if (task == "trace") task_trace(ctx, sink);
        else if (task == "popdyn") task_popdyn(ctx, sink);
        else if (task == "fit") task_fit(ctx, sink);
        else if (task == "validate") result.validate_report += validate_report(ctx);
        else throw ConfigError("unknown task '" + task + "'");
        const auto stop = std::chrono::steady_clock::now();
        result.timings.push_back(
            {task, std::chrono::duration<double, std::milli>(stop - start).count()});
    }

    std::ofstream manifest((sink.dir / "manifest.txt").string(), std::ios::binary);
    manifest << "# polariton2d manifest\n";
    manifest << "version: " << version_string << "\n";
    manifest << "tasks:";
    for (auto& t : tasks) manifest << " " << t;
    manifest << "\n";
    for (auto& t : result.timings)
        manifest << "elapsed_ms " << t.task << ": " << format_double(t.milliseconds) << "\n";
    for (auto& f : result.output_files) manifest << "output: " << f << "\n";
    for (auto& n : sink.notes) manifest << n << "\n";
    if (ctx.masks_) {
        manifest << "retained_eigenvalues (prune " << format_double(config.prune_threshold)
                 << "):\n";
        const auto& m = *ctx.masks_;
        for (size_t k = 0; k < m.retained.size(); ++k)
            manifest << "  (" << m.labels[k].ket << "," << m.labels[k].bra << ") "
                     << format_double(m.lambda(static_cast<int>(k)).real()) << " "
                     << format_double(m.lambda(static_cast<int>(k)).imag()) << "\n";
    }
    manifest << "config:\n";
    std::istringstream cfg_lines(write_config(config));
    std::string line;
    while (std::getline(cfg_lines, line)) manifest << "  " << line << "\n";
    result.output_files.push_back("manifest.txt");
    return result;
}

RunResult run(const RunConfig& config) { return run(config, config.tasks); }

} // namespace p2d
