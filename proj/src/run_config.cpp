#include "polariton2d/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "polariton2d/errors.hpp"

namespace p2d {

Eigen::VectorXd GridSpec::values() const {
    if (count < 2) throw InvalidParams("grid needs at least two points");
    return Eigen::VectorXd::LinSpaced(count, min_ev, max_ev);
}

void RunConfig::resolve_defaults() {
    const double center = 0.5 * (model.omega_c_ev + model.omega_0_ev);
    const double r = model.rabi_splitting_ev;
    auto fill = [](GridSpec& g, double lo, double hi, int n) {
        if (g.count == 0) g = GridSpec{lo, hi, n};
    };
    fill(grid_tau, center - 1.5 * r, center + 1.5 * r, 256);
    fill(grid_t, center - 1.5 * r, center + 1.5 * r, 256);
    fill(grid_linear, center - 2.0 * r, center + 2.0 * r, 1024);
    fill(grid_emission_excitation, center - 1.0 * r, center + 1.0 * r, 64);
    fill(grid_emission_detection, center - 1.0 * r, center + 1.0 * r, 256);
    if (trace_t_max_fs <= 0.0) trace_t_max_fs = 5.0 * model.rabi_period_fs();
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& v, int line) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, int line) {
    const double x = parse_double(v, line);
    const int i = static_cast<int>(x);
    if (x != i) throw ConfigError("line " + std::to_string(line) + ": expected an integer");
    return i;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("line " + std::to_string(line) + ": expected a boolean, got '" + v + "'");
}

GridSpec parse_grid(const std::string& v, int line) {
    GridSpec g;
    if (std::sscanf(v.c_str(), "%lf:%lf:%d", &g.min_ev, &g.max_ev, &g.count) != 3)
        throw ConfigError("line " + std::to_string(line) + ": expected min:max:count, got '" + v +
                          "'");
    if (g.count < 2 || g.max_ev <= g.min_ev)
        throw ConfigError("line " + std::to_string(line) + ": invalid grid '" + v + "'");
    return g;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
    std::vector<double> out;
    for (auto& item : split_list(v)) out.push_back(parse_double(item, line));
    return out;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_grid(const GridSpec& g) {
    return format_double(g.min_ev) + ":" + format_double(g.max_ev) + ":" +
           std::to_string(g.count);
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

std::string join(const std::vector<double>& items) {
    std::vector<std::string> s;
    for (double x : items) s.push_back(format_double(x));
    return join(s);
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;

    const std::set<std::string> known_tasks = {"eig",   "linear",   "emission", "twod",
                                               "pathways", "buildup", "trace",    "popdyn",
                                               "fit",   "validate"};

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            const std::set<std::string> sections = {"model",  "bath",   "grids", "run",
                                                    "twod",   "pathways", "buildup",
                                                    "trace",  "popdyn", "fit",   "emission"};
            if (!sections.count(section))
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const std::string qualified = section + "." + key;

        if (qualified == "model.n_emitters") cfg.model.n_emitters = parse_int(value, line);
        else if (qualified == "model.omega_c_ev") cfg.model.omega_c_ev = parse_double(value, line);
        else if (qualified == "model.omega_0_ev") cfg.model.omega_0_ev = parse_double(value, line);
        else if (qualified == "model.rabi_splitting_ev")
            cfg.model.rabi_splitting_ev = parse_double(value, line);
        else if (qualified == "model.kappa_lifetime_fs")
            cfg.model.kappa_lifetime_fs = parse_double(value, line);
        else if (qualified == "model.gamma_lifetime_fs")
            cfg.model.gamma_lifetime_fs = parse_double(value, line);
        else if (qualified == "model.n_max") cfg.model.n_max = parse_int(value, line);
        else if (qualified == "model.dephasing") {
            if (value == "brw") cfg.dephasing = DephasingModel::Brw;
            else if (value == "lindblad") cfg.dephasing = DephasingModel::Lindblad;
            else throw ConfigError("line " + std::to_string(line) +
                                   ": dephasing must be brw or lindblad");
        } else if (qualified == "bath.kind") {
            if (value == "flat") cfg.model.bath_kind = BathKind::Flat;
            else if (value == "debye") cfg.model.bath_kind = BathKind::Debye;
            else throw ConfigError("line " + std::to_string(line) +
                                   ": bath kind must be flat or debye");
        } else if (qualified == "bath.delta_ev")
            cfg.model.bath_delta_ev = parse_double(value, line);
        else if (qualified == "bath.temperature_k")
            cfg.model.bath_temperature_k = parse_double(value, line);
        else if (qualified == "grids.omega_tau") cfg.grid_tau = parse_grid(value, line);
        else if (qualified == "grids.omega_t") cfg.grid_t = parse_grid(value, line);
        else if (qualified == "grids.linear") cfg.grid_linear = parse_grid(value, line);
        else if (qualified == "grids.emission_excitation")
            cfg.grid_emission_excitation = parse_grid(value, line);
        else if (qualified == "grids.emission_detection")
            cfg.grid_emission_detection = parse_grid(value, line);
        else if (qualified == "run.tasks") {
            cfg.tasks = split_list(value);
            for (auto& t : cfg.tasks)
                if (!known_tasks.count(t))
                    throw ConfigError("line " + std::to_string(line) + ": unknown task '" + t +
                                      "'");
        } else if (qualified == "run.output_directory") cfg.output_directory = value;
        else if (qualified == "run.formats") {
            cfg.write_text = false;
            cfg.write_binary = false;
            for (auto& f : split_list(value)) {
                if (f == "text") cfg.write_text = true;
                else if (f == "binary") cfg.write_binary = true;
                else throw ConfigError("line " + std::to_string(line) + ": unknown format '" + f +
                                       "'");
            }
        } else if (qualified == "twod.waiting_times_fs")
            cfg.waiting_times_fs = parse_double_list(value, line);
        else if (qualified == "twod.components") {
            cfg.twod_components = split_list(value);
            for (auto& c : cfg.twod_components)
                if (c != "absorptive" && c != "r" && c != "nr" && c != "total")
                    throw ConfigError("line " + std::to_string(line) + ": unknown component '" +
                                      c + "'");
        } else if (qualified == "twod.prune_threshold")
            cfg.prune_threshold = parse_double(value, line);
        else if (qualified == "twod.oracle_check") cfg.oracle_check = parse_bool(value, line);
        else if (qualified == "pathways.names") cfg.pathway_names = split_list(value);
        else if (qualified == "buildup.stages") cfg.buildup_stages = split_list(value);
        else if (qualified == "buildup.omega_tau_cut_ev")
            cfg.buildup_cut_ev = parse_double(value, line);
        else if (qualified == "trace.peaks") cfg.trace_peaks = split_list(value);
        else if (qualified == "trace.t_max_fs") cfg.trace_t_max_fs = parse_double(value, line);
        else if (qualified == "trace.t_count") cfg.trace_t_count = parse_int(value, line);
        else if (qualified == "popdyn.c_l") cfg.popdyn_c_l = parse_double(value, line);
        else if (qualified == "popdyn.c_u") cfg.popdyn_c_u = parse_double(value, line);
        else if (qualified == "popdyn.t_max_fs") cfg.popdyn_t_max_fs = parse_double(value, line);
        else if (qualified == "popdyn.t_count") cfg.popdyn_t_count = parse_int(value, line);
        else if (qualified == "fit.peak") cfg.fit_peak = value;
        else if (qualified == "emission.drive_ev")
            cfg.emission_drive_ev = parse_double(value, line);
        else if (qualified == "emission.linearity_check")
            cfg.emission_linearity_check = parse_bool(value, line);
        else
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + qualified +
                              "'");
    }
    try {
        cfg.model.validate();
    } catch (const InvalidParams& err) {
        throw ConfigError(std::string("invalid model parameters: ") + err.what());
    }
    cfg.resolve_defaults();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string write_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[model]\n";
    out << "n_emitters = " << cfg.model.n_emitters << "\n";
    out << "omega_c_ev = " << format_double(cfg.model.omega_c_ev) << "\n";
    out << "omega_0_ev = " << format_double(cfg.model.omega_0_ev) << "\n";
    out << "rabi_splitting_ev = " << format_double(cfg.model.rabi_splitting_ev) << "\n";
    out << "kappa_lifetime_fs = " << format_double(cfg.model.kappa_lifetime_fs) << "\n";
    out << "gamma_lifetime_fs = " << format_double(cfg.model.gamma_lifetime_fs) << "\n";
    out << "n_max = " << cfg.model.n_max << "\n";
    out << "dephasing = " << (cfg.dephasing == DephasingModel::Brw ? "brw" : "lindblad") << "\n";
    out << "\n[bath]\n";
    out << "kind = " << (cfg.model.bath_kind == BathKind::Flat ? "flat" : "debye") << "\n";
    out << "delta_ev = " << format_double(cfg.model.bath_delta_ev) << "\n";
    out << "temperature_k = " << format_double(cfg.model.bath_temperature_k) << "\n";
    out << "\n[grids]\n";
    out << "omega_tau = " << format_grid(cfg.grid_tau) << "\n";
    out << "omega_t = " << format_grid(cfg.grid_t) << "\n";
    out << "linear = " << format_grid(cfg.grid_linear) << "\n";
    out << "emission_excitation = " << format_grid(cfg.grid_emission_excitation) << "\n";
    out << "emission_detection = " << format_grid(cfg.grid_emission_detection) << "\n";
    out << "\n[run]\n";
    out << "tasks = " << join(cfg.tasks) << "\n";
    out << "output_directory = " << cfg.output_directory << "\n";
    std::vector<std::string> formats;
    if (cfg.write_text) formats.push_back("text");
    if (cfg.write_binary) formats.push_back("binary");
    out << "formats = " << join(formats) << "\n";
    out << "\n[twod]\n";
    out << "waiting_times_fs = " << join(cfg.waiting_times_fs) << "\n";
    out << "components = " << join(cfg.twod_components) << "\n";
    out << "prune_threshold = " << format_double(cfg.prune_threshold) << "\n";
    out << "oracle_check = " << (cfg.oracle_check ? "true" : "false") << "\n";
    out << "\n[pathways]\n";
    out << "names = " << join(cfg.pathway_names) << "\n";
    out << "\n[buildup]\n";
    out << "stages = " << join(cfg.buildup_stages) << "\n";
    out << "omega_tau_cut_ev = " << format_double(cfg.buildup_cut_ev) << "\n";
    out << "\n[trace]\n";
    out << "peaks = " << join(cfg.trace_peaks) << "\n";
    out << "t_max_fs = " << format_double(cfg.trace_t_max_fs) << "\n";
    out << "t_count = " << cfg.trace_t_count << "\n";
    out << "\n[popdyn]\n";
    out << "c_l = " << format_double(cfg.popdyn_c_l) << "\n";
    out << "c_u = " << format_double(cfg.popdyn_c_u) << "\n";
    out << "t_max_fs = " << format_double(cfg.popdyn_t_max_fs) << "\n";
    out << "t_count = " << cfg.popdyn_t_count << "\n";
    out << "\n[fit]\n";
    out << "peak = " << cfg.fit_peak << "\n";
    out << "\n[emission]\n";
    out << "drive_ev = " << format_double(cfg.emission_drive_ev) << "\n";
    out << "linearity_check = " << (cfg.emission_linearity_check ? "true" : "false") << "\n";
    return out.str();
}

} // namespace p2d
