#include "polariton2d/twodes.hpp"

#include <algorithm>
#include <cmath>

#include "polariton2d/constants.hpp"
#include "polariton2d/errors.hpp"

namespace p2d {

std::string component_name(Component c) {
    switch (c) {
    case Component::Rephasing: return "R";
    case Component::NonRephasing: return "NR";
    case Component::Absorptive: return "absorptive";
    case Component::Total: return "total";
    }
    return "?";
}

void SpectrumGrid2D::normalize_max_abs() {
    const double m = values.cwiseAbs().maxCoeff();
    if (m > 0) {
        values /= m;
        normalization *= m;
    }
}

MaskSet build_masks(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys,
                    const Eigen::VectorXd& grid_tau_ev, const Eigen::VectorXd& grid_t_ev,
                    double prune_threshold) {
    const ResponseWorkspace ws(eig, sys);
    const GeneralMasks all = compute_masks(ws, grid_tau_ev, grid_t_ev);
    const int n = static_cast<int>(all.lambda.size());

    Eigen::VectorXd score(n);
    for (int j = 0; j < n; ++j) {
        const double e = (all.exc_r.col(j) + all.exc_nr.col(j)).cwiseAbs().maxCoeff();
        score(j) = e * all.det.col(j).cwiseAbs().maxCoeff();
    }
    const double cutoff = prune_threshold * score.maxCoeff();

    MaskSet m;
    m.dim_h = sys.dim;
    m.omega_tau_ev = grid_tau_ev;
    m.omega_t_ev = grid_t_ev;
    m.prune_threshold = prune_threshold;
    m.omega_lg_ev = sys.transition_from_ground_ev("L");
    m.omega_ug_ev = sys.transition_from_ground_ev("U");
    for (int j = 0; j < n; ++j)
        if (score(j) >= cutoff) m.retained.push_back(j);
    const int kept = static_cast<int>(m.retained.size());
    m.lambda.resize(kept);
    m.labels.resize(kept);
    m.exc_r.resize(grid_tau_ev.size(), kept);
    m.exc_nr.resize(grid_tau_ev.size(), kept);
    m.det.resize(grid_t_ev.size(), kept);
    for (int k = 0; k < kept; ++k) {
        const int j = m.retained[k];
        m.lambda(k) = all.lambda(j);
        m.labels[k] = eig.labels[j];
        m.exc_r.col(k) = all.exc_r.col(j);
        m.exc_nr.col(k) = all.exc_nr.col(j);
        m.det.col(k) = all.det.col(j);
    }
    return m;
}

SpectrumGrid2D spectrum_2d(const MaskSet& masks, double waiting_time_fs, Component component) {
    SpectrumGrid2D spec;
    spec.omega_tau_ev = masks.omega_tau_ev;
    spec.omega_t_ev = masks.omega_t_ev;
    spec.waiting_time_fs = waiting_time_fs;
    spec.component = component_name(component);
    const int kept = static_cast<int>(masks.retained.size());

    Eigen::MatrixXcd exc;
    switch (component) {
    case Component::Rephasing: exc = masks.exc_r; break;
    case Component::NonRephasing: exc = masks.exc_nr; break;
    case Component::Absorptive:
    case Component::Total: exc = masks.exc_r + masks.exc_nr; break;
    }
    spec.values = Eigen::MatrixXcd::Zero(masks.omega_tau_ev.size(), masks.omega_t_ev.size());
    for (int k = 0; k < kept; ++k) {
        const Complex amp = std::exp(masks.lambda(k) * (waiting_time_fs / hbar_ev_fs));
        spec.values.noalias() += (exc.col(k) * amp) * masks.det.col(k).transpose();
    }
    if (component == Component::Absorptive) spec.values = spec.values.real().cast<Complex>();
    return spec;
}

OracleSpec default_oracle_spec(const LiouvilleEigendecomposition& eig,
                               const HamiltonianSystem& sys) {
    OracleSpec spec;
    const double t_rabi = sys.params.rabi_period_fs();
    // slowest decaying mode sets the span needed to damp the truncation tail
    double gamma_min = 1e30;
    const double scale = eig.gammas().maxCoeff();
    for (int k = 0; k < eig.eigenvalues.size(); ++k) {
        const double g = -eig.eigenvalues(k).real();
        if (g > 1e-10 * scale) gamma_min = std::min(gamma_min, g);
    }
    const double lifetime_fs = hbar_ev_fs / gamma_min;
    spec.dt_fs = t_rabi / 24.0;
    spec.dtau_fs = spec.dt_fs;
    spec.n_t = static_cast<int>(std::ceil(6.0 * lifetime_fs / spec.dt_fs)) + 1;
    spec.n_tau = spec.n_t;
    spec.zero_pad = 4;
    const double center = 0.5 * (sys.transition_from_ground_ev("L") +
                                 sys.transition_from_ground_ev("U"));
    spec.window_min_ev = center - 1.5 * sys.params.rabi_splitting_ev;
    spec.window_max_ev = center + 1.5 * sys.params.rabi_splitting_ev;
    return spec;
}

namespace {

// Half-line DFT frequencies and kernel for one axis of the padded grid.
// With conj_kernel the transform uses exp(-i w t / hbar) (the mirrored
// rephasing excitation axis); otherwise exp(+i w t / hbar).
struct AxisTransform {
    Eigen::VectorXd omega_ev; // selected frequency offsets, ascending
    Eigen::MatrixXcd kernel;  // (n_omega, n_samples) incl. dt/hbar and endpoint weight

    AxisTransform(int n_samples, double dt_fs, int zero_pad, double w_min, double w_max,
                  bool conj_kernel) {
        const int n_pad = n_samples * zero_pad;
        std::vector<double> freqs;
        for (int k = -n_pad / 2; k < n_pad / 2; ++k) {
            const double w = 2.0 * pi * hbar_ev_fs * k / (n_pad * dt_fs);
            if (w >= w_min && w <= w_max) freqs.push_back(w);
        }
        std::sort(freqs.begin(), freqs.end());
        omega_ev = Eigen::Map<Eigen::VectorXd>(freqs.data(), freqs.size());
        kernel.resize(omega_ev.size(), n_samples);
        for (int wi = 0; wi < omega_ev.size(); ++wi)
            for (int s = 0; s < n_samples; ++s) {
                const double phase = omega_ev(wi) * s * dt_fs / hbar_ev_fs;
                Complex k_val = std::exp(Complex(0.0, conj_kernel ? -phase : phase));
                k_val *= dt_fs / hbar_ev_fs;
                if (s == 0) k_val *= 0.5; // trapezoidal endpoint
                kernel(wi, s) = k_val;
            }
    }
};

// Raw time-domain response S(t, T, tau) for one phase-matching choice,
// evaluated by spectral propagation between the pulses.
Eigen::MatrixXcd sampled_response(const ResponseWorkspace& ws, double waiting_time_fs,
                                  bool rephasing, const OracleSpec& spec) {
    const auto& eig = ws.eig;
    const int n = static_cast<int>(eig.eigenvalues.size());
    const Eigen::VectorXcd& decay = eig.eigenvalues;

    const Eigen::VectorXcd c1 =
        eig.left * ((rephasing ? ws.mu_breve_minus : ws.mu_breve_plus) * ws.rho0);
    Eigen::MatrixXcd phi(n, spec.n_tau);
    for (int k = 0; k < spec.n_tau; ++k) {
        const double tau = k * spec.dtau_fs;
        for (int i = 0; i < n; ++i) phi(i, k) = c1(i) * std::exp(decay(i) * (tau / hbar_ev_fs));
    }
    phi = eig.right * phi;
    phi = (rephasing ? ws.mu_breve_plus : ws.mu_breve_minus) * phi;
    Eigen::MatrixXcd c2 = eig.left * phi;
    for (int i = 0; i < n; ++i)
        c2.row(i) *= std::exp(decay(i) * (waiting_time_fs / hbar_ev_fs));
    const Eigen::MatrixXcd after3 = ws.mu_breve_plus * (eig.right * c2);
    const Eigen::MatrixXcd c3 = eig.left * after3;

    Eigen::MatrixXcd emission(spec.n_t, n);
    for (int ti = 0; ti < spec.n_t; ++ti) {
        const double t = ti * spec.dt_fs;
        for (int m = 0; m < n; ++m)
            emission(ti, m) = ws.detect(m) * std::exp(decay(m) * (t / hbar_ev_fs));
    }
    return emission * c3; // (n_t, n_tau)
}

SpectrumGrid2D transform_component(const ResponseWorkspace& ws, double waiting_time_fs,
                                   bool rephasing, const OracleSpec& spec) {
    const double w_ref = 0.5 * (spec.window_min_ev + spec.window_max_ev);
    const Eigen::MatrixXcd s = sampled_response(ws, waiting_time_fs, rephasing, spec);
    // demodulate about the window center so the sampling only needs to
    // resolve the splitting, not the optical carrier
    Eigen::MatrixXcd demod(spec.n_t, spec.n_tau);
    for (int ti = 0; ti < spec.n_t; ++ti)
        for (int k = 0; k < spec.n_tau; ++k) {
            const double ph_t = w_ref * ti * spec.dt_fs / hbar_ev_fs;
            const double ph_tau = w_ref * k * spec.dtau_fs / hbar_ev_fs;
            demod(ti, k) =
                s(ti, k) * std::exp(Complex(0.0, rephasing ? ph_t - ph_tau : ph_t + ph_tau));
        }
    AxisTransform t_axis(spec.n_t, spec.dt_fs, spec.zero_pad, spec.window_min_ev - w_ref,
                         spec.window_max_ev - w_ref, false);
    AxisTransform tau_axis(spec.n_tau, spec.dtau_fs, spec.zero_pad, spec.window_min_ev - w_ref,
                           spec.window_max_ev - w_ref, rephasing);

    SpectrumGrid2D out;
    out.omega_t_ev = t_axis.omega_ev.array() + w_ref;
    out.omega_tau_ev = tau_axis.omega_ev.array() + w_ref;
    out.waiting_time_fs = waiting_time_fs;
    out.component = rephasing ? "R" : "NR";
    // values(i_tau, i_t) = sum_{ti,k} kernel_tau(i_tau,k) s(ti,k) kernel_t(i_t,ti)
    out.values = tau_axis.kernel * demod.transpose() * t_axis.kernel.transpose();
    return out;
}

} // namespace

SpectrumGrid2D time_domain_oracle(const LiouvilleEigendecomposition& eig,
                                  const HamiltonianSystem& sys, double waiting_time_fs,
                                  Component component, const OracleSpec& spec) {
    const double t_rabi = sys.params.rabi_period_fs();
    double gamma_min = 1e30;
    const double scale = eig.gammas().maxCoeff();
    for (int k = 0; k < eig.eigenvalues.size(); ++k) {
        const double g = -eig.eigenvalues(k).real();
        if (g > 1e-10 * scale) gamma_min = std::min(gamma_min, g);
    }
    const double lifetime_fs = gamma_min < 1e29 ? hbar_ev_fs / gamma_min : 0.0;
    if (spec.dt_fs > t_rabi / 20.0 || spec.dtau_fs > t_rabi / 20.0)
        throw GridTooCoarse("time step must not exceed one twentieth of the Rabi period");
    if ((spec.n_t - 1) * spec.dt_fs < 5.0 * lifetime_fs ||
        (spec.n_tau - 1) * spec.dtau_fs < 5.0 * lifetime_fs)
        throw GridTooCoarse("time span must cover five times the slowest decay");

    const ResponseWorkspace ws(eig, sys);
    if (component == Component::Rephasing)
        return transform_component(ws, waiting_time_fs, true, spec);
    if (component == Component::NonRephasing)
        return transform_component(ws, waiting_time_fs, false, spec);
    SpectrumGrid2D r = transform_component(ws, waiting_time_fs, true, spec);
    const SpectrumGrid2D nr = transform_component(ws, waiting_time_fs, false, spec);
    r.values += nr.values;
    r.component = component_name(component);
    if (component == Component::Absorptive) r.values = r.values.real().cast<Complex>();
    return r;
}

std::string peak_name(PeakId id) {
    switch (id) {
    case PeakId::LL: return "L/L";
    case PeakId::LU: return "L/U";
    case PeakId::UL: return "U/L";
    case PeakId::UU: return "U/U";
    }
    return "?";
}

std::pair<double, double> peak_position(const HamiltonianSystem& sys, PeakId id) {
    const double lg = sys.transition_from_ground_ev("L");
    const double ug = sys.transition_from_ground_ev("U");
    switch (id) {
    case PeakId::LL: return {lg, lg};
    case PeakId::LU: return {lg, ug};
    case PeakId::UL: return {ug, lg};
    case PeakId::UU: return {ug, ug};
    }
    return {lg, lg};
}

namespace {

int nearest_index(const Eigen::VectorXd& axis, double value) {
    int best = 0;
    double dist = 1e300;
    for (int i = 0; i < axis.size(); ++i) {
        const double d = std::abs(axis(i) - value);
        if (d < dist) {
            dist = d;
            best = i;
        }
    }
    return best;
}

} // namespace

Complex peak_value(const SpectrumGrid2D& spec, double omega_tau_ev, double omega_t_ev,
                   bool refine) {
    if (omega_tau_ev < spec.omega_tau_ev.minCoeff() ||
        omega_tau_ev > spec.omega_tau_ev.maxCoeff() ||
        omega_t_ev < spec.omega_t_ev.minCoeff() || omega_t_ev > spec.omega_t_ev.maxCoeff())
        throw OutOfGrid("peak position outside the computed grid");
    const int it = nearest_index(spec.omega_tau_ev, omega_tau_ev);
    const int jt = nearest_index(spec.omega_t_ev, omega_t_ev);
    if (!refine) return spec.values(it, jt);
    Complex best = spec.values(it, jt);
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
            const int i = it + di, j = jt + dj;
            if (i < 0 || j < 0 || i >= spec.values.rows() || j >= spec.values.cols()) continue;
            if (std::abs(spec.values(i, j)) > std::abs(best)) best = spec.values(i, j);
        }
    return best;
}

Complex peak_value(const SpectrumGrid2D& spec, const HamiltonianSystem& sys, PeakId id,
                   bool refine) {
    const auto [wt, wd] = peak_position(sys, id);
    return peak_value(spec, wt, wd, refine);
}

} // namespace p2d
