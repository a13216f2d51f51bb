#include "polariton2d/pathways.hpp"

#include <cmath>

#include "polariton2d/constants.hpp"
#include "polariton2d/errors.hpp"

namespace p2d {

std::string pathway_name(Pathway p) {
    switch (p) {
    case Pathway::GSB: return "GSB";
    case Pathway::GSR: return "GSR";
    case Pathway::SE: return "SE";
    case Pathway::ESA: return "ESA";
    case Pathway::ESAprime: return "ESAprime";
    }
    return "?";
}

Pathway pathway_from_name(const std::string& name) {
    for (Pathway p : {Pathway::GSB, Pathway::GSR, Pathway::SE, Pathway::ESA, Pathway::ESAprime})
        if (pathway_name(p) == name) return p;
    throw UnknownPathway("unknown pathway '" + name + "'");
}

namespace {

SectorProjection pathway_projection(const ResponseWorkspace& ws, Pathway p) {
    SectorProjection proj;
    switch (p) {
    case Pathway::GSB:
        proj.pre = ws.sector_mask(0, 0);
        proj.post = ws.sector_mask(0, 0);
        break;
    case Pathway::GSR:
        proj.pre = ws.sector_mask(1, 1);
        proj.post = ws.sector_mask(0, 0);
        break;
    case Pathway::SE:
        proj.pre = ws.sector_mask(1, 1);
        proj.post = ws.sector_mask(1, 1);
        proj.sel = ws.sector_mask(1, 0);
        proj.det = ws.sector_mask(1, 0);
        break;
    case Pathway::ESA:
        proj.pre = ws.sector_mask(1, 1);
        proj.post = ws.sector_mask(1, 1);
        proj.sel = ws.sector_mask(2, 1);
        proj.det = ws.sector_mask(2, 1);
        break;
    case Pathway::ESAprime:
        proj.pre = ws.sector_mask(1, 1);
        proj.post = ws.sector_mask(1, 1);
        proj.sel = ws.sector_mask(2, 1);
        proj.det = ws.sector_mask(1, 0);
        break;
    }
    return proj;
}

} // namespace

SpectrumGrid2D pathway_spectrum(const LiouvilleEigendecomposition& eig,
                                const HamiltonianSystem& sys,
                                const Eigen::VectorXd& grid_tau_ev,
                                const Eigen::VectorXd& grid_t_ev, double waiting_time_fs,
                                Pathway pathway, double prune_threshold) {
    const ResponseWorkspace ws(eig, sys);
    const GeneralMasks masks = compute_masks(ws, grid_tau_ev, grid_t_ev,
                                             pathway_projection(ws, pathway));
    const int n = static_cast<int>(masks.lambda.size());

    double max_score = 0.0;
    Eigen::VectorXd score(n);
    for (int j = 0; j < n; ++j) {
        score(j) = (masks.exc_r.col(j) + masks.exc_nr.col(j)).cwiseAbs().maxCoeff() *
                   masks.det.col(j).cwiseAbs().maxCoeff();
        max_score = std::max(max_score, score(j));
    }

    SpectrumGrid2D spec;
    spec.omega_tau_ev = grid_tau_ev;
    spec.omega_t_ev = grid_t_ev;
    spec.waiting_time_fs = waiting_time_fs;
    spec.component = pathway_name(pathway);
    spec.values = Eigen::MatrixXcd::Zero(grid_tau_ev.size(), grid_t_ev.size());
    for (int j = 0; j < n; ++j) {
        if (score(j) < prune_threshold * max_score) continue;
        const Complex amp = std::exp(masks.lambda(j) * (waiting_time_fs / hbar_ev_fs));
        spec.values.noalias() +=
            ((masks.exc_r.col(j) + masks.exc_nr.col(j)) * amp) * masks.det.col(j).transpose();
    }
    spec.values = spec.values.real().cast<Complex>();
    return spec;
}

std::string buildup_stage_name(BuildupStage s) {
    switch (s) {
    case BuildupStage::AfterPulse2: return "after-pulse-2";
    case BuildupStage::AfterWaiting: return "after-T";
    case BuildupStage::AfterPulse3: return "after-pulse-3";
    case BuildupStage::Detection: return "detection";
    }
    return "?";
}

BuildupStage buildup_stage_from_name(const std::string& name) {
    for (BuildupStage s : {BuildupStage::AfterPulse2, BuildupStage::AfterWaiting,
                           BuildupStage::AfterPulse3, BuildupStage::Detection})
        if (buildup_stage_name(s) == name) return s;
    throw InvalidParams("unknown build-up stage '" + name + "'");
}

namespace {

// rho after the first two pulses and the tau resolvent, per frequency
// column, rephasing and non-rephasing combined.
Eigen::MatrixXcd excitation_state(const ResponseWorkspace& ws, const Eigen::VectorXd& grid_ev) {
    const auto& eig = ws.eig;
    const int n = static_cast<int>(eig.eigenvalues.size());
    const int nw = static_cast<int>(grid_ev.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, nw);
    for (int pass = 0; pass < 2; ++pass) {
        const bool rephasing = pass == 0;
        const Eigen::VectorXcd b =
            eig.left * ((rephasing ? ws.mu_breve_minus : ws.mu_breve_plus) * ws.rho0);
        const Complex sign = rephasing ? Complex(0, -1) : Complex(0, 1);
        Eigen::MatrixXcd y(n, nw);
        for (int w = 0; w < nw; ++w)
            y.col(w) = b.array() / (sign * grid_ev(w) + eig.eigenvalues.array());
        out += (rephasing ? ws.mu_breve_plus : ws.mu_breve_minus) * (eig.right * y).eval();
    }
    return out;
}

void apply_waiting_time(const ResponseWorkspace& ws, Eigen::MatrixXcd& state, double t_fs) {
    Eigen::MatrixXcd c = ws.eig.left * state;
    for (int i = 0; i < c.rows(); ++i)
        c.row(i) *= std::exp(ws.eig.eigenvalues(i) * (t_fs / hbar_ev_fs));
    state = ws.eig.right * c;
}

} // namespace

BuildupTrace buildup_trace(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys,
                           BuildupStage stage, double waiting_time_fs,
                           const Eigen::VectorXd& grid_ev, double omega_tau_cut_ev) {
    const ResponseWorkspace ws(eig, sys);
    const int d = sys.dim;

    BuildupTrace trace;
    trace.stage = stage;
    trace.waiting_time_fs = waiting_time_fs;
    trace.omega_ev = grid_ev;

    Eigen::MatrixXcd state;
    if (stage != BuildupStage::Detection) {
        state = excitation_state(ws, grid_ev);
        if (stage != BuildupStage::AfterPulse2) apply_waiting_time(ws, state, waiting_time_fs);
        if (stage == BuildupStage::AfterPulse3) state = ws.mu_breve_plus * state;
    } else {
        trace.omega_tau_cut_ev = omega_tau_cut_ev;
        const Eigen::VectorXd cut = Eigen::VectorXd::Constant(1, omega_tau_cut_ev);
        Eigen::MatrixXcd v3 = excitation_state(ws, cut);
        apply_waiting_time(ws, v3, waiting_time_fs);
        v3 = ws.mu_breve_plus * v3;
        const Eigen::VectorXcd c3 = eig.left * v3.col(0);
        state.resize(d * d, grid_ev.size());
        for (int w = 0; w < grid_ev.size(); ++w) {
            const Eigen::VectorXcd y =
                c3.array() / (Complex(0, 1) * grid_ev(w) + eig.eigenvalues.array());
            state.col(w) = eig.right * y;
        }
    }

    // report the sectors populated at this stage
    std::vector<int> rows;
    const bool early = stage == BuildupStage::AfterPulse2 || stage == BuildupStage::AfterWaiting;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const int ma = sys.manifold[a], mb = sys.manifold[b];
            const bool keep = early ? (ma == mb && ma <= 1)
                                    : ((ma == 1 && mb == 0) || (ma == 2 && mb == 1));
            if (keep) rows.push_back(a * d + b);
        }
    const int extra = stage == BuildupStage::Detection ? 1 : 0;
    trace.values.resize(grid_ev.size(), static_cast<int>(rows.size()) + extra);
    for (size_t r = 0; r < rows.size(); ++r) {
        trace.components.push_back(sys.labels[rows[r] / d] + "." + sys.labels[rows[r] % d]);
        trace.values.col(r) = state.row(rows[r]).real().transpose();
    }
    if (extra) {
        trace.components.push_back("signal");
        Eigen::RowVectorXcd mu_plus_vec = Eigen::RowVectorXcd::Zero(d * d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) mu_plus_vec(a * d + b) = sys.mu_plus(a, b);
        trace.values.col(rows.size()) = (mu_plus_vec * state).real().transpose();
    }
    return trace;
}

} // namespace p2d
