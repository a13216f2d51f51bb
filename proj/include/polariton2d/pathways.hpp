#pragma once

#include "polariton2d/twodes.hpp"

namespace p2d {

/// Third-order contributions classified by the manifold sector occupied
/// during the waiting time and during detection:
///   GSB  — ground-state sector over T (stationary bleach),
///   GSR  — population that has relaxed into the ground sector by the end
///          of T (recovery, opposite sign to GSB),
///   SE   — first-manifold sector over T, de-excited by the third pulse,
///   ESA  — first-manifold sector over T, excited to the second manifold
///          and detected there,
///   ESAprime — as ESA but detected only after the coherence has relaxed
///          down one manifold during the detection period.
enum class Pathway { GSB, GSR, SE, ESA, ESAprime };

std::string pathway_name(Pathway p);
Pathway pathway_from_name(const std::string& name);

/// Absorptive-combined (R + NR) spectrum of one pathway component. The
/// five components sum to the total absorptive spectrum exactly.
SpectrumGrid2D pathway_spectrum(const LiouvilleEigendecomposition& eig,
                                const HamiltonianSystem& sys,
                                const Eigen::VectorXd& grid_tau_ev,
                                const Eigen::VectorXd& grid_t_ev, double waiting_time_fs,
                                Pathway pathway, double prune_threshold = 0.0);

enum class BuildupStage { AfterPulse2, AfterWaiting, AfterPulse3, Detection };

std::string buildup_stage_name(BuildupStage s);
BuildupStage buildup_stage_from_name(const std::string& name);

/// Frequency-resolved density-matrix components at one stage of the pulse
/// sequence (rephasing + non-rephasing combined, real parts). The early
/// stages resolve the excitation frequency; the detection stage fixes the
/// excitation cut and resolves the detection frequency. At the detection
/// stage the extra "signal" column is the emitted amplitude, identical to
/// the 2D spectrum along the cut.
struct BuildupTrace {
    BuildupStage stage;
    double waiting_time_fs = 0.0;
    double omega_tau_cut_ev = 0.0; ///< detection stage only
    Eigen::VectorXd omega_ev;
    std::vector<std::string> components; ///< "G.G", "L.L", ... ket.bra labels
    Eigen::MatrixXd values;              ///< (n_omega, n_components)
};

BuildupTrace buildup_trace(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys,
                           BuildupStage stage, double waiting_time_fs,
                           const Eigen::VectorXd& grid_ev, double omega_tau_cut_ev = 0.0);

} // namespace p2d
