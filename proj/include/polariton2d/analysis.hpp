#pragma once

#include "polariton2d/twodes.hpp"

namespace p2d {

/// Complex peak amplitude versus waiting time, with the contributions of
/// purely decaying (population) and oscillating (coherence) eigenstates
/// also reported separately.
struct PeakTrace {
    PeakId peak = PeakId::LL;
    double omega_tau_ev = 0.0, omega_t_ev = 0.0;
    Eigen::VectorXd waiting_times_fs;
    Eigen::VectorXcd values;          ///< complex R + NR sum at the peak
    Eigen::VectorXd abs_values;       ///< |values|
    Eigen::VectorXcd population_part; ///< real-eigenvalue contributions
    Eigen::VectorXcd coherence_part;  ///< oscillating contributions
};

/// Evaluates the masked eigen-sum at the single grid point nearest the
/// peak across the waiting-time grid. Throws OutOfGrid.
PeakTrace peak_trace(const MaskSet& masks, PeakId peak,
                     const Eigen::VectorXd& waiting_times_fs);

/// Populations of every Hamiltonian eigenstate for the initial state
/// |psi><psi| with psi = c_l |L> + c_u |U>; returns (n_times, dim) with
/// columns ordered like the eigenstates. Requires |c_l|^2 + |c_u|^2 = 1.
Eigen::MatrixXd population_dynamics(const LiouvilleEigendecomposition& eig,
                                    const HamiltonianSystem& sys, Complex c_l, Complex c_u,
                                    const Eigen::VectorXd& times_fs);

enum class FitStatus { Converged, NoConvergence, DegenerateTrace };

/// Parameters of the damped-oscillation model fitted to |trace|^2:
///   |A exp(-2 G_ll T/hbar) + exp(-2 G_ul T/hbar)
///        (B cos(W T/hbar) + C sin(W T/hbar))|
/// with the oscillation frequency W fixed beforehand from the discrete
/// spectrum of the detrended trace.
struct FitResult {
    double a = 0.0, b = 0.0, c = 0.0;
    double gamma_ll_ev = 0.0; ///< population decay, expected kappa/2
    double gamma_ul_ev = 0.0; ///< coherence decay, expected kappa/2 + gamma/8
    double omega_r_ev = 0.0;  ///< oscillation frequency (held fixed in the fit)
    double residual = 0.0;    ///< rms misfit of the normalized data
    FitStatus status = FitStatus::NoConvergence;
    bool starts_agree = false; ///< dispersed initial guesses reached one minimum

    double kappa_lifetime_fs() const;
    double gamma_lifetime_fs() const;
};

FitResult fit_ll_peak(const PeakTrace& trace);

} // namespace p2d
