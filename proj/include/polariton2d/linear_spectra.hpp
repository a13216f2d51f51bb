#pragma once

#include "polariton2d/liouville.hpp"
#include "polariton2d/model.hpp"

namespace p2d {

struct Spectrum1D {
    Eigen::VectorXd omega_ev;
    Eigen::VectorXd values;
    double normalization = 1.0; ///< divisor already applied
};

/// Linear absorption: the half-line transform of the ground-state photon
/// correlation <a(t') a^dag(0)>, evaluated analytically in the Liouvillian
/// eigenbasis (sum of resolvent terms, no time integration). Normalized to
/// unit maximum when `normalize` is set.
Spectrum1D absorption(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys,
                      const Eigen::VectorXd& grid_ev, bool normalize = true);

struct EmissionMap {
    Eigen::VectorXd omega_laser_ev; ///< excitation axis
    Eigen::VectorXd omega_ev;       ///< emission axis
    Eigen::MatrixXd values;         ///< (n_laser, n_emission)
    double normalization = 1.0;
};

struct EmissionOptions {
    double drive_ev = -1.0;      ///< cw drive amplitude; < 0 picks 1e-3 * rabi
    bool linearity_check = true; ///< verify doubling the drive leaves the map
    bool normalize = true;
};

/// Excitation-emission map under a weak cw drive: for each laser frequency
/// the rotating-frame driven Liouvillian is solved for its steady state and
/// the inelastic emission correlation is evaluated by spectral resolvents
/// (the elastic |<a>|^2 plateau is dropped). Throws SteadyStateNotUnique or
/// DriveTooStrong.
EmissionMap emission_map(const HamiltonianSystem& sys, double kappa_ev, const BathSpec& bath,
                         DephasingModel model, const Eigen::VectorXd& grid_laser_ev,
                         const Eigen::VectorXd& grid_emission_ev,
                         const EmissionOptions& options = {});

} // namespace p2d
