#pragma once

#include <string>
#include <vector>

#include "polariton2d/response.hpp"

namespace p2d {

/// Total is the complex R + NR sum; Absorptive is its real part (the
/// conventional purely-absorptive spectrum). Peak traces compare |Total|.
enum class Component { Rephasing, NonRephasing, Absorptive, Total };

std::string component_name(Component c);

/// One 2D spectrum on an (excitation, detection) frequency grid.
/// values(i_tau, i_t) belongs to (omega_tau_ev(i_tau), omega_t_ev(i_t)).
/// The rephasing component is reported on the positive-frequency grid
/// (mirrored from its native quadrant), so the absorptive combination is
/// Re(R + NR) pointwise and the L/L feature sits at (w_LG, w_LG).
struct SpectrumGrid2D {
    Eigen::VectorXd omega_tau_ev;
    Eigen::VectorXd omega_t_ev;
    Eigen::MatrixXcd values;
    double waiting_time_fs = 0.0;
    std::string component;
    double normalization = 1.0; ///< divisor already applied to values

    void normalize_max_abs();
};

/// Pruned per-eigenstate mask functions; the spectrum at any waiting time
/// is a sum of exc * exp(lambda T / hbar) * det outer products over the
/// retained eigenstates.
struct MaskSet {
    int dim_h = 0;
    Eigen::VectorXd omega_tau_ev, omega_t_ev;
    std::vector<int> retained;   ///< indices into the parent decomposition
    Eigen::VectorXcd lambda;     ///< per retained eigenstate
    std::vector<EigLabel> labels;
    Eigen::MatrixXcd exc_r, exc_nr, det; ///< (grid, retained)
    double prune_threshold = 0.0;
    double omega_lg_ev = 0.0, omega_ug_ev = 0.0; ///< canonical peak positions
};

/// Masks for every eigenstate, pruned by max|E_j| * max|D_j| relative to
/// the largest such product.
MaskSet build_masks(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys,
                    const Eigen::VectorXd& grid_tau_ev, const Eigen::VectorXd& grid_t_ev,
                    double prune_threshold = 1e-6);

SpectrumGrid2D spectrum_2d(const MaskSet& masks, double waiting_time_fs, Component component);

/// Time-sampling layout for the brute-force cross-check.
struct OracleSpec {
    double dt_fs = 0.0;   ///< detection-time step
    int n_t = 0;          ///< samples along t
    double dtau_fs = 0.0; ///< excitation-time step
    int n_tau = 0;        ///< samples along tau
    int zero_pad = 4;     ///< transform length multiplier
    double window_min_ev = 0.0, window_max_ev = 0.0; ///< output window, both axes
};

/// Sampling that satisfies the oracle preconditions for this system:
/// step <= rabi_period/20 (default /24) and span >= 5 (default 6) times the
/// slowest decay time, with an output window around the polariton lines.
OracleSpec default_oracle_spec(const LiouvilleEigendecomposition& eig,
                               const HamiltonianSystem& sys);

/// Explicit pulse-sequence propagation sampled on time grids, followed by a
/// discrete half-line Fourier transform (trapezoidal endpoint weights, no
/// window function, zero-padded). Cross-validation path only; throws
/// GridTooCoarse when the sampling violates the preconditions.
SpectrumGrid2D time_domain_oracle(const LiouvilleEigendecomposition& eig,
                                  const HamiltonianSystem& sys, double waiting_time_fs,
                                  Component component, const OracleSpec& spec);

enum class PeakId { LL, LU, UL, UU };

std::string peak_name(PeakId id);

/// (omega_tau, omega_t) position of a canonical peak X/Y: excite at the
/// X -> G transition, detect at Y -> G.
std::pair<double, double> peak_position(const HamiltonianSystem& sys, PeakId id);

/// Value at the grid point nearest the given position; with refine, the
/// largest |value| in the surrounding 3x3 patch. Throws OutOfGrid.
Complex peak_value(const SpectrumGrid2D& spec, double omega_tau_ev, double omega_t_ev,
                   bool refine = false);
Complex peak_value(const SpectrumGrid2D& spec, const HamiltonianSystem& sys, PeakId id,
                   bool refine = false);

} // namespace p2d
