#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "polariton2d/liouville.hpp"
#include "polariton2d/model.hpp"

namespace p2d {

inline Eigen::VectorXd linspace(double min, double max, int count) {
    return Eigen::VectorXd::LinSpaced(count, min, max);
}

/// Shared machinery for third-order response evaluation in the Liouvillian
/// eigenbasis: the dipole commutator superoperators, the ground-state
/// initial vector, and the detection covector. Holds references to the
/// decomposition; keep it alive while using the workspace.
class ResponseWorkspace {
  public:
    ResponseWorkspace(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys);

    const LiouvilleEigendecomposition& eig;
    const HamiltonianSystem& sys;

    Eigen::SparseMatrix<Complex> mu_breve_plus;  ///< -i [mu+, .]
    Eigen::SparseMatrix<Complex> mu_breve_minus; ///< -i [mu-, .]
    Eigen::VectorXcd rho0;                       ///< vectorized |G><G|
    Eigen::RowVectorXcd detect;                  ///< <<mu+| V, the emission row

    /// 0/1 diagonal mask selecting the |alpha><beta| components with
    /// manifolds (m_ket, m_bra).
    Eigen::ArrayXd sector_mask(int m_ket, int m_bra) const;
    /// Mask selecting several (ket, bra) manifold pairs at once.
    Eigen::ArrayXd sector_mask(std::initializer_list<std::pair<int, int>> pairs) const;
};

/// Optional sector projections decorating the pulse sequence; empty arrays
/// mean no projection. `pre` acts on the state entering the waiting-time
/// propagator, `post` on the state leaving it, `sel` right after the third
/// pulse, and `det` inside the detection trace.
struct SectorProjection {
    Eigen::ArrayXd pre, post, sel, det;
};

/// Excitation and detection mask functions for every Liouvillian eigenstate
/// on the given frequency grids:
///   S(w_t, T, w_tau) = sum_j E_j(w_tau) exp(lambda_j T / hbar) D_j(w_t),
/// with E_j = E_j^R or E_j^NR (or their sum) depending on the component.
struct GeneralMasks {
    Eigen::VectorXd omega_tau_ev, omega_t_ev;
    Eigen::VectorXcd lambda;
    Eigen::MatrixXcd exc_r;  ///< (n_omega_tau, n_eig)
    Eigen::MatrixXcd exc_nr; ///< (n_omega_tau, n_eig)
    Eigen::MatrixXcd det;    ///< (n_omega_t, n_eig)
};

GeneralMasks compute_masks(const ResponseWorkspace& ws, const Eigen::VectorXd& grid_tau_ev,
                           const Eigen::VectorXd& grid_t_ev,
                           const SectorProjection& proj = {});

} // namespace p2d
