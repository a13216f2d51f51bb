#pragma once

#include <string>
#include <vector>

#include "polariton2d/dissipation.hpp"
#include "polariton2d/model.hpp"
#include "polariton2d/superoperator.hpp"

namespace p2d {

/// The total generator together with its mechanism parts (used by the
/// block-structure analysis; the parts sum to total).
struct LiouvillianParts {
    Superoperator coherent;
    Superoperator loss;
    Superoperator dephasing;
    Superoperator total;
};

LiouvillianParts assemble_liouvillian_parts(const HamiltonianSystem& sys, double kappa_ev,
                                            const BathSpec& bath,
                                            DephasingModel model = DephasingModel::Brw);

/// -i[H, .] + kappa L_a + sum_i BRW_i, in eV units.
Superoperator assemble_liouvillian(const HamiltonianSystem& sys, double kappa_ev,
                                   const BathSpec& bath,
                                   DephasingModel model = DephasingModel::Brw);

/// Rotating-frame generator under a weak coherent cavity drive:
/// H -> H - omega_laser * N_exc + drive * (a + a^dag), with N_exc the total
/// excitation number; dissipators are unchanged by the frame.
Superoperator assemble_driven_liouvillian(const HamiltonianSystem& sys, double kappa_ev,
                                          const BathSpec& bath, DephasingModel model,
                                          double omega_laser_ev, double drive_ev);

/// Hamiltonian-state tags for one Liouvillian eigenvector, assigned from
/// its dominant |alpha beta>> component.
struct EigLabel {
    std::string ket;
    std::string bra;
    double confidence = 0.0; ///< |dominant coefficient|^2 / ||v||^2
};

/// Complete biorthogonal spectral decomposition of a Liouvillian.
///
/// Right eigenvectors are the columns of `right`; left eigenvectors the
/// rows of `left`, obtained by inverting the right-eigenvector matrix so
/// that left * right == identity holds by construction, also inside
/// degenerate multiplets. Eigenvalues are sorted by ascending decay rate
/// Gamma = -Re(lambda), then ascending -Im(lambda).
struct LiouvilleEigendecomposition {
    int dim_h = 0;
    Eigen::VectorXcd eigenvalues; ///< eV
    Eigen::MatrixXcd right;
    Eigen::MatrixXcd left;
    std::vector<EigLabel> labels;
    double condition_number = 0.0; ///< Frobenius estimate for the eigenvector matrix

    Eigen::VectorXd gammas() const { return -eigenvalues.real(); }
    Eigen::VectorXd omegas() const { return -eigenvalues.imag(); }

    /// First eigenvalue index labeled (ket, bra); throws if absent.
    int index_of_pair(const std::string& ket, const std::string& bra) const;

    /// Spectral propagation of a vectorized operator over t fs.
    Eigen::VectorXcd propagate(const Eigen::VectorXcd& rho_vec, double t_fs) const;
};

/// Full dense eigendecomposition. Internally the generator is rotated to an
/// orthonormal Hermitian operator basis where a trace- and Hermiticity-
/// preserving generator is a real matrix, solved with dgeev, and rotated
/// back; the conjugate-pair symmetry of the spectrum is then exact.
/// Throws DefectiveLiouvillian when the eigenvector matrix condition
/// estimate exceeds 1e8 (near an exceptional point).
LiouvilleEigendecomposition diagonalize(const Superoperator& liouvillian,
                                        const HamiltonianSystem& sys);

/// Invariant-block analysis of the generator's nonzero pattern.
struct BlockReport {
    std::vector<std::vector<int>> blocks;  ///< vec-space indices, largest block first
    Eigen::MatrixXi entry_class;           ///< bitmask: 1 coherent, 2 photon loss, 4 dephasing
    std::vector<int> block_sizes() const;
    /// Ascii map of the nonzero pattern ordered block by block.
    std::string map_string(const HamiltonianSystem& sys) const;
};

BlockReport block_structure(const LiouvillianParts& parts);

} // namespace p2d
