#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polariton2d/constants.hpp"
#include "polariton2d/errors.hpp"

namespace p2d {

enum class BathKind { Flat, Debye };

/// Bath descriptor for the per-emitter dephasing-type coupling.
/// Flat is a zero-temperature bath with constant spectral density
/// J(w) = gamma; Debye is J(w) = 2*gamma*delta*w / (w^2 + delta^2) at
/// finite temperature. gamma is stored as an energy (hbar / lifetime).
struct BathSpec {
    BathKind kind = BathKind::Flat;
    double gamma_ev = 0.0;
    double delta_ev = 0.0;      ///< Debye cutoff, eV (Debye only)
    double temperature_k = 0.0; ///< Debye only; Flat is zero temperature
};

/// How the molecular dephasing enters the master equation. Brw is the
/// frequency-resolved Bloch-Redfield-Wangsness dissipator; Lindblad is a
/// plain dephasing jump operator, kept for side-by-side comparisons.
enum class DephasingModel { Brw, Lindblad };

/// Full physical parameter record for one run.
///
/// The emitter-cavity coupling is derived from the target polariton
/// splitting: g = sqrt(rabi^2 - detuning^2) / (2 sqrt(N)), which keeps
/// N g^2 (and hence the splitting) constant when N is varied.
struct ModelParams {
    int n_emitters = 1;
    double omega_c_ev = 2.0;          ///< cavity frequency, eV
    double omega_0_ev = 2.0;          ///< emitter frequency, eV
    double rabi_splitting_ev = 0.1;   ///< target splitting sqrt(4Ng^2 + detuning^2), eV
    double kappa_lifetime_fs = 15.0;  ///< cavity lifetime 1/kappa, fs
    double gamma_lifetime_fs = 50.0;  ///< molecular relaxation lifetime 1/gamma, fs
    BathKind bath_kind = BathKind::Flat;
    double bath_delta_ev = 0.2;       ///< Debye cutoff, eV
    double bath_temperature_k = 300.0;
    int n_max = 2;                    ///< maximum total excitation number

    double detuning_ev() const { return omega_c_ev - omega_0_ev; }
    double coupling_g_ev() const;
    /// Cavity loss rate as an energy, hbar/kappa_lifetime.
    double kappa_ev() const { return hbar_ev_fs / kappa_lifetime_fs; }
    /// Molecular relaxation rate as an energy, hbar/gamma_lifetime.
    double gamma_ev() const { return hbar_ev_fs / gamma_lifetime_fs; }
    /// Rabi period 2*pi*hbar / rabi_splitting, fs.
    double rabi_period_fs() const { return 2.0 * pi * hbar_ev_fs / rabi_splitting_ev; }
    BathSpec bath() const;
    /// Throws InvalidParams when any invariant is violated.
    void validate() const;
};

/// One bare product state: photon number plus the set of excited emitters.
struct BasisState {
    int photons = 0;
    std::vector<int> excited; ///< sorted 0-based emitter indices
    int excitation_number() const { return photons + static_cast<int>(excited.size()); }
};

/// All states with excitation number <= n_max, ordered by excitation
/// number, then photon count descending, then lexicographic excited set.
std::vector<BasisState> build_basis(const ModelParams& params);

/// Truncated-manifold Hamiltonian eigensystem with labeled eigenstates and
/// the cavity raising/lowering operators expressed in the eigenbasis.
///
/// Eigenstates are ordered manifold-major, ascending in energy inside each
/// manifold. Degenerate multiplets are fixed to a deterministic gauge
/// (Gram-Schmidt over the basis enumeration order) and every eigenvector is
/// scaled so its first nonvanishing bare component is positive.
struct HamiltonianSystem {
    ModelParams params;
    int dim = 0;
    std::vector<BasisState> basis;
    Eigen::VectorXd energies;        ///< eV
    Eigen::MatrixXd eigenvectors;    ///< columns map bare -> eigen
    std::vector<std::string> labels; ///< G, L, U, D1.., L2, U2, A2_1.., B2_1.., C2_1..
    std::vector<int> manifold;       ///< excitation number per eigenstate
    std::vector<int> manifold_start; ///< first eigenstate index of each manifold
    Eigen::MatrixXd mu_plus;         ///< photon creation operator, eigenbasis
    Eigen::MatrixXd mu_minus;        ///< photon annihilation operator, eigenbasis
    bool labeling_ambiguous = false; ///< set when |detuning| > rabi/2

    /// Index of the eigenstate carrying the given label; throws if absent.
    int index_of(const std::string& label) const;
    /// E_label - E_G in eV.
    double transition_from_ground_ev(const std::string& label) const;
};

HamiltonianSystem build_hamiltonian(const ModelParams& params);

/// The cavity raising and lowering operators in the Hamiltonian eigenbasis
/// (the laser couples to the cavity mode only).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> dipole_operators(const HamiltonianSystem& sys);

} // namespace p2d
