#pragma once

#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "polariton2d/constants.hpp"
#include "polariton2d/liouville.hpp"
#include "polariton2d/model.hpp"

namespace p2d::test {

/// Jaynes-Cummings reference configuration: resonant cavity at 2 eV,
/// 0.1 eV splitting, 15 fs cavity lifetime, 50 fs dephasing, flat bath.
inline ModelParams jc_reference() {
    ModelParams p;
    p.n_emitters = 1;
    p.omega_c_ev = 2.0;
    p.omega_0_ev = 2.0;
    p.rabi_splitting_ev = 0.1;
    p.kappa_lifetime_fs = 15.0;
    p.gamma_lifetime_fs = 50.0;
    p.bath_kind = BathKind::Flat;
    p.n_max = 2;
    return p;
}

inline ModelParams tc_reference(int n_emitters) {
    ModelParams p = jc_reference();
    p.n_emitters = n_emitters;
    return p;
}

/// N=5 detuned Debye configuration used for the room-temperature run.
inline ModelParams debye_reference() {
    ModelParams p;
    p.n_emitters = 5;
    p.omega_c_ev = 2.1;
    p.omega_0_ev = 2.09;
    p.rabi_splitting_ev = 0.3;
    p.kappa_lifetime_fs = 120.0;
    p.gamma_lifetime_fs = 60.0;
    p.bath_kind = BathKind::Debye;
    p.bath_delta_ev = 0.2;
    p.bath_temperature_k = 300.0;
    p.n_max = 2;
    return p;
}

/// The reduced 5x5 master equation on (GG, LL, UL, LU, UU) for one emitter
/// at resonance, in eV units.
inline Eigen::MatrixXcd reduced_jc_sector(double kappa, double gamma, double rabi) {
    const Complex i_rabi(0.0, rabi);
    Eigen::MatrixXcd m(5, 5);
    m << 0, kappa / 2, kappa / 2, kappa / 2, kappa / 2,
        0, -kappa / 2, -kappa / 4, -kappa / 4, gamma / 4,
        0, -kappa / 4, Complex(-kappa / 2 - gamma / 8) - i_rabi, gamma / 8, -kappa / 4,
        0, -kappa / 4, gamma / 8, Complex(-kappa / 2 - gamma / 8) + i_rabi, -kappa / 4,
        0, 0, -kappa / 4, -kappa / 4, -kappa / 2 - gamma / 4;
    return m;
}

/// The reduced 6x6 master equation on (GG, LL, UL, DD, LU, UU) for two
/// emitters at resonance, in its conjugate-symmetric form (the LU row is
/// the conjugate swap of the UL row).
inline Eigen::MatrixXcd reduced_tc2_sector(double kappa, double gamma, double rabi) {
    const Complex i_rabi(0.0, rabi);
    Eigen::MatrixXcd m(6, 6);
    m << 0, kappa / 2, kappa / 2, 0, kappa / 2, kappa / 2,
        0, -kappa / 2, -kappa / 4 + gamma / 8, gamma / 4, -kappa / 4 + gamma / 8, gamma / 8,
        0, -kappa / 4, Complex(-kappa / 2 - 3 * gamma / 16) - i_rabi, -gamma / 8, gamma / 16,
        -kappa / 4 + gamma / 8,
        0, 0, -gamma / 8, -gamma / 4, -gamma / 8, gamma / 4,
        0, -kappa / 4, gamma / 16, -gamma / 8, Complex(-kappa / 2 - 3 * gamma / 16) + i_rabi,
        -kappa / 4 + gamma / 8,
        0, 0, -kappa / 4, 0, -kappa / 4, -kappa / 2 - 3 * gamma / 8;
    return m;
}

/// Extracts the sub-generator on the listed (ket, bra) label pairs.
inline Eigen::MatrixXcd restrict_sector(const Superoperator& op, const HamiltonianSystem& sys,
                                        const std::vector<std::pair<std::string, std::string>>& pairs) {
    const int n = static_cast<int>(pairs.size());
    Eigen::MatrixXcd sub(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            sub(r, c) = op.entries(
                op.vec_index(sys.index_of(pairs[r].first), sys.index_of(pairs[r].second)),
                op.vec_index(sys.index_of(pairs[c].first), sys.index_of(pairs[c].second)));
    return sub;
}

/// Independent propagation oracle: dense matrix exponential of the
/// generator (scaling-and-squaring), applied to the vectorized state.
inline Eigen::VectorXcd expm_propagate(const Superoperator& op, const Eigen::VectorXcd& rho_vec,
                                       double t_fs) {
    const Eigen::MatrixXcd expm = (op.entries * (t_fs / hbar_ev_fs)).exp();
    return expm * rho_vec;
}

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    return 0.5 * (a + a.adjoint().eval());
}

/// Random density matrix (Hermitian, positive, unit trace).
inline Eigen::MatrixXcd random_density(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

inline double rel_l2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).norm() / b.norm();
}

/// Height, full width at half maximum and position of the grid maximum
/// within `radius_ev` of `near_ev` (half-maximum crossings interpolated
/// linearly).
struct PeakShape {
    double height = 0.0;
    double fwhm = 0.0;
    double position = 0.0;
};

inline PeakShape peak_shape_1d(const Eigen::VectorXd& omega, const Eigen::VectorXd& values,
                               double near_ev, double radius_ev) {
    int best = -1;
    for (int i = 0; i < omega.size(); ++i) {
        if (std::abs(omega(i) - near_ev) > radius_ev) continue;
        if (best < 0 || values(i) > values(best)) best = i;
    }
    if (best < 0) return {};
    const double half = values(best) / 2.0;
    int lo = best, hi = best;
    while (lo > 0 && values(lo) > half) --lo;
    while (hi < values.size() - 1 && values(hi) > half) ++hi;
    auto cross = [&](int a, int b) {
        const double f = (half - values(a)) / (values(b) - values(a));
        return omega(a) + f * (omega(b) - omega(a));
    };
    return {values(best), cross(hi - 1, hi) - cross(lo, lo + 1), omega(best)};
}

} // namespace p2d::test
