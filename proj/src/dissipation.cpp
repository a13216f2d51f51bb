#include "polariton2d/dissipation.hpp"

#include <cmath>

#include "polariton2d/constants.hpp"

namespace p2d {

namespace {

double debye_j(double omega_ev, double gamma_ev, double delta_ev) {
    return 2.0 * gamma_ev * delta_ev * omega_ev / (omega_ev * omega_ev + delta_ev * delta_ev);
}

double bose_occupation(double omega_ev, double temperature_k) {
    if (temperature_k <= 0.0) return 0.0;
    const double x = omega_ev / (k_boltzmann_ev_per_k * temperature_k);
    return 1.0 / std::expm1(x);
}

} // namespace

double noise_power(const BathSpec& bath, double omega_ev) {
    switch (bath.kind) {
    case BathKind::Flat:
        return omega_ev >= 0.0 ? bath.gamma_ev : 0.0;
    case BathKind::Debye: {
        const double kt = k_boltzmann_ev_per_k * bath.temperature_k;
        // 0/0 at the origin; the limit of (1+n)J from either side is 2*gamma*kT/delta
        if (std::abs(omega_ev) < 1e-12)
            return 2.0 * bath.gamma_ev * kt / bath.delta_ev;
        if (omega_ev > 0.0)
            return (1.0 + bose_occupation(omega_ev, bath.temperature_k)) *
                   debye_j(omega_ev, bath.gamma_ev, bath.delta_ev);
        return bose_occupation(-omega_ev, bath.temperature_k) *
               debye_j(-omega_ev, bath.gamma_ev, bath.delta_ev);
    }
    }
    return 0.0;
}

Superoperator lindblad_loss(const HamiltonianSystem& sys, double kappa_ev) {
    Superoperator op = Superoperator::zero(sys.dim);
    const Eigen::MatrixXd& a = sys.mu_minus;
    const Eigen::MatrixXd n_op = sys.mu_plus * sys.mu_minus;
    add_sandwich(op.entries, kappa_ev, a, a.transpose());
    add_left(op.entries, -0.5 * kappa_ev, n_op);
    add_right(op.entries, -0.5 * kappa_ev, n_op);
    return op;
}

namespace {

// sigma^dag_i sigma_i in the eigenbasis: projector onto "emitter i excited"
// rotated by the eigenvector matrix.
Eigen::MatrixXd emitter_projector(const HamiltonianSystem& sys, int emitter) {
    const int d = sys.dim;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
    for (int s = 0; s < d; ++s)
        for (int e : sys.basis[s].excited)
            if (e == emitter) diag(s) = 1.0;
    return sys.eigenvectors.transpose() * diag.asDiagonal() * sys.eigenvectors;
}

// Half-Fourier-filtered coupling operator: theta(m,n) = A(m,n) * S_B(E_n - E_m).
Eigen::MatrixXd filtered_operator(const Eigen::MatrixXd& a, const Eigen::VectorXd& energies,
                                  const BathSpec& bath) {
    const int d = static_cast<int>(a.rows());
    Eigen::MatrixXd theta(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            theta(m, n) = a(m, n) * noise_power(bath, energies(n) - energies(m));
    return theta;
}

} // namespace

Superoperator brw_dephasing(const HamiltonianSystem& sys, const BathSpec& bath) {
    Superoperator op = Superoperator::zero(sys.dim);
    for (int i = 0; i < sys.params.n_emitters; ++i) {
        const Eigen::MatrixXd a = emitter_projector(sys, i);
        const Eigen::MatrixXd theta = filtered_operator(a, sys.energies, bath);
        // -(1/2) [A, theta rho - rho theta^T], the dissipative (real) part
        // of the non-secular Redfield generator
        const Eigen::MatrixXd a_theta = a * theta;
        add_left(op.entries, -0.5, a_theta);
        add_right(op.entries, -0.5, a_theta.transpose()); // rho theta^T A
        add_sandwich(op.entries, 0.5, theta, a);
        add_sandwich(op.entries, 0.5, a, theta.transpose());
    }
    return op;
}

Superoperator lindblad_dephasing(const HamiltonianSystem& sys, double gamma_ev) {
    Superoperator op = Superoperator::zero(sys.dim);
    for (int i = 0; i < sys.params.n_emitters; ++i) {
        const Eigen::MatrixXd a = emitter_projector(sys, i);
        const Eigen::MatrixXd n_op = a.transpose() * a;
        add_sandwich(op.entries, gamma_ev, a, a.transpose());
        add_left(op.entries, -0.5 * gamma_ev, n_op);
        add_right(op.entries, -0.5 * gamma_ev, n_op);
    }
    return op;
}

Superoperator dephasing(const HamiltonianSystem& sys, const BathSpec& bath, DephasingModel model) {
    if (model == DephasingModel::Brw) return brw_dephasing(sys, bath);
    return lindblad_dephasing(sys, bath.gamma_ev);
}

} // namespace p2d
