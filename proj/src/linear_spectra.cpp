#include "polariton2d/linear_spectra.hpp"

#include <cmath>

#include "polariton2d/errors.hpp"
#include "polariton2d/superoperator.hpp"

namespace p2d {

Spectrum1D absorption(const LiouvilleEigendecomposition& eig, const HamiltonianSystem& sys,
                      const Eigen::VectorXd& grid_ev, bool normalize) {
    const int d = sys.dim;
    const int g = sys.index_of("G");

    // initial operator a^dag |G><G| and the detection covector Tr[a .]
    Eigen::MatrixXcd x0 = Eigen::MatrixXcd::Zero(d, d);
    x0.col(g) = sys.mu_plus.col(g).cast<Complex>();
    const Eigen::VectorXcd c = eig.left * vectorize(x0);
    Eigen::RowVectorXcd detect = Eigen::RowVectorXcd::Zero(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) detect(a * d + b) = sys.mu_plus(a, b); // <<a^dag| = Tr[a .]
    const Eigen::RowVectorXcd w = detect * eig.right;

    Spectrum1D spec;
    spec.omega_ev = grid_ev;
    spec.values.resize(grid_ev.size());
    for (int i = 0; i < grid_ev.size(); ++i) {
        Complex acc = 0.0;
        for (int k = 0; k < d * d; ++k)
            acc -= w(k) * c(k) / (eig.eigenvalues(k) + Complex(0, grid_ev(i)));
        spec.values(i) = acc.real();
    }
    if (normalize) {
        const double m = spec.values.cwiseAbs().maxCoeff();
        if (m > 0) {
            spec.values /= m;
            spec.normalization = m;
        }
    }
    return spec;
}

namespace {

// One emission column: steady state of the driven rotating-frame generator,
// then the inelastic part of <a^dag(t') a(0)> as resolvent terms.
Eigen::VectorXd emission_column(const HamiltonianSystem& sys, double kappa_ev,
                                const BathSpec& bath, DephasingModel model, double omega_laser_ev,
                                double drive_ev, const Eigen::VectorXd& grid_emission_ev) {
    const int d = sys.dim;
    const Superoperator L =
        assemble_driven_liouvillian(sys, kappa_ev, bath, model, omega_laser_ev, drive_ev);
    const LiouvilleEigendecomposition eig = diagonalize(L, sys);

    // unique steady state = the single kernel eigenvector, trace-normalized
    const double scale = L.entries.norm();
    int zero_index = -1;
    int zero_count = 0;
    for (int k = 0; k < d * d; ++k) {
        if (std::abs(eig.eigenvalues(k)) < 1e-12 * scale) {
            ++zero_count;
            zero_index = k;
        }
    }
    if (zero_count != 1)
        throw SteadyStateNotUnique("driven Liouvillian kernel has dimension " +
                                   std::to_string(zero_count));
    Eigen::MatrixXcd rho_s = devectorize(eig.right.col(zero_index), d);
    rho_s /= rho_s.trace();

    const Eigen::VectorXcd c = eig.left * vectorize((sys.mu_minus.cast<Complex>() * rho_s).eval());
    Eigen::RowVectorXcd detect = Eigen::RowVectorXcd::Zero(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) detect(a * d + b) = sys.mu_minus(a, b); // <<a| = Tr[a^dag .]
    const Eigen::RowVectorXcd w = detect * eig.right;

    Eigen::VectorXd out(grid_emission_ev.size());
    for (int i = 0; i < grid_emission_ev.size(); ++i) {
        const double delta = grid_emission_ev(i) - omega_laser_ev; // rotating-frame offset
        Complex acc = 0.0;
        for (int k = 0; k < d * d; ++k) {
            if (std::abs(eig.eigenvalues(k)) < 1e-12 * scale) continue; // elastic line
            acc -= w(k) * c(k) / (eig.eigenvalues(k) - Complex(0, delta));
        }
        out(i) = acc.real();
    }
    return out;
}

} // namespace

EmissionMap emission_map(const HamiltonianSystem& sys, double kappa_ev, const BathSpec& bath,
                         DephasingModel model, const Eigen::VectorXd& grid_laser_ev,
                         const Eigen::VectorXd& grid_emission_ev, const EmissionOptions& options) {
    const double drive =
        options.drive_ev >= 0.0 ? options.drive_ev : 1e-3 * sys.params.rabi_splitting_ev;

    EmissionMap map;
    map.omega_laser_ev = grid_laser_ev;
    map.omega_ev = grid_emission_ev;
    map.values.resize(grid_laser_ev.size(), grid_emission_ev.size());
    for (int i = 0; i < grid_laser_ev.size(); ++i)
        map.values.row(i) = emission_column(sys, kappa_ev, bath, model, grid_laser_ev(i), drive,
                                            grid_emission_ev)
                                .transpose();

    if (options.linearity_check && drive > 0.0) {
        // linear response: the normalized map must be drive-independent
        Eigen::MatrixXd doubled(grid_laser_ev.size(), grid_emission_ev.size());
        for (int i = 0; i < grid_laser_ev.size(); ++i)
            doubled.row(i) = emission_column(sys, kappa_ev, bath, model, grid_laser_ev(i),
                                             2.0 * drive, grid_emission_ev)
                                 .transpose();
        const double m1 = map.values.cwiseAbs().maxCoeff();
        const double m2 = doubled.cwiseAbs().maxCoeff();
        if (m1 > 0 && m2 > 0) {
            const double diff = (map.values / m1 - doubled / m2).cwiseAbs().maxCoeff();
            if (diff > 0.01)
                throw DriveTooStrong("normalized emission map changes by " + std::to_string(diff) +
                                     " when the drive is doubled");
        }
    }
    if (options.normalize) {
        const double m = map.values.cwiseAbs().maxCoeff();
        if (m > 0) {
            map.values /= m;
            map.normalization = m;
        }
    }
    return map;
}

} // namespace p2d
