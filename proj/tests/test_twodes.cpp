#include <doctest.h>

#include <cmath>
#include <set>

#include "polariton2d/twodes.hpp"
#include "test_helpers.hpp"

using namespace p2d;
using namespace p2d::test;

namespace {

struct Stack {
    ModelParams params;
    HamiltonianSystem sys;
    LiouvilleEigendecomposition eig;
};

Stack make_stack(const ModelParams& p) {
    Stack s{p, build_hamiltonian(p), {}};
    s.eig = diagonalize(assemble_liouvillian(s.sys, p.kappa_ev(), p.bath()), s.sys);
    return s;
}

// grid avoiding every eigenfrequency line (the undamped resolvent has
// exact poles there)
Eigen::VectorXd offset_grid() { return linspace(1.8531, 2.1477, 71); }

} // namespace

TEST_CASE("retained masks single out the population and coherence modes") {
    const auto s = make_stack(tc_reference(2));
    const auto masks =
        build_masks(s.eig, s.sys, linspace(1.85, 2.15, 96), linspace(1.85, 2.15, 96), 1e-6);

    std::multiset<std::string> population_labels;
    for (size_t k = 0; k < masks.retained.size(); ++k)
        if (std::abs(masks.lambda(k).imag()) < 1e-10)
            population_labels.insert(masks.labels[k].ket + masks.labels[k].bra);
    CHECK(population_labels == std::multiset<std::string>{"D1D1", "LL", "UU"});

    SUBCASE("dark state is weak in excitation but dominant in detection") {
        double max_e = 0.0, max_d = 0.0, e_dd = 0.0, d_dd = 0.0;
        for (size_t k = 0; k < masks.retained.size(); ++k) {
            const double e = (masks.exc_r.col(k) + masks.exc_nr.col(k)).cwiseAbs().maxCoeff();
            const double d = masks.det.col(k).cwiseAbs().maxCoeff();
            max_e = std::max(max_e, e);
            max_d = std::max(max_d, d);
            if (masks.labels[k].ket == "D1") {
                e_dd = e;
                d_dd = d;
            }
        }
        CHECK(e_dd < 0.2 * max_e);
        CHECK(d_dd == doctest::Approx(max_d)); // the largest detection mask
    }
}

TEST_CASE("pruning is consistent with the full sum") {
    const auto s = make_stack(tc_reference(2));
    const auto grid = linspace(1.85, 2.15, 64);
    const auto full = build_masks(s.eig, s.sys, grid, grid, 0.0);
    const auto pruned = build_masks(s.eig, s.sys, grid, grid, 1e-6);
    CHECK(full.retained.size() == 64);
    CHECK(pruned.retained.size() < full.retained.size());
    const auto a = spectrum_2d(full, 30.0, Component::Absorptive);
    const auto b = spectrum_2d(pruned, 30.0, Component::Absorptive);
    CHECK(rel_l2(a.values, b.values) < 1e-5);
}

TEST_CASE("mask formula agrees with the time-domain oracle") {
    const auto s = make_stack(tc_reference(2));
    const auto ospec = default_oracle_spec(s.eig, s.sys);
    const double t_rabi = s.params.rabi_period_fs();
    const auto oracle = time_domain_oracle(s.eig, s.sys, 0.5 * t_rabi, Component::Absorptive, ospec);
    const auto masks = build_masks(s.eig, s.sys, oracle.omega_tau_ev, oracle.omega_t_ev, 0.0);
    const auto direct = spectrum_2d(masks, 0.5 * t_rabi, Component::Absorptive);
    CHECK(rel_l2(oracle.values, direct.values) < 1e-2);
}

TEST_CASE("oracle rejects grids that cannot resolve the dynamics") {
    const auto s = make_stack(jc_reference());
    OracleSpec spec = default_oracle_spec(s.eig, s.sys);
    spec.dt_fs = s.params.rabi_period_fs(); // far too coarse
    CHECK_THROWS_AS(time_domain_oracle(s.eig, s.sys, 0.0, Component::Absorptive, spec),
                    GridTooCoarse);
    OracleSpec short_span = default_oracle_spec(s.eig, s.sys);
    short_span.n_t = 10;
    CHECK_THROWS_AS(time_domain_oracle(s.eig, s.sys, 0.0, Component::Absorptive, short_span),
                    GridTooCoarse);
}

TEST_CASE("tau=0 slice of the sampled response matches the analytic resolvent") {
    const auto s = make_stack(tc_reference(2));
    const ResponseWorkspace ws(s.eig, s.sys);
    const double T = 10.0;
    const int n = static_cast<int>(s.eig.eigenvalues.size());

    // state after pulses 1 and 2 at tau=0, then T evolution and pulse 3
    Eigen::VectorXcd v = ws.mu_breve_plus * (ws.mu_breve_minus * ws.rho0).eval();
    Eigen::VectorXcd c = s.eig.left * v;
    for (int i = 0; i < n; ++i) c(i) *= std::exp(s.eig.eigenvalues(i) * (T / hbar_ev_fs));
    const Eigen::VectorXcd c3 = s.eig.left * (ws.mu_breve_plus * (s.eig.right * c).eval());

    // quadrature of the continuous transform; dt must resolve the optical
    // carrier for the trapezoid rule to converge
    const double dt = 0.02;
    const int n_t = 25000;
    for (double w : {1.95, 2.0, 2.05}) {
        Complex discrete = 0.0;
        for (int ti = 0; ti < n_t; ++ti) {
            Complex sample = 0.0;
            for (int m = 0; m < n; ++m)
                sample += ws.detect(m) *
                          std::exp(s.eig.eigenvalues(m) * (ti * dt / hbar_ev_fs)) * c3(m);
            discrete += sample * std::exp(Complex(0, w * ti * dt / hbar_ev_fs)) *
                        (ti == 0 ? 0.5 : 1.0) * dt / hbar_ev_fs;
        }
        // half-line transform of exp(lambda t / hbar) is -1/(lambda + i w)
        Complex analytic = 0.0;
        for (int m = 0; m < n; ++m)
            analytic -= ws.detect(m) * c3(m) / (Complex(0, w) + s.eig.eigenvalues(m));
        CHECK(std::abs(discrete - analytic) < 1e-2 * std::abs(analytic));
    }
}

TEST_CASE("cross-peak symmetry with and without a dark state") {
    SUBCASE("one emitter at T=0: cross peaks equal within 5%") {
        const auto s = make_stack(jc_reference());
        const auto masks =
            build_masks(s.eig, s.sys, linspace(1.85, 2.15, 128), linspace(1.85, 2.15, 128), 1e-8);
        const auto spec = spectrum_2d(masks, 0.0, Component::Total);
        const double lu = std::abs(peak_value(spec, s.sys, PeakId::LU, true));
        const double ul = std::abs(peak_value(spec, s.sys, PeakId::UL, true));
        CHECK(std::abs(lu - ul) / std::max(lu, ul) < 0.05);
    }
    SUBCASE("two emitters at T=0: dark-state detection breaks the symmetry") {
        const auto s = make_stack(tc_reference(2));
        const auto masks =
            build_masks(s.eig, s.sys, linspace(1.85, 2.15, 128), linspace(1.85, 2.15, 128), 1e-8);
        const auto spec = spectrum_2d(masks, 0.0, Component::Total);
        const double lu = std::abs(peak_value(spec, s.sys, PeakId::LU, true));
        const double ul = std::abs(peak_value(spec, s.sys, PeakId::UL, true));
        CHECK(std::abs(lu - ul) / std::max(lu, ul) > 0.05);
    }
    SUBCASE("two emitters at five Rabi periods: U/L dominates L/U") {
        const auto s = make_stack(tc_reference(2));
        const auto masks =
            build_masks(s.eig, s.sys, linspace(1.85, 2.15, 128), linspace(1.85, 2.15, 128), 1e-8);
        const auto spec = spectrum_2d(masks, 5.0 * s.params.rabi_period_fs(), Component::Total);
        CHECK(std::abs(peak_value(spec, s.sys, PeakId::UL)) >
              std::abs(peak_value(spec, s.sys, PeakId::LU)));
    }
}

TEST_CASE("closed system revives at integer Rabi periods") {
    ModelParams p = tc_reference(2);
    p.kappa_lifetime_fs = 1e30;
    p.gamma_lifetime_fs = 1e30;
    const auto s = make_stack(p);
    const auto masks = build_masks(s.eig, s.sys, offset_grid(), offset_grid(), 0.0);
    const double t_rabi = p.rabi_period_fs();
    const auto a = spectrum_2d(masks, 0.35 * t_rabi, Component::Absorptive);
    const auto b = spectrum_2d(masks, 1.35 * t_rabi, Component::Absorptive);
    CHECK(rel_l2(a.values, b.values) < 1e-8);
}

TEST_CASE("signal scales as the fourth power of the dipole") {
    const auto p = jc_reference();
    auto sys = build_hamiltonian(p);
    const auto eig = diagonalize(assemble_liouvillian(sys, p.kappa_ev(), p.bath()), sys);
    const auto grid = linspace(1.85, 2.15, 48);
    const auto base = spectrum_2d(build_masks(eig, sys, grid, grid, 0.0), 13.0,
                                  Component::Absorptive);
    HamiltonianSystem scaled = sys;
    scaled.mu_plus *= 2.0;
    scaled.mu_minus *= 2.0;
    const auto big = spectrum_2d(build_masks(eig, scaled, grid, grid, 0.0), 13.0,
                                 Component::Absorptive);
    CHECK(rel_l2(big.values, (16.0 * base.values).eval()) < 1e-12);

    HamiltonianSystem zero = sys;
    zero.mu_plus.setZero();
    zero.mu_minus.setZero();
    const auto none = spectrum_2d(build_masks(eig, zero, grid, grid, 0.0), 13.0,
                                  Component::Absorptive);
    CHECK(none.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("absorptive component is real") {
    const auto s = make_stack(tc_reference(2));
    const auto masks =
        build_masks(s.eig, s.sys, linspace(1.85, 2.15, 48), linspace(1.85, 2.15, 48), 1e-8);
    const auto spec = spectrum_2d(masks, 25.0, Component::Absorptive);
    CHECK(spec.values.imag().cwiseAbs().maxCoeff() == 0.0);
    const auto r = spectrum_2d(masks, 25.0, Component::Rephasing);
    CHECK(r.values.imag().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("waiting-time dependence is a sum over the retained eigenvalues") {
    const auto s = make_stack(tc_reference(2));
    const auto masks =
        build_masks(s.eig, s.sys, linspace(1.85, 2.15, 96), linspace(1.85, 2.15, 96), 1e-8);
    const double t_rabi = s.params.rabi_period_fs();
    const int n_t = 160;
    const double dt = 8.0 * t_rabi / n_t;
    Eigen::VectorXcd series(n_t);
    for (int i = 0; i < n_t; ++i) {
        const auto spec = spectrum_2d(masks, i * dt, Component::Total);
        series(i) = peak_value(spec, s.sys, PeakId::LL);
    }
    // least-squares weights of the known exponentials reproduce the series
    const int kept = static_cast<int>(masks.retained.size());
    Eigen::MatrixXcd model(n_t, kept);
    for (int i = 0; i < n_t; ++i)
        for (int j = 0; j < kept; ++j)
            model(i, j) = std::exp(masks.lambda(j) * (i * dt / hbar_ev_fs));
    const Eigen::VectorXcd weights = model.colPivHouseholderQr().solve(series);
    CHECK((model * weights - series).norm() < 1e-10 * series.norm());
    // every oscillating contribution sits at the U-L coherence frequency
    const double omega_ul =
        std::abs(s.eig.eigenvalues(s.eig.index_of_pair("U", "L")).imag());
    const double w_max = weights.cwiseAbs().maxCoeff();
    for (int j = 0; j < kept; ++j) {
        if (std::abs(weights(j)) < 1e-6 * w_max) continue;
        const double freq = std::abs(masks.lambda(j).imag());
        if (freq > 1e-8) CHECK(freq == doctest::Approx(omega_ul).epsilon(0.05));
    }
}

TEST_CASE("peak helpers") {
    const auto s = make_stack(tc_reference(2));
    const auto masks =
        build_masks(s.eig, s.sys, linspace(1.85, 2.15, 64), linspace(1.85, 2.15, 64), 1e-8);
    const auto spec = spectrum_2d(masks, 0.0, Component::Absorptive);
    CHECK_THROWS_AS(peak_value(spec, 3.0, 2.0), OutOfGrid);
    CHECK(peak_name(PeakId::UL) == "U/L");
    const auto [wt, wd] = peak_position(s.sys, PeakId::UL);
    CHECK(wt == doctest::Approx(2.05));
    CHECK(wd == doctest::Approx(1.95));
    // refinement never decreases the magnitude
    CHECK(std::abs(peak_value(spec, s.sys, PeakId::LL, true)) >=
          std::abs(peak_value(spec, s.sys, PeakId::LL, false)));
}
