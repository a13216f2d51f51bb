#include "polariton2d/response.hpp"

#include <vector>

#include "polariton2d/constants.hpp"
#include "polariton2d/superoperator.hpp"

namespace p2d {

namespace {

// -i [M, .] as a sparse matrix in the |alpha beta>> pairing.
Eigen::SparseMatrix<Complex> commutator_superop(const Eigen::MatrixXd& m) {
    const int d = static_cast<int>(m.rows());
    std::vector<Eigen::Triplet<Complex>> trip;
    const Complex minus_i(0.0, -1.0);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            if (m(i, k) == 0.0) continue;
            const Complex v = minus_i * m(i, k);
            for (int j = 0; j < d; ++j) {
                trip.emplace_back(i * d + j, k * d + j, v);  // M rho
                trip.emplace_back(j * d + k, j * d + i, -v); // -rho M
            }
        }
    Eigen::SparseMatrix<Complex> s(d * d, d * d);
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

} // namespace

ResponseWorkspace::ResponseWorkspace(const LiouvilleEigendecomposition& eig_,
                                     const HamiltonianSystem& sys_)
    : eig(eig_), sys(sys_) {
    mu_breve_plus = commutator_superop(sys.mu_plus);
    mu_breve_minus = commutator_superop(sys.mu_minus);
    const int d = sys.dim;
    rho0 = Eigen::VectorXcd::Zero(d * d);
    const int g = sys.index_of("G");
    rho0(g * d + g) = 1.0;
    // <<mu+|rho>> = Tr[mu- rho]; mu+ is real so the covector is its transpose
    Eigen::RowVectorXcd mu_plus_vec = Eigen::RowVectorXcd::Zero(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) mu_plus_vec(a * d + b) = sys.mu_plus(a, b);
    detect = mu_plus_vec * eig.right;
}

Eigen::ArrayXd ResponseWorkspace::sector_mask(int m_ket, int m_bra) const {
    return sector_mask({std::pair<int, int>{m_ket, m_bra}});
}

Eigen::ArrayXd ResponseWorkspace::sector_mask(
    std::initializer_list<std::pair<int, int>> pairs) const {
    const int d = sys.dim;
    Eigen::ArrayXd mask = Eigen::ArrayXd::Zero(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (auto& [mk, mb] : pairs)
                if (sys.manifold[a] == mk && sys.manifold[b] == mb) mask(a * d + b) = 1.0;
    return mask;
}

GeneralMasks compute_masks(const ResponseWorkspace& ws, const Eigen::VectorXd& grid_tau_ev,
                           const Eigen::VectorXd& grid_t_ev, const SectorProjection& proj) {
    const auto& eig = ws.eig;
    const int n = static_cast<int>(eig.eigenvalues.size());
    const int n_tau = static_cast<int>(grid_tau_ev.size());
    const int n_t = static_cast<int>(grid_t_ev.size());

    GeneralMasks masks;
    masks.omega_tau_ev = grid_tau_ev;
    masks.omega_t_ev = grid_t_ev;
    masks.lambda = eig.eigenvalues;

    // Excitation side. First pulse mu-breve^-, second mu-breve^+ for the
    // rephasing component (resolvent sign -i w); the opposite for the
    // non-rephasing one (+i w).
    const Eigen::VectorXcd b_r = eig.left * (ws.mu_breve_minus * ws.rho0);
    const Eigen::VectorXcd b_nr = eig.left * (ws.mu_breve_plus * ws.rho0);
    for (int pass = 0; pass < 2; ++pass) {
        const bool rephasing = pass == 0;
        const Eigen::VectorXcd& b = rephasing ? b_r : b_nr;
        const Complex sign = rephasing ? Complex(0, -1) : Complex(0, 1);
        Eigen::MatrixXcd y(n, n_tau);
        for (int w = 0; w < n_tau; ++w)
            y.col(w) = b.array() / (sign * grid_tau_ev(w) + eig.eigenvalues.array());
        Eigen::MatrixXcd z = eig.right * y;
        z = (rephasing ? ws.mu_breve_plus : ws.mu_breve_minus) * z;
        if (proj.pre.size() > 0) z = proj.pre.matrix().asDiagonal() * z;
        Eigen::MatrixXcd e = (eig.left * z).transpose();
        if (rephasing)
            masks.exc_r = std::move(e);
        else
            masks.exc_nr = std::move(e);
    }

    // Detection side: D_k(w_t) = sum_m d_m / (i w_t + lambda_m) B_mk with
    // B = W P_sel mu-breve^+ P_post V, evaluated without forming B.
    Eigen::RowVectorXcd d_det = ws.detect;
    if (proj.det.size() > 0) {
        const int dh = ws.sys.dim;
        Eigen::RowVectorXcd mu_masked = Eigen::RowVectorXcd::Zero(dh * dh);
        for (int a = 0; a < dh; ++a)
            for (int bb = 0; bb < dh; ++bb)
                mu_masked(a * dh + bb) = ws.sys.mu_plus(a, bb) * proj.det(a * dh + bb);
        d_det = mu_masked * eig.right;
    }
    Eigen::MatrixXcd rd(n_t, n);
    for (int w = 0; w < n_t; ++w)
        rd.row(w) = d_det.array() / (Complex(0, 1) * grid_t_ev(w) + eig.eigenvalues.transpose().array());
    Eigen::MatrixXcd x = rd * eig.left;
    if (proj.sel.size() > 0) x = x * proj.sel.matrix().asDiagonal();
    x = x * ws.mu_breve_plus;
    if (proj.post.size() > 0) x = x * proj.post.matrix().asDiagonal();
    masks.det = x * eig.right;
    return masks;
}

} // namespace p2d
