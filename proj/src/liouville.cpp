#include "polariton2d/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "polariton2d/constants.hpp"
#include "polariton2d/errors.hpp"

namespace p2d {

namespace {

void add_commutator(Eigen::MatrixXcd& target, const Eigen::MatrixXcd& h) {
    // -i [H, rho]
    add_left(target, Complex(0, -1), h);
    add_right(target, Complex(0, 1), h);
}

} // namespace

LiouvillianParts assemble_liouvillian_parts(const HamiltonianSystem& sys, double kappa_ev,
                                            const BathSpec& bath, DephasingModel model) {
    LiouvillianParts parts;
    parts.coherent = Superoperator::zero(sys.dim);
    add_commutator(parts.coherent.entries, sys.energies.cast<Complex>().asDiagonal().toDenseMatrix());
    parts.loss = lindblad_loss(sys, kappa_ev);
    parts.dephasing = dephasing(sys, bath, model);
    parts.total = parts.coherent;
    parts.total += parts.loss;
    parts.total += parts.dephasing;
    return parts;
}

Superoperator assemble_liouvillian(const HamiltonianSystem& sys, double kappa_ev,
                                   const BathSpec& bath, DephasingModel model) {
    return assemble_liouvillian_parts(sys, kappa_ev, bath, model).total;
}

Superoperator assemble_driven_liouvillian(const HamiltonianSystem& sys, double kappa_ev,
                                          const BathSpec& bath, DephasingModel model,
                                          double omega_laser_ev, double drive_ev) {
    Superoperator op = Superoperator::zero(sys.dim);
    Eigen::MatrixXcd h = sys.energies.cast<Complex>().asDiagonal();
    for (int i = 0; i < sys.dim; ++i) h(i, i) -= omega_laser_ev * sys.manifold[i];
    h += drive_ev * (sys.mu_plus + sys.mu_minus).cast<Complex>();
    add_commutator(op.entries, h);
    op += lindblad_loss(sys, kappa_ev);
    op += dephasing(sys, bath, model);
    return op;
}

namespace {

// Orthonormal Hermitian-operator basis indexed like the vectorization: the
// diagonal pair (a,a) keeps its coordinate; an off-diagonal pair (a,b),(b,a)
// with a<b maps to the symmetric/antisymmetric combinations
//   c_ab = (r_ab - i r_ba)/sqrt(2),  c_ba = (r_ab + i r_ba)/sqrt(2).
// A Hermiticity-preserving generator is real in these coordinates.
struct HermitianBasisMap {
    int dim_h;
    explicit HermitianBasisMap(int d) : dim_h(d) {}

    // number of nonzeros and (index, coefficient) entries of column v of Q
    // (real coordinate v expressed in complex vec coordinates)
    int column(int v, int idx[2], Complex coef[2]) const {
        const int a = v / dim_h, b = v % dim_h;
        const double s = 1.0 / std::sqrt(2.0);
        if (a == b) {
            idx[0] = v;
            coef[0] = 1.0;
            return 1;
        }
        const int u = std::min(a, b) * dim_h + std::max(a, b);
        const int l = std::max(a, b) * dim_h + std::min(a, b);
        idx[0] = u;
        idx[1] = l;
        if (a < b) { // symmetric combination
            coef[0] = s;
            coef[1] = s;
        } else { // antisymmetric combination
            coef[0] = Complex(0, -s);
            coef[1] = Complex(0, s);
        }
        return 2;
    }

    // same for row v of Q
    int row(int v, int idx[2], Complex coef[2]) const {
        const int a = v / dim_h, b = v % dim_h;
        const double s = 1.0 / std::sqrt(2.0);
        if (a == b) {
            idx[0] = v;
            coef[0] = 1.0;
            return 1;
        }
        const int u = std::min(a, b) * dim_h + std::max(a, b);
        const int l = std::max(a, b) * dim_h + std::min(a, b);
        idx[0] = u;
        idx[1] = l;
        coef[0] = s;
        coef[1] = (v == u) ? Complex(0, -s) : Complex(0, s);
        return 2;
    }
};

Eigen::MatrixXd to_real_representation(const Eigen::MatrixXcd& liouvillian, int dim_h) {
    const int n = static_cast<int>(liouvillian.rows());
    const HermitianBasisMap q(dim_h);
    Eigen::MatrixXd t(n, n);
    Eigen::VectorXcd y(n);
    double max_imag = 0.0;
    int idx[2], jdx[2];
    Complex coef[2], cjef[2];
    for (int col = 0; col < n; ++col) {
        const int nc = q.column(col, jdx, cjef);
        y = liouvillian.col(jdx[0]) * cjef[0];
        if (nc == 2) y += liouvillian.col(jdx[1]) * cjef[1];
        for (int row = 0; row < n; ++row) {
            const int nr = q.column(row, idx, coef);
            Complex val = std::conj(coef[0]) * y(idx[0]);
            if (nr == 2) val += std::conj(coef[1]) * y(idx[1]);
            t(row, col) = val.real();
            max_imag = std::max(max_imag, std::abs(val.imag()));
        }
    }
    const double scale = t.cwiseAbs().maxCoeff();
    if (max_imag > 1e-10 * (1.0 + scale))
        throw NumericalError("generator does not preserve Hermiticity; residual " +
                             std::to_string(max_imag));
    return t;
}

} // namespace

LiouvilleEigendecomposition diagonalize(const Superoperator& liouvillian,
                                        const HamiltonianSystem& sys) {
    const int n = static_cast<int>(liouvillian.entries.rows());
    const int d = liouvillian.dim_h;

    Eigen::MatrixXd t = to_real_representation(liouvillian.entries, d);

    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr(n, n);
    int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, t.data(), n, wr.data(), wi.data(),
                             nullptr, 1, vr.data(), n);
    if (info != 0) throw NumericalError("dgeev failed with info=" + std::to_string(info));
    t.resize(0, 0);

    // Re-orthonormalize inside numerically degenerate eigenvalue clusters.
    // The eigensolver may hand back an ill-conditioned basis of a degenerate
    // eigenspace (resonant ladders produce exact frequency coincidences);
    // any basis of the eigenspace is an eigenbasis, so pick an orthonormal
    // one. Clusters pair (wr, wi) with (wr, -wi), so orthonormalizing the
    // packed (re, im) columns handles both conjugate spaces at once.
    {
        const double lam_scale = std::max(wr.cwiseAbs().maxCoeff(), wi.cwiseAbs().maxCoeff());
        const double tol = 1e-11 * (1.0 + lam_scale);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (std::abs(wr(a) - wr(b)) > tol) return wr(a) < wr(b);
            return std::abs(wi(a)) < std::abs(wi(b));
        });
        size_t c0 = 0;
        while (c0 < order.size()) {
            size_t c1 = c0 + 1;
            while (c1 < order.size() && std::abs(wr(order[c1]) - wr(order[c0])) <= tol &&
                   std::abs(std::abs(wi(order[c1])) - std::abs(wi(order[c0]))) <= tol)
                ++c1;
            // columns with wi >= 0 represent each conjugate pair (or a real mode)
            std::vector<int> cols;
            bool homogeneous = true;
            for (size_t c = c0; c < c1; ++c) {
                if ((wi(order[c]) != 0.0) != (wi(order[c0]) != 0.0)) homogeneous = false;
                if (wi(order[c]) >= 0.0) cols.push_back(order[c]);
            }
            if (homogeneous && cols.size() > 1) {
                const bool complex_pairs = wi(order[c0]) != 0.0;
                if (complex_pairs) {
                    // modified Gram-Schmidt on x + i y, written back as (re, im)
                    for (size_t a = 0; a < cols.size(); ++a) {
                        Eigen::VectorXcd va = vr.col(cols[a]) + Complex(0, 1) * vr.col(cols[a] + 1);
                        for (size_t b = 0; b < a; ++b) {
                            const Eigen::VectorXcd vb =
                                vr.col(cols[b]) + Complex(0, 1) * vr.col(cols[b] + 1);
                            va -= vb.dot(va) * vb;
                        }
                        va /= va.norm();
                        vr.col(cols[a]) = va.real();
                        vr.col(cols[a] + 1) = va.imag();
                    }
                } else {
                    for (size_t a = 0; a < cols.size(); ++a) {
                        Eigen::VectorXd va = vr.col(cols[a]);
                        for (size_t b = 0; b < a; ++b)
                            va -= vr.col(cols[b]).dot(va) * vr.col(cols[b]);
                        va /= va.norm();
                        vr.col(cols[a]) = va;
                    }
                }
            }
            c0 = c1;
        }
    }

    // invert the packed real eigenvector matrix, then unpack conjugate pairs
    Eigen::MatrixXd vr_inv = vr;
    std::vector<lapack_int> ipiv(n);
    info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, vr_inv.data(), n, ipiv.data());
    if (info != 0)
        throw DefectiveLiouvillian("right-eigenvector matrix is singular (LU pivot " +
                                   std::to_string(info) + ")");
    info = LAPACKE_dgetri(LAPACK_COL_MAJOR, n, vr_inv.data(), n, ipiv.data());
    if (info != 0) throw DefectiveLiouvillian("right-eigenvector matrix inversion failed");

    Eigen::MatrixXcd v(n, n), w(n, n);
    Eigen::VectorXcd lambda(n);
    for (int k = 0; k < n; ++k) {
        if (wi(k) == 0.0) {
            lambda(k) = Complex(wr(k), 0.0);
            v.col(k) = vr.col(k).cast<Complex>();
            w.row(k) = vr_inv.row(k).cast<Complex>();
        } else {
            lambda(k) = Complex(wr(k), wi(k));
            lambda(k + 1) = Complex(wr(k), -wi(k));
            v.col(k) = vr.col(k) + Complex(0, 1) * vr.col(k + 1);
            v.col(k + 1) = vr.col(k) - Complex(0, 1) * vr.col(k + 1);
            w.row(k) = 0.5 * (vr_inv.row(k) - Complex(0, 1) * vr_inv.row(k + 1));
            w.row(k + 1) = 0.5 * (vr_inv.row(k) + Complex(0, 1) * vr_inv.row(k + 1));
            ++k;
        }
    }
    vr.resize(0, 0);
    vr_inv.resize(0, 0);

    // rotate eigenvectors back to the |alpha beta>> coordinates
    const HermitianBasisMap q(d);
    LiouvilleEigendecomposition eig;
    eig.dim_h = d;
    eig.right.resize(n, n);
    eig.left.resize(n, n);
    int idx[2];
    Complex coef[2];
    for (int row = 0; row < n; ++row) {
        // V_c = Q V  row by row
        const int nr = q.row(row, idx, coef);
        if (nr == 1) {
            eig.right.row(row) = v.row(idx[0]);
        } else {
            eig.right.row(row) = coef[0] * v.row(idx[0]) + coef[1] * v.row(idx[1]);
        }
    }
    for (int col = 0; col < n; ++col) {
        // W_c = W Q^H  column by column; column v of Q^H is conj(row v of Q)
        const int nc = q.row(col, idx, coef);
        if (nc == 1) {
            eig.left.col(col) = w.col(idx[0]);
        } else {
            eig.left.col(col) = std::conj(coef[0]) * w.col(idx[0]) + std::conj(coef[1]) * w.col(idx[1]);
        }
    }
    v.resize(0, 0);
    w.resize(0, 0);

    // sort by ascending decay rate, then ascending -Im
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
        const double gi = -lambda(i).real(), gj = -lambda(j).real();
        if (gi != gj) return gi < gj;
        return -lambda(i).imag() < -lambda(j).imag();
    });
    eig.eigenvalues.resize(n);
    Eigen::MatrixXcd tmp(n, n);
    for (int k = 0; k < n; ++k) {
        eig.eigenvalues(k) = lambda(perm[k]);
        tmp.col(k) = eig.right.col(perm[k]);
    }
    eig.right.swap(tmp);
    for (int k = 0; k < n; ++k) tmp.row(k) = eig.left.row(perm[k]);
    eig.left.swap(tmp);
    tmp.resize(0, 0);

    eig.condition_number = eig.right.norm() * eig.left.norm();
    if (eig.condition_number > 1e8) {
        std::ostringstream msg;
        msg << "Liouvillian close to defective (eigenvector condition "
            << eig.condition_number << ") for N=" << sys.params.n_emitters
            << ", rabi=" << sys.params.rabi_splitting_ev
            << " eV, 1/kappa=" << sys.params.kappa_lifetime_fs
            << " fs, 1/gamma=" << sys.params.gamma_lifetime_fs << " fs";
        throw DefectiveLiouvillian(msg.str());
    }

    // Label by the dominant |alpha beta>> participation |w_i v_i| of the
    // biorthogonal pair. The right vector alone is ambiguous for decaying
    // population modes (the cascade target enters with comparable weight),
    // while the left vector vanishes on everything downstream, so the
    // product concentrates on the mode's own component. Ties go to the
    // lowest (alpha, beta) index.
    eig.labels.resize(n);
    for (int k = 0; k < n; ++k) {
        int best = 0;
        double best_mag = -1.0, total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(eig.left(k, i)) * std::abs(eig.right(i, k));
            total += m;
            if (m > best_mag * (1.0 + 1e-12)) {
                best_mag = m;
                best = i;
            }
        }
        eig.labels[k] = EigLabel{sys.labels[best / d], sys.labels[best % d],
                                 total > 0 ? best_mag / total : 0.0};
    }
    return eig;
}

int LiouvilleEigendecomposition::index_of_pair(const std::string& ket,
                                               const std::string& bra) const {
    for (size_t k = 0; k < labels.size(); ++k)
        if (labels[k].ket == ket && labels[k].bra == bra) return static_cast<int>(k);
    throw InvalidParams("no Liouvillian eigenvalue labeled (" + ket + "," + bra + ")");
}

Eigen::VectorXcd LiouvilleEigendecomposition::propagate(const Eigen::VectorXcd& rho_vec,
                                                        double t_fs) const {
    Eigen::VectorXcd c = left * rho_vec;
    for (int i = 0; i < c.size(); ++i) c(i) *= std::exp(eigenvalues(i) * (t_fs / hbar_ev_fs));
    return right * c;
}

std::vector<int> BlockReport::block_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(blocks.size());
    for (auto& b : blocks) sizes.push_back(static_cast<int>(b.size()));
    return sizes;
}

BlockReport block_structure(const LiouvillianParts& parts) {
    const int n = static_cast<int>(parts.total.entries.rows());
    const double scale = parts.total.entries.cwiseAbs().maxCoeff();
    const double tol = 1e-14 * scale;

    BlockReport report;
    report.entry_class = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int cls = 0;
            if (std::abs(parts.coherent.entries(i, j)) > tol) cls |= 1;
            if (std::abs(parts.loss.entries(i, j)) > tol) cls |= 2;
            if (std::abs(parts.dephasing.entries(i, j)) > tol) cls |= 4;
            report.entry_class(i, j) = cls;
        }

    // union-find over the symmetrized nonzero pattern
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (report.entry_class(i, j) != 0) {
                const int a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    for (auto& [root, members] : groups) report.blocks.push_back(members);
    std::stable_sort(report.blocks.begin(), report.blocks.end(),
                     [](const auto& a, const auto& b) {
                         if (a.size() != b.size()) return a.size() > b.size();
                         return a.front() < b.front();
                     });
    return report;
}

std::string BlockReport::map_string(const HamiltonianSystem& sys) const {
    std::ostringstream out;
    const int d = sys.dim;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        out << "block " << bi + 1 << " (size " << blocks[bi].size() << "):";
        for (int v : blocks[bi]) out << " " << sys.labels[v / d] << "." << sys.labels[v % d];
        out << "\n";
        for (int r : blocks[bi]) {
            for (int c : blocks[bi]) {
                const int cls = entry_class(r, c);
                char ch = '.';
                if ((cls & 6) == 6) ch = 'B';       // photon loss and dephasing
                else if (cls & 2) ch = 'P';         // photon loss
                else if (cls & 4) ch = 'D';         // dephasing
                else if (cls & 1) ch = 'H';         // coherent only
                out << ch;
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace p2d
