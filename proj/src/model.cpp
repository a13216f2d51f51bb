#include "polariton2d/model.hpp"

#include <algorithm>
#include <cmath>

namespace p2d {

double ModelParams::coupling_g_ev() const {
    const double d = detuning_ev();
    const double s2 = std::max(0.0, rabi_splitting_ev * rabi_splitting_ev - d * d);
    return std::sqrt(s2) / (2.0 * std::sqrt(static_cast<double>(n_emitters)));
}

BathSpec ModelParams::bath() const {
    BathSpec b;
    b.kind = bath_kind;
    b.gamma_ev = gamma_ev();
    b.delta_ev = bath_delta_ev;
    b.temperature_k = bath_kind == BathKind::Debye ? bath_temperature_k : 0.0;
    return b;
}

void ModelParams::validate() const {
    if (n_emitters < 1) throw InvalidParams("n_emitters must be >= 1");
    if (omega_c_ev <= 0 || omega_0_ev <= 0) throw InvalidParams("frequencies must be positive");
    if (rabi_splitting_ev <= 0) throw InvalidParams("rabi_splitting_ev must be positive");
    if (kappa_lifetime_fs <= 0 || gamma_lifetime_fs <= 0)
        throw InvalidParams("lifetimes must be positive");
    if (std::abs(detuning_ev()) > rabi_splitting_ev * (1.0 + 1e-12))
        throw InvalidParams("|detuning| must not exceed the Rabi splitting (coupling would be imaginary)");
    if (n_max < 0) throw InvalidParams("n_max must be non-negative");
    if (bath_kind == BathKind::Debye) {
        if (bath_delta_ev <= 0) throw InvalidParams("Debye cutoff must be positive");
        if (bath_temperature_k < 0) throw InvalidParams("temperature must be non-negative");
    }
}

namespace {

// Emits all sorted index subsets of {0..n-1} of size k, lexicographically.
void emit_combinations(int n, int k, std::vector<int>& cur, int next,
                       std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int i = next; i <= n - (k - static_cast<int>(cur.size())); ++i) {
        cur.push_back(i);
        emit_combinations(n, k, cur, i + 1, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    emit_combinations(n, k, cur, 0, out);
    return out;
}

} // namespace

std::vector<BasisState> build_basis(const ModelParams& params) {
    params.validate();
    std::vector<BasisState> basis;
    for (int n = 0; n <= params.n_max; ++n) {
        for (int m = n; m >= 0; --m) { // photons descending within a manifold
            const int k = n - m;
            if (k > params.n_emitters) continue;
            for (auto& set : combinations(params.n_emitters, k)) {
                basis.push_back(BasisState{m, set});
            }
        }
    }
    return basis;
}

namespace {

int find_state(const std::vector<BasisState>& basis, int photons, const std::vector<int>& excited) {
    for (size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].photons == photons && basis[i].excited == excited)
            return static_cast<int>(i);
    }
    return -1;
}

Eigen::MatrixXd bare_hamiltonian(const ModelParams& p, const std::vector<BasisState>& basis) {
    const int dim = static_cast<int>(basis.size());
    const double g = p.coupling_g_ev();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = basis[i].photons * p.omega_c_ev +
                  static_cast<double>(basis[i].excited.size()) * p.omega_0_ev;
        // a^dag sigma_i: de-excite emitter e, add one photon
        for (int e : basis[i].excited) {
            std::vector<int> rest;
            for (int x : basis[i].excited)
                if (x != e) rest.push_back(x);
            const int j = find_state(basis, basis[i].photons + 1, rest);
            if (j >= 0) {
                const double amp = g * std::sqrt(static_cast<double>(basis[i].photons + 1));
                h(j, i) += amp;
                h(i, j) += amp;
            }
        }
    }
    return h;
}

Eigen::MatrixXd bare_annihilation(const std::vector<BasisState>& basis) {
    const int dim = static_cast<int>(basis.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        if (basis[i].photons == 0) continue;
        const int j = find_state(basis, basis[i].photons - 1, basis[i].excited);
        if (j >= 0) a(j, i) = std::sqrt(static_cast<double>(basis[i].photons));
    }
    return a;
}

// Deterministic gauge for a degenerate eigenspace: project the bare basis
// vectors (in enumeration order) onto the subspace and Gram-Schmidt them.
Eigen::MatrixXd fix_degenerate_gauge(const Eigen::MatrixXd& subspace) {
    const int dim = static_cast<int>(subspace.rows());
    const int k = static_cast<int>(subspace.cols());
    const Eigen::MatrixXd proj = subspace * subspace.transpose();
    Eigen::MatrixXd out(dim, k);
    int found = 0;
    for (int b = 0; b < dim && found < k; ++b) {
        Eigen::VectorXd v = proj.col(b);
        for (int j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
        const double nrm = v.norm();
        if (nrm > 1e-8) out.col(found++) = v / nrm;
    }
    if (found != k) return subspace; // subspace not spanned by projections; keep solver gauge
    return out;
}

void fix_signs(Eigen::MatrixXd& vectors) {
    for (int c = 0; c < vectors.cols(); ++c) {
        for (int r = 0; r < vectors.rows(); ++r) {
            if (std::abs(vectors(r, c)) > 1e-10) {
                if (vectors(r, c) < 0) vectors.col(c) *= -1.0;
                break;
            }
        }
    }
}

} // namespace

HamiltonianSystem build_hamiltonian(const ModelParams& params) {
    HamiltonianSystem sys;
    sys.params = params;
    sys.basis = build_basis(params);
    sys.dim = static_cast<int>(sys.basis.size());

    const Eigen::MatrixXd h = bare_hamiltonian(params, sys.basis);

    sys.energies.resize(sys.dim);
    sys.eigenvectors = Eigen::MatrixXd::Zero(sys.dim, sys.dim);
    sys.labels.resize(sys.dim);
    sys.manifold.resize(sys.dim);
    sys.manifold_start.assign(params.n_max + 1, 0);

    // H conserves the excitation number, so diagonalize manifold by manifold.
    int offset = 0;
    for (int n = 0; n <= params.n_max; ++n) {
        int count = 0;
        for (auto& b : sys.basis)
            if (b.excitation_number() == n) ++count;
        sys.manifold_start[n] = offset;
        if (count == 0) continue;

        Eigen::MatrixXd block = h.block(offset, offset, count, count);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
        Eigen::VectorXd evals = solver.eigenvalues();
        Eigen::MatrixXd evecs = solver.eigenvectors();

        // Re-gauge degenerate clusters deterministically.
        const double tol = 1e-9 * (1.0 + evals.cwiseAbs().maxCoeff());
        int c0 = 0;
        while (c0 < count) {
            int c1 = c0 + 1;
            while (c1 < count && evals(c1) - evals(c0) < tol) ++c1;
            if (c1 - c0 > 1)
                evecs.middleCols(c0, c1 - c0) = fix_degenerate_gauge(evecs.middleCols(c0, c1 - c0));
            c0 = c1;
        }
        fix_signs(evecs);

        sys.energies.segment(offset, count) = evals;
        sys.eigenvectors.block(offset, offset, count, count) = evecs;
        for (int i = 0; i < count; ++i) sys.manifold[offset + i] = n;
        offset += count;
    }

    // Labels. Bright states carry photonic weight; the photon bare state is
    // first within each manifold by the descending-photon enumeration.
    sys.labeling_ambiguous = std::abs(params.detuning_ev()) > params.rabi_splitting_ev / 2.0;
    for (int n = 0; n <= params.n_max; ++n) {
        const int start = sys.manifold_start[n];
        const int count = (n + 1 <= params.n_max) ? sys.manifold_start[n + 1] - start
                                                  : sys.dim - start;
        if (count == 0) continue;
        if (n == 0) {
            sys.labels[start] = "G";
        } else if (n == 1) {
            // Exactly the two polaritons carry photonic weight; everything
            // else in the manifold is dark.
            std::vector<int> bright;
            for (int i = 0; i < count; ++i)
                if (std::abs(sys.eigenvectors(start, start + i)) > 1e-8) bright.push_back(i);
            int dark = 0;
            for (int i = 0; i < count; ++i)
                sys.labels[start + i] = "D" + std::to_string(++dark);
            if (bright.size() >= 2) {
                sys.labels[start + bright.front()] = "L";
                sys.labels[start + bright.back()] = "U";
            } else if (bright.size() == 1) {
                // decoupled photon (g = 0): call it by its energy position
                const double mean = sys.energies.segment(start, count).mean();
                sys.labels[start + bright.front()] =
                    sys.energies(start + bright.front()) <= mean ? "L" : "U";
            }
            // renumber the dark states in energy order
            dark = 0;
            for (int i = 0; i < count; ++i)
                if (sys.labels[start + i][0] == 'D')
                    sys.labels[start + i] = "D" + std::to_string(++dark);
        } else if (n == 2) {
            // lowest/highest are the polaritons; the (N-1, N(N-3)/2+1, N-1)
            // interior groups sit below / at / above twice the emitter energy.
            const int n_em = params.n_emitters;
            int a = 0, b = 0, c = 0;
            for (int i = 0; i < count; ++i) {
                if (i == 0) {
                    sys.labels[start + i] = "L2";
                } else if (i == count - 1) {
                    sys.labels[start + i] = "U2";
                } else if (i <= n_em - 1) {
                    sys.labels[start + i] = "A2_" + std::to_string(++a);
                } else if (i >= count - n_em) {
                    sys.labels[start + i] = "B2_" + std::to_string(++b);
                } else {
                    sys.labels[start + i] = "C2_" + std::to_string(++c);
                }
            }
        } else {
            for (int i = 0; i < count; ++i)
                sys.labels[start + i] = "M" + std::to_string(n) + "_" + std::to_string(i);
        }
    }

    const Eigen::MatrixXd a_bare = bare_annihilation(sys.basis);
    sys.mu_minus = sys.eigenvectors.transpose() * a_bare * sys.eigenvectors;
    sys.mu_plus = sys.mu_minus.transpose();
    return sys;
}

int HamiltonianSystem::index_of(const std::string& label) const {
    for (int i = 0; i < dim; ++i)
        if (labels[i] == label) return i;
    throw InvalidParams("no eigenstate labeled '" + label + "'");
}

double HamiltonianSystem::transition_from_ground_ev(const std::string& label) const {
    return energies[index_of(label)] - energies[index_of("G")];
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> dipole_operators(const HamiltonianSystem& sys) {
    return {sys.mu_plus, sys.mu_minus};
}

} // namespace p2d
