#pragma once

#include <complex>

#include <Eigen/Dense>

namespace p2d {

using Complex = std::complex<double>;

/// Dense generator acting on vectorized operators. The vectorization pairs
/// |alpha><beta| with the flat index alpha*dim_h + beta, in the same
/// deterministic ordering as the Hamiltonian eigenbasis. Entries are in
/// energy units (eV); the propagator over t fs is exp(entries * t / hbar).
struct Superoperator {
    int dim_h = 0;
    Eigen::MatrixXcd entries;

    static int vec_index(int alpha, int beta, int dim_h) { return alpha * dim_h + beta; }
    int vec_index(int alpha, int beta) const { return alpha * dim_h + beta; }

    static Superoperator zero(int dim_h) {
        return {dim_h, Eigen::MatrixXcd::Zero(dim_h * dim_h, dim_h * dim_h)};
    }
    Superoperator& operator+=(const Superoperator& other) {
        entries += other.entries;
        return *this;
    }
};

/// Flattens rho into the |alpha*dim+beta> ordering (row-major).
inline Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    const int d = static_cast<int>(rho.rows());
    Eigen::VectorXcd v(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) v(a * d + b) = rho(a, b);
    return v;
}

inline Eigen::MatrixXcd devectorize(const Eigen::VectorXcd& v, int dim_h) {
    Eigen::MatrixXcd rho(dim_h, dim_h);
    for (int a = 0; a < dim_h; ++a)
        for (int b = 0; b < dim_h; ++b) rho(a, b) = v(a * dim_h + b);
    return rho;
}

/// Accumulates coeff * (A rho B) into the generator, i.e. kron(A, B^T) in
/// this vectorization.
template <typename MatA, typename MatB>
void add_sandwich(Eigen::MatrixXcd& target, Complex coeff, const MatA& a, const MatB& b) {
    const int d = static_cast<int>(a.rows());
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Complex aik = coeff * Complex(a(i, k));
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    const Complex bjl(b(l, j)); // (B^T)(j,l)
                    if (bjl != Complex(0.0)) target(i * d + j, k * d + l) += aik * bjl;
                }
        }
}

/// coeff * (A rho): kron(A, I).
template <typename MatA>
void add_left(Eigen::MatrixXcd& target, Complex coeff, const MatA& a) {
    const int d = static_cast<int>(a.rows());
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Complex aik = coeff * Complex(a(i, k));
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < d; ++j) target(i * d + j, k * d + j) += aik;
        }
}

/// coeff * (rho B): kron(I, B^T).
template <typename MatB>
void add_right(Eigen::MatrixXcd& target, Complex coeff, const MatB& b) {
    const int d = static_cast<int>(b.rows());
    for (int l = 0; l < d; ++l)
        for (int j = 0; j < d; ++j) {
            const Complex blj = coeff * Complex(b(l, j));
            if (blj == Complex(0.0)) continue;
            for (int i = 0; i < d; ++i) target(i * d + j, i * d + l) += blj;
        }
}

} // namespace p2d
