#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace extremegaps::linalg {

// dense Hermitian matrix; imaginary parts of the diagonal are zero
struct HermitianMatrix {
    Eigen::MatrixXcd entries;

    int n() const { return static_cast<int>(entries.rows()); }

    // max |A - A^H| entry, as a consistency diagnostic
    double hermitian_defect() const;
};

// real symmetric tridiagonal matrix, off-diagonal entries nonnegative when
// produced by householder_tridiagonalize
struct TridiagonalMatrix {
    Eigen::VectorXd diag;  // length n
    Eigen::VectorXd off;   // length n-1

    int n() const { return static_cast<int>(diag.size()); }
    double norm_estimate() const;  // max |diag| + 2 max |off|
};

// Unitary similarity reduction to real symmetric tridiagonal form by
// Householder reflections; complex subdiagonal phases are rotated away so
// that off >= 0. Spectrum is preserved to machine-epsilon accuracy.
TridiagonalMatrix householder_tridiagonalize(const HermitianMatrix& h);

// All eigenvalues of a symmetric tridiagonal matrix, sorted ascending.
// Implicit-shift QL with Wilkinson shift, eigenvalues only.
// Throws NumericError if any eigenvalue needs more than `max_sweeps` sweeps.
Eigen::VectorXd eig_sym_tridiagonal(const TridiagonalMatrix& t, int max_sweeps = 50);

// convenience: full Hermitian eigensolve through the two stages above
Eigen::VectorXd eig_hermitian(const HermitianMatrix& h);

// Jacobi (tridiagonal) matrix whose spectral measure is sum_i w_i delta_{lambda_i};
// Lanczos with full reorthogonalization. `weights` empty means uniform.
TridiagonalMatrix tridiagonal_from_spectrum(const Eigen::VectorXd& values,
                                            const Eigen::VectorXd& weights = {});

}  // namespace extremegaps::linalg
