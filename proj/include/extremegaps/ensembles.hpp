#pragma once

#include "extremegaps/linalg.hpp"
#include "extremegaps/rng.hpp"

#include <cstdint>

namespace extremegaps::ensembles {

// sorted eigenvalues of one draw, on the scale where the bulk fills (-2, 2)
struct Spectrum {
    Eigen::VectorXd values;  // strictly increasing
    std::uint64_t seed = 0;
    std::uint64_t trial_id = 0;

    int n() const { return static_cast<int>(values.size()); }
};

// sorted eigenangles of one unitary draw, in [0, 2pi)
struct EigenangleSet {
    Eigen::VectorXd angles;  // strictly increasing
    std::uint64_t seed = 0;
    std::uint64_t trial_id = 0;

    int n() const { return static_cast<int>(angles.size()); }
};

enum class GueMethod { Dense, Tridiagonal };

// Hermitian matrix whose eigenvalue density is proportional to
// exp(-n sum lambda_i^2 / 2) * Vandermonde^2: diagonal entries are real
// N(0, 1/n), off-diagonal complex with total variance 1/n.
// Streams are consumed by value: the same stream always yields the same draw.
linalg::HermitianMatrix sample_gue_dense(int n, rng::RngStream stream);

// chi-distributed tridiagonal model with the same eigenvalue law (beta = 2),
// calibrated against the dense sampler
linalg::TridiagonalMatrix sample_gue_tridiagonal_model(int n, rng::RngStream stream);

Spectrum sample_gue_spectrum(int n, rng::RngStream stream,
                             GueMethod method = GueMethod::Tridiagonal);

// Eigenangles of a Haar-distributed unitary matrix: complex Ginibre draw,
// QR orthonormalization with the R-diagonal phase correction, then eigenangle
// extraction (Cayley transform + Hermitian tridiagonal eigensolve).
EigenangleSet sample_cue_eigenangles(int n, rng::RngStream stream);

}  // namespace extremegaps::ensembles
