#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace extremegaps::kernels {

// semicircle density, support (-2, 2)
double semicircle_density(double x);

// orthonormal Hermite function psi_k: weight exp(-x^2/2), int psi_j psi_k = delta_jk.
// Evaluated by an exponent-tracked three-term recurrence; stable for k up to
// 1e4 on the bulk scale |x| <~ 2 sqrt(k), underflows to 0 in the far tail.
double psi(int k, double x);

// derivative psi_k' = -(x/2) psi_k + sqrt(k) psi_{k-1} (k = 0 drops the last term)
double psi_prime(int k, double x);

// psi_{n-1} and psi_n at one point, sharing a single recurrence pass
struct HermitePair {
    double lower;  // psi_{n-1}
    double upper;  // psi_n
};
HermitePair psi_pair(int n, double x);

enum class KernelKind { Sine, Cue, Gue };

// evaluator for one of the determinantal kernels; immutable, cheap to copy
struct KernelHandle {
    KernelKind kind = KernelKind::Sine;
    int n = 0;  // ensemble size; unused for the sine kernel

    static KernelHandle sine() { return {KernelKind::Sine, 0}; }
    static KernelHandle cue(int n);
    static KernelHandle gue(int n);

    // one-point intensity rho_1(x)
    double density(double x) const;
};

double kernel_eval(const KernelHandle& h, double x, double y);

// Gram matrix K(p_i, p_j); for the GUE kernel the Hermite recurrences are run
// once per point, not once per pair
Eigen::MatrixXd kernel_matrix(const KernelHandle& h, const std::vector<double>& points);

// k-point correlation determinant. Returns 0 when k exceeds the rank of a
// finite-n kernel. Tiny negative round-off (within 1e-10 of the diagonal
// scale) is clamped to zero and counted; larger negativity throws.
double correlation_det(const KernelHandle& h, const std::vector<double>& points);

// number of clamped round-off negatives since process start
std::uint64_t correlation_clamp_count();

struct Rho2Comparison {
    double exact;         // rho_2(x, x+u) from the kernel determinant
    double leading_term;  // n^4 (4-x^2)^2 u^2 / (48 pi^2)
};

// near-diagonal two-point function against its quadratic approximation
Rho2Comparison rho2_near_diagonal_gue(int n, double x, double u, double epsilon0 = 0.05);

}  // namespace extremegaps::kernels
