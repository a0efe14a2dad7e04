#pragma once

#include <vector>
#include <cstddef>

namespace extremegaps::sf {

// regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a)
double gamma_p(double a, double x);

// regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)
double gamma_q(double a, double x);

// survival function of the chi-square distribution with `dof` degrees of freedom
double chi_square_pvalue(double statistic, int dof);

struct Quadrature {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum = 2
};

// Gauss-Legendre rule of order m (nodes/weights computed by Newton iteration)
const Quadrature& gauss_legendre(int m);

// map a rule on [-1,1] to [a,b]
void map_to_interval(const Quadrature& q, double a, double b,
                     std::vector<double>& x, std::vector<double>& w);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace extremegaps::sf
