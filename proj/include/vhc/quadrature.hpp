#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace vhc {

// Deterministic pairwise reduction; keeps quadrature results reproducible
// independently of evaluation batching.
double pairwise_sum(const std::vector<double>& terms);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;     // accumulated error estimate
    int subdivisions = 0;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b] with absolute tolerance.
QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 24);

// Convenience: value only.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Fixed-panel composite Gauss-Kronrod 15 for complex integrands; used where
// the panel count is known from the integrand's exponential scale.
std::complex<double> integrate_fixed_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels);

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

}  // namespace vhc
