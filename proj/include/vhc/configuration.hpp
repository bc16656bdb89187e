#pragma once

#include <complex>
#include <vector>

#include "vhc/errors.hpp"

namespace vhc {

using Complex = std::complex<double>;

struct ClusterCharges {
    std::vector<double> kappas;
    double h = 1.0;
    double r0 = 1.0;

    int count() const { return int(kappas.size()); }
    double kappa_sum() const;
    double kappa_sq_sum() const;
};

// alpha = (2/(h^2+r0^2)) * (sum kappa_i^2)/(sum kappa_i).
// Formula-only evaluation: r0 = 0 is allowed here, solvers reject it.
double alpha_constant(const ClusterCharges& charges);

// Right-hand side U_i of the complex balancing system.
Complex balance_rhs(const ClusterCharges& charges, int i);

struct ClusterConfiguration {
    std::vector<Complex> points;  // scaled complex cluster points
    double alpha = 0.0;
    Complex gauge{};              // centroid sum (pinned to 0 by the solver)
    double d = 0.0;               // min pairwise distance

    void refresh_derived();       // recompute gauge and d from points
};

struct BalanceReport {
    double residual = 0.0;            // max_i |F_i - U_i|
    double gauge_norm = 0.0;          // |sum P_i|
    double cokernel_check = 0.0;      // |sum kappa_i (F_i - U_i)|
    int newton_iterations = 0;
    std::vector<Complex> jacobian;    // row-major N x N
    std::vector<double> singular_values;
    int kernel_dimension = 0;         // complex kernel of dF
};

// F_i(P) - U_i with F_i = sum_{j != i} kappa_j/(P_i - P_j).
std::vector<Complex> balance_residual(const ClusterConfiguration& config,
                                      const ClusterCharges& charges);

// Analytic derivative of F: diagonal -sum_{j != i} kappa_j T_ij, off-diagonal
// kappa_j T_ij, with T_ij = 1/(P_i - P_j)^2. Row-major.
std::vector<Complex> jacobian(const ClusterConfiguration& config,
                              const ClusterCharges& charges);

struct NewtonOptions {
    int max_iterations = 100;
    int max_halvings = 30;
    double tolerance = 1e-12;
    double collision_guard = 1e-8;
};

// Damped Newton on the gauge-augmented system in the conjugation-symmetric
// subspace. The guess must be a conjugation-symmetric point set.
std::pair<ClusterConfiguration, BalanceReport> solve_configuration(
    const ClusterCharges& charges, const std::vector<Complex>& guess,
    const NewtonOptions& opts = {});

struct NondegeneracyReport {
    double sigma_min_symmetric = 0.0;  // SVD on the symmetric subspace mod e0
    std::vector<double> singular_values_full;
    int kernel_dimension = 0;
    double threshold = 1e-8;
    bool passed = false;
};

NondegeneracyReport nondegeneracy_certificate(const ClusterConfiguration& config,
                                              const ClusterCharges& charges,
                                              double threshold = 1e-8,
                                              bool require = true);

// The explicit (m, n) family: m unit charges and n negative unit charges,
// admissible pairs {(2,1),(3,2),(4,3),(5,4),(6,5)}.
bool sb_family_supported(int m, int n);
std::pair<ClusterConfiguration, BalanceReport> sb_family(int m, int n, double h,
                                                         double r0);
ClusterCharges sb_charges(int m, int n, double h, double r0);

}  // namespace vhc
