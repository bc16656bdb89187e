#pragma once

#include <vector>

#include "vhc/assembly.hpp"

namespace vhc {

// S[Psi_0](x) = L(Psi_0) + F(Psi_0 - (alpha/2)|log eps| |x|^2).
double error_S(const Vec2& x, const StreamAssembly& a);

// eps^2 mu_i^2 S at the inner point x = P_i + A_i (eps mu_i y).
double scaled_inner_error(int i, const Vec2& y, const StreamAssembly& a);

struct ResidualSample {
    Vec2 x{};
    RegionTag region{};
    double raw = 0.0;       // S[Psi_0](x), scaled by eps^2 mu_i^2 in inner charts
    double weighted = 0.0;  // raw divided by the region envelope
    double y_norm = 0.0;    // |y| for inner samples
};

struct RegionScan {
    std::vector<ResidualSample> samples;
    double sup_weighted = 0.0;
    double sup_spatial = 0.0;  // |raw| * spatial envelope only (no eps factors)
    ResidualSample argmax{};
};

// Inner scan of filament i: log-radial times angular sampling of
// eps^2 mu_i^2 S against the (1+|y|^{2+a}) envelope, a = 1/2.
RegionScan scan_inner(const StreamAssembly& a, int i, int n_r = 48,
                      int n_theta = 32, double a_exponent = 0.5);

// Outer scan: shells just outside each inner region plus a coarse annulus,
// against eps/(1+|x|^3), nu = 3.
RegionScan scan_outer(const StreamAssembly& a, int n_shell = 24,
                      int n_annulus = 24, double nu = 3.0);

struct ACoefficients {
    double A1 = 0.0;
    double A2 = 0.0;
};

// The explicit first-moment coefficients of the inner expansion.
ACoefficients coefficients_A(int i, const StreamAssembly& a);

// Reduced-problem main terms (used as independent predictions for the
// kernel projections).
double reduced_F1(int i, const StreamAssembly& a);
double reduced_F2(int i, const StreamAssembly& a);

struct KernelProjections {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double radius = 0.0;  // integration ball radius in y
};

// Projections of eps^2 mu_i^2 S[Psi_0] on Z_0, Z_1, Z_2 over B_R in the
// bubble variable y, R = 2 delta1/(eps mu_i |log eps|) unless overridden.
KernelProjections kernel_projections(int i, const StreamAssembly& a,
                                     double R_in = 0.0, int n_r = 512,
                                     int n_theta = 256);

struct RateFit {
    std::vector<double> eps;
    std::vector<double> sup_spatial;    // spatial-envelope-weighted sups
    std::vector<double> constants;      // fully normalized envelope constants
    double slope = 0.0;
    double constant_ratio = 0.0;        // max/min of constants
};

struct RateStudy {
    RateFit inner;
    RateFit outer;
};

RateStudy rate_study(const std::vector<const StreamAssembly*>& ladder);

// Helical 3D vorticity reconstruction.
Vec3 reconstruct_vorticity(const Vec3& x, const StreamAssembly& a);

struct VorticityGrid3D {
    Vec3 origin{};
    Vec3 spacing{};
    int nx = 0, ny = 0, nz = 0;
    std::vector<Vec3> samples;  // x3 slowest, then x2, then x1

    int index(int i, int j, int k) const { return (k * ny + j) * nx + i; }
    Vec3 point(int i, int j, int k) const {
        return {origin.x + spacing.x * i, origin.y + spacing.y * j,
                origin.z + spacing.z * k};
    }
};

VorticityGrid3D sample_vorticity_grid(const StreamAssembly& a, const Vec3& lo,
                                      const Vec3& hi, int n);

// max |div omega| over interior nodes (central differences) and max |omega|.
std::pair<double, double> divergence_check(const VorticityGrid3D& g);

}  // namespace vhc
