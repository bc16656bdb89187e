#pragma once

#include "vhc/errors.hpp"
#include "vhc/linalg.hpp"

namespace vhc {

// One rotating-translating circular helix: base point (a, b), pitch h and
// circulation kappa. The rotation and vertical translation speeds are the
// ones that make the curve a relative equilibrium of the binormal flow.
struct HelixSpec {
    double a = 1.0;
    double b = 0.0;
    double h = 1.0;
    double kappa = 1.0;

    HelixSpec(double a_, double b_, double h_, double kappa_);

    double radius() const { return radius_; }
    double sigma() const { return 2.0 * kappa * h / (radius_ * radius_ + h * h); }
    double beta() const {
        return 2.0 * kappa * radius_ * radius_ / (radius_ * radius_ + h * h);
    }
    double curvature() const { return radius_ / (radius_ * radius_ + h * h); }
    double torsion() const { return h / (radius_ * radius_ + h * h); }

  private:
    double radius_ = 1.0;
};

struct FrenetSample {
    Vec3 point{};
    Vec3 tangent{};
    Vec3 normal{};
    Vec3 binormal{};
    double curvature = 0.0;
    double torsion = 0.0;
};

// Arclength-parametrized helix position at slow time tau.
Vec3 helix_point(const HelixSpec& spec, double s, double tau);

// Frenet frame from analytic derivatives of the parametrization.
FrenetSample frenet(const HelixSpec& spec, double s, double tau);

// Max-norm discrepancy between the central finite difference of
// tau -> gamma(s, tau) and 2 kappa c b. O(dt^2) for the exact equilibrium.
double binormal_residual(const HelixSpec& spec, double s, double tau, double dt);

}  // namespace vhc
