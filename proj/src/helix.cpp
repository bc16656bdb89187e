#include "vhc/helix.hpp"

#include <cmath>

namespace vhc {

HelixSpec::HelixSpec(double a_, double b_, double h_, double kappa_)
    : a(a_), b(b_), h(h_), kappa(kappa_), radius_(std::sqrt(a_ * a_ + b_ * b_)) {
    if (!(radius_ > 0.0))
        throw DegeneratePoint("HelixSpec: base point must have positive radius");
    if (!(h_ > 0.0)) throw Error("HelixSpec: pitch h must be positive");
}

Vec3 helix_point(const HelixSpec& spec, double s, double tau) {
    const double R = spec.radius();
    const double q = std::sqrt(spec.h * spec.h + R * R);
    const double phi = (s - spec.sigma() * tau) / q;
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    return {spec.a * c - spec.b * sn, spec.a * sn + spec.b * c,
            (spec.h * s + spec.beta() * tau) / q};
}

FrenetSample frenet(const HelixSpec& spec, double s, double tau) {
    const double R = spec.radius();
    const double h = spec.h;
    const double q = std::sqrt(h * h + R * R);
    const double phi = (s - spec.sigma() * tau) / q;
    const double c = std::cos(phi);
    const double sn = std::sin(phi);

    // gamma'(s), gamma''(s), gamma'''(s) in closed form.
    const Vec3 d1{(-spec.a * sn - spec.b * c) / q, (spec.a * c - spec.b * sn) / q,
                  h / q};
    const Vec3 d2{(-spec.a * c + spec.b * sn) / (q * q),
                  (-spec.a * sn - spec.b * c) / (q * q), 0.0};

    FrenetSample out;
    out.point = helix_point(spec, s, tau);
    out.tangent = d1;  // |d1| = 1 by arclength parametrization
    const double curv = d2.norm();
    out.curvature = curv;
    out.normal = d2 / curv;
    out.binormal = d1.cross(out.normal);
    // db/ds = -torsion * normal; for the helix the closed form is h/(R^2+h^2).
    const Vec3 db{h * (spec.a * c - spec.b * sn) / (q * q * R),
                  h * (spec.a * sn + spec.b * c) / (q * q * R), 0.0};
    out.torsion = -db.dot(out.normal);
    return out;
}

double binormal_residual(const HelixSpec& spec, double s, double tau, double dt) {
    const Vec3 plus = helix_point(spec, s, tau + dt);
    const Vec3 minus = helix_point(spec, s, tau - dt);
    const Vec3 fd = (plus - minus) / (2.0 * dt);
    const FrenetSample fr = frenet(spec, s, tau);
    const Vec3 law = 2.0 * spec.kappa * fr.curvature * fr.binormal;
    return (fd - law).max_abs();
}

}  // namespace vhc
