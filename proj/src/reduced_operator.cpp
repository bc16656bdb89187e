#include "vhc/reduced_operator.hpp"

#include <cmath>

namespace vhc {

Mat2 k_matrix(const Vec2& x, double h) {
    const double h2 = h * h;
    const double den = h2 + x.norm2();
    return {(h2 + x.y * x.y) / den, -x.x * x.y / den,
            -x.x * x.y / den, (h2 + x.x * x.x) / den};
}

double apply_L(const ScalarJet& jet, const Vec2& x, double h) {
    const double h2 = h * h;
    const double r2 = x.norm2();
    const double den = h2 + r2;
    const double drift = (2.0 * h2 / den + 1.0) / den;
    return (h2 + x.y * x.y) / den * jet.hess.a11 +
           (h2 + x.x * x.x) / den * jet.hess.a22 -
           2.0 * x.x * x.y / den * jet.hess.a12 -
           x.x * drift * jet.grad.x - x.y * drift * jet.grad.y;
}

FramedChart frame_chart(const Vec2& P, double h) {
    const double R = P.norm();
    if (!(R > 0.0)) throw DegeneratePoint("frame_chart: |P| must be positive");
    FramedChart c;
    c.P = P;
    c.h = h;
    c.R = R;
    const double q = std::sqrt(h * h + R * R);
    c.A = Mat2{P.x * h / (R * q), -P.y / R, P.y * h / (R * q), P.x / R};
    c.Ainv = Mat2{P.x * q / (R * h), P.y * q / (R * h), -P.y / R, P.x / R};
    c.detA = h / q;
    return c;
}

double apply_B(const ScalarJet& jet_z, const Vec2& z, const FramedChart& chart) {
    const double h = chart.h;
    const double R = chart.R;
    const double h2 = h * h;
    const double q2 = h2 + R * R;
    const double q = std::sqrt(q2);
    // r^2(z) = R^2 + 2 R h z1/sqrt(h^2+R^2) + q2(z)
    const double r2 = R * R + 2.0 * R * h * z.x / q +
                      (h2 / q2) * z.x * z.x + z.y * z.y;
    const double den = h2 + r2;
    const double drift = 2.0 * h2 / den + 1.0;

    const double c11 = (h2 * (R * R - r2) + z.y * z.y * q2) / (den * h2);
    const double t = z.x * h / q + R;
    const double c22 = (t * t - r2) / den;
    const double c12 = -2.0 * q / (h * den) * z.y * t;
    // z1-coefficient derived from the exact frame change: the drift pulls back
    // through A^{-T} to -(z1 h^2 + R h sqrt(h^2+R^2)) / (h^2 (h^2+r^2)) * drift
    const double c1 = -(z.x * h2 + R * h * q) / (h2 * den) * drift;
    const double c2 = -z.y / den * drift;

    return c11 * jet_z.hess.a11 + c22 * jet_z.hess.a22 + c12 * jet_z.hess.a12 +
           c1 * jet_z.grad.x + c2 * jet_z.grad.y;
}

}  // namespace vhc
