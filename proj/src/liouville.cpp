#include "vhc/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vhc/quadrature.hpp"

namespace vhc {

BubbleParams::BubbleParams(double eps_, double mu_) : eps(eps_), mu(mu_) {
    if (!(eps > 0.0) || !(mu > 0.0))
        throw Error("BubbleParams: eps and mu must be positive");
    if (!(eps * mu < 1.0)) throw Error("BubbleParams: eps*mu must be < 1");
}

CorrectionConstants::CorrectionConstants(double R_, double h_) : R(R_), h(h_) {
    if (!(R > 0.0) || !(h > 0.0))
        throw Error("CorrectionConstants: R, h must be positive");
}

double CorrectionConstants::c1() const {
    const double q2 = h * h + R * R;
    return 0.5 * R * h / (q2 * std::sqrt(q2));
}

double CorrectionConstants::c2() const {
    const double q2 = h * h + R * R;
    return R * R / (8.0 * q2 * q2) * (2.0 * h * h / q2 + 1.0);
}

double CorrectionConstants::h1_coefficient() const {
    const double q2 = h * h + R * R;
    return 4.0 * R * R * R / (h * q2 * std::sqrt(q2));
}

double CorrectionConstants::dipole_coefficient() const {
    const double q2 = h * h + R * R;
    return 4.0 * R * (3.0 * h * h + R * R) / (h * q2 * std::sqrt(q2));
}

ScalarJet gamma_bubble(const Vec2& z, const BubbleParams& p) {
    const double em2 = p.epsmu() * p.epsmu();
    const double s = em2 + z.norm2();
    ScalarJet j;
    j.value = std::log(8.0) - 2.0 * std::log(s);
    j.grad = z * (-4.0 / s);
    const double s2 = s * s;
    j.hess = Mat2{-4.0 / s + 8.0 * z.x * z.x / s2, 8.0 * z.x * z.y / s2,
                  8.0 * z.x * z.y / s2, -4.0 / s + 8.0 * z.y * z.y / s2};
    return j;
}

double bubble_U(const Vec2& y) {
    const double s = 1.0 + y.norm2();
    return 8.0 / (s * s);
}

double kernel_Z(int j, const Vec2& y) {
    const double s = 1.0 + y.norm2();
    switch (j) {
        case 0:
            return 2.0 - 4.0 * y.norm2() / s;
        case 1:
            return -4.0 * y.x / s;
        case 2:
            return -4.0 * y.y / s;
        default:
            throw std::invalid_argument("kernel_Z: index must be 0, 1 or 2");
    }
}

namespace {

// Integrand of the inner integral G(s) = int_0^s eta^7/(em^2+eta^2)^2 d eta.
double g_integrand(double eta, double em2) {
    const double d = em2 + eta * eta;
    const double e3 = eta * eta * eta;
    return e3 * e3 * eta / (d * d);
}

std::vector<double> log_nodes(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[i] = std::exp(llo + (lhi - llo) * i / double(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace

double H1Profile::g_series(double x) const {
    // G(x) ~ x^8/(8 em^4) (1 - 8 x^2/(5 em^2)) for x << em.
    const double em2 = em_ * em_;
    const double x2 = x * x;
    const double x8 = x2 * x2 * x2 * x2;
    return x8 / (8.0 * em2 * em2) * (1.0 - 1.6 * x2 / em2);
}

double H1Profile::g_interp(double x) const {
    if (x <= s_.front()) return g_series(x);
    if (x >= s_.back()) {
        // beyond the cache G grows ~ x^4/4; extend analytically
        const double em2 = em_ * em_;
        auto tail = [em2](double t) {
            // int eta^7/(em2+eta^2)^2, antiderivative via u = eta^2
            const double u = t * t;
            return 0.5 * (u * u / 2.0 - 2.0 * em2 * u +
                          em2 * em2 * em2 / (em2 + u) +
                          3.0 * em2 * em2 * std::log(em2 + u));
        };
        return g_.back() + tail(x) - tail(s_.back());
    }
    auto it = std::upper_bound(s_.begin(), s_.end(), x);
    int i = int(it - s_.begin()) - 1;
    i = std::max(0, std::min(i, int(s_.size()) - 2));
    const double x0 = s_[i], x1 = s_[i + 1];
    const double t = (x - x0) / (x1 - x0);
    const double dx = x1 - x0;
    const double d0 = g_integrand(x0, em_ * em_), d1 = g_integrand(x1, em_ * em_);
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * g_[i] + h10 * dx * d0 + h01 * g_[i + 1] + h11 * dx * d1;
}

H1Profile::H1Profile(const BubbleParams& p) : em_(p.epsmu()) {
    const double em2 = em_ * em_;
    const double s_lo = std::min(1e-9, 1e-3 * em_);
    const double s_hi = 1e3;
    // grid passes exactly through s = 1, where the outer integral vanishes
    std::vector<double> below = log_nodes(s_lo, 1.0, 3072);
    std::vector<double> above = log_nodes(1.0, s_hi, 1024);
    s_ = below;
    s_.insert(s_.end(), above.begin() + 1, above.end());
    const int n = int(s_.size());

    g_.assign(n, 0.0);
    g_[0] = g_series(s_[0]);
    for (int i = 1; i < n; ++i) {
        g_[i] = g_[i - 1] +
                integrate([&](double t) { return g_integrand(t, em2); }, s_[i - 1],
                          s_[i], 1e-13);
    }

    j_.assign(n, 0.0);
    const int i_one = int(below.size()) - 1;  // index of s = 1
    j_[i_one] = 0.0;
    for (int i = i_one - 1; i >= 0; --i) {
        j_[i] = j_[i + 1] +
                integrate(
                    [&](double x) {
                        const double x7 = std::pow(x, 7);
                        return g_interp(x) / x7;
                    },
                    s_[i], s_[i + 1], 1e-12);
    }
    for (int i = i_one + 1; i < n; ++i) {
        j_[i] = j_[i - 1] -
                integrate(
                    [&](double x) {
                        const double x7 = std::pow(x, 7);
                        return g_interp(x) / x7;
                    },
                    s_[i - 1], s_[i], 1e-12);
    }
    j_small_ = j_[0];

    v_.assign(n, 0.0);
    d_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double s = s_[i];
        v_[i] = s * s * s * j_[i];
        d_[i] = 3.0 * s * s * j_[i] - g_[i] / (s * s * s * s);
    }
}

std::pair<double, double> H1Profile::eval(double s) const {
    if (s <= 0.0) return {0.0, 0.0};
    if (s < s_.front()) {
        // J(s) = J(s_lo) + (s_lo^2 - s^2)/(16 em^4) in the series region
        const double em2 = em_ * em_;
        const double j0 = j_small_ +
                          (s_.front() * s_.front() - s * s) / (16.0 * em2 * em2);
        return {s * s * s * j0, 3.0 * s * s * j0 - g_series(s) / std::pow(s, 4)};
    }
    if (s >= s_.back()) {
        const double j_end = j_.back();  // frozen; only reached far outside use
        return {s * s * s * j_end,
                3.0 * s * s * j_end - g_interp(s) / (s * s * s * s)};
    }
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    int i = int(it - s_.begin()) - 1;
    i = std::max(0, std::min(i, int(s_.size()) - 2));
    const double x0 = s_[i], x1 = s_[i + 1];
    const double dx = x1 - x0;
    const double t = (s - x0) / dx;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    const double v = h00 * v_[i] + h10 * dx * d_[i] + h01 * v_[i + 1] +
                     h11 * dx * d_[i + 1];
    // derivative of the Hermite cubic
    const double g00 = 6.0 * t * (t - 1.0) / dx;
    const double g10 = (3.0 * t - 1.0) * (t - 1.0);
    const double g01 = -g00;
    const double g11 = t * (3.0 * t - 2.0);
    const double d = g00 * v_[i] + g10 * d_[i] + g01 * v_[i + 1] + g11 * d_[i + 1];
    return {v, d};
}

double H1Profile::second_derivative(double s) const {
    const auto [v, d] = eval(s);
    const double em2 = em_ * em_;
    const double den = em2 + s * s;
    return -d / s + 9.0 * v / (s * s) - s * s * s / (den * den);
}

Bubble::Bubble(const BubbleParams& p, const CorrectionConstants& cc)
    : params_(p), cc_(cc), h1_(std::make_shared<H1Profile>(p)) {}

namespace {

// Jet of f(r) * cos(3 theta) from the radial profile (f, f', f'').
ScalarJet angular3_jet(const Vec2& z, double f, double fp, double fpp) {
    const double r = z.norm();
    const double c = z.x / r, s = z.y / r;
    const double c3 = std::cos(3.0 * std::atan2(z.y, z.x));
    const double s3 = std::sin(3.0 * std::atan2(z.y, z.x));
    ScalarJet j;
    j.value = f * c3;
    const Vec2 er{c, s}, et{-s, c};
    j.grad = er * (fp * c3) + et * (-3.0 * f * s3 / r);
    const double hrr = fpp * c3;
    const double hrt = -3.0 * s3 * (fp / r - f / (r * r));
    const double htt = fp * c3 / r - 9.0 * f * c3 / (r * r);
    j.hess = Mat2{hrr * c * c + htt * s * s - 2.0 * hrt * c * s,
                  (hrr - htt) * c * s + hrt * (c * c - s * s),
                  (hrr - htt) * c * s + hrt * (c * c - s * s),
                  hrr * s * s + htt * c * c + 2.0 * hrt * c * s};
    return j;
}

// Jet of Re(z^3).
ScalarJet re_z3_jet(const Vec2& z) {
    ScalarJet j;
    j.value = z.x * z.x * z.x - 3.0 * z.x * z.y * z.y;
    j.grad = {3.0 * (z.x * z.x - z.y * z.y), -6.0 * z.x * z.y};
    j.hess = Mat2{6.0 * z.x, -6.0 * z.y, -6.0 * z.y, -6.0 * z.x};
    return j;
}

}  // namespace

ScalarJet Bubble::H1_corrector(const Vec2& z) const {
    const double r = z.norm();
    const double r_series = std::max(1e-12, 1e-4 * params_.epsmu());
    if (r < r_series) {
        // h1 = J0 r^3 + ..., so H1 = J0 Re(z^3) near the origin
        const double s3 = r_series * r_series * r_series;
        const double j0 = h1_->eval(r_series).first / s3;
        return re_z3_jet(z) * j0;
    }
    const auto [f, fp] = h1_->eval(r);
    const double fpp = h1_->second_derivative(r);
    return angular3_jet(z, f, fp, fpp);
}

ScalarJet Bubble::psi(const Vec2& z) const {
    const ScalarJet g = gamma(z);
    const double c1 = cc_.c1(), c2 = cc_.c2();
    ScalarJet poly;
    poly.value = 1.0 + c1 * z.x + c2 * z.norm2();
    poly.grad = {c1 + 2.0 * c2 * z.x, 2.0 * c2 * z.y};
    poly.hess = Mat2{2.0 * c2, 0.0, 0.0, 2.0 * c2};
    return g * poly + cc_.h1_coefficient() * H1_corrector(z);
}

ScalarJet Bubble::psi_filament(const Vec2& x, const FramedChart& chart) const {
    const Vec2 z = chart.Ainv * (x - chart.P);
    return pullback_affine(psi(z), chart.Ainv);
}

double Bubble::delta_gamma(const Vec2& z) const {
    const double em2 = params_.epsmu() * params_.epsmu();
    const double s = em2 + z.norm2();
    return -8.0 * em2 / (s * s);
}

double Bubble::dipole_term(const Vec2& z) const {
    const double em2 = params_.epsmu() * params_.epsmu();
    const double s = em2 + z.norm2();
    return cc_.dipole_coefficient() * em2 * z.x / (s * s);
}

std::pair<double, double> h1_profile(double s, const BubbleParams& p) {
    H1Profile prof(p);
    return prof.eval(s);
}

ScalarJet H1_corrector(const Vec2& z, const BubbleParams& p) {
    Bubble b(p, CorrectionConstants(1.0, 1.0));
    return b.H1_corrector(z);
}

ScalarJet psi_bubble(const Vec2& z, const BubbleParams& p,
                     const CorrectionConstants& cc) {
    Bubble b(p, cc);
    return b.psi(z);
}

ScalarJet psi_filament(const Vec2& x, const FramedChart& chart,
                       const BubbleParams& p, const CorrectionConstants& cc) {
    Bubble b(p, cc);
    return b.psi_filament(x, chart);
}

}  // namespace vhc
