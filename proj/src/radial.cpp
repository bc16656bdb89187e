#include "vhc/radial.hpp"

#include <algorithm>
#include <cmath>

namespace vhc {

RadialGrid RadialGrid::log_spaced(double r_min, double r_max, int n) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n < 8)
        throw Error("RadialGrid: need 0 < r_min < r_max and n >= 8");
    RadialGrid g;
    g.nodes.resize(n);
    const double lo = std::log(r_min), hi = std::log(r_max);
    for (int i = 0; i < n; ++i)
        g.nodes[i] = std::exp(lo + (hi - lo) * i / double(n - 1));
    g.nodes.front() = r_min;
    g.nodes.back() = r_max;
    return g;
}

RadialGrid RadialGrid::log_spaced_through(double r_min, double r_max, int n,
                                          double anchor) {
    RadialGrid g = log_spaced(r_min, r_max, n);
    if (anchor > r_min && anchor < r_max) {
        auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), anchor);
        if (it != g.nodes.end() && *it != anchor) {
            // replace the nearest node to keep the count
            auto prev = it == g.nodes.begin() ? it : it - 1;
            if (std::fabs(*it - anchor) < std::fabs(*prev - anchor))
                *it = anchor;
            else
                *prev = anchor;
        }
    }
    return g;
}

int RadialGrid::bracket(double r) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    int i = int(it - nodes.begin()) - 1;
    return std::max(0, std::min(i, int(nodes.size()) - 2));
}

void RadialGrid::validate() const {
    if (nodes.size() < 8) throw Error("RadialGrid: too few nodes");
    if (!(nodes.front() > 0.0)) throw Error("RadialGrid: r_min must be > 0");
    if (!(nodes.back() / nodes.front() > 1e3))
        throw Error("RadialGrid: r_max/r_min must exceed 1e3");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw Error("RadialGrid: not monotone");
}

CubicSpline::CubicSpline(std::shared_ptr<const std::vector<double>> x,
                         std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const auto& xs = *x_;
    const int n = int(xs.size());
    m_.assign(n, 0.0);
    if (n < 3) return;
    // Tridiagonal system for natural spline second derivatives.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = 1.0;
    b[n - 1] = 1.0;
    for (int i = 1; i < n - 1; ++i) {
        const double hm = xs[i] - xs[i - 1];
        const double hp = xs[i + 1] - xs[i];
        a[i] = hm / 6.0;
        b[i] = (hm + hp) / 3.0;
        c[i] = hp / 6.0;
        d[i] = (y_[i + 1] - y_[i]) / hp - (y_[i] - y_[i - 1]) / hm;
    }
    // Thomas algorithm
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

int CubicSpline::bracket(double x) const {
    const auto& xs = *x_;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    int i = int(it - xs.begin()) - 1;
    return std::max(0, std::min(i, int(xs.size()) - 2));
}

double CubicSpline::value(double x) const {
    const auto& xs = *x_;
    const int i = bracket(x);
    const double h = xs[i + 1] - xs[i];
    const double A = (xs[i + 1] - x) / h;
    const double B = (x - xs[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
    const auto& xs = *x_;
    const int i = bracket(x);
    const double h = xs[i + 1] - xs[i];
    const double A = (xs[i + 1] - x) / h;
    const double B = (x - xs[i]) / h;
    return (y_[i + 1] - y_[i]) / h -
           (3.0 * A * A - 1.0) * h * m_[i] / 6.0 +
           (3.0 * B * B - 1.0) * h * m_[i + 1] / 6.0;
}

double CubicSpline::deriv2(double x) const {
    const auto& xs = *x_;
    const int i = bracket(x);
    const double h = xs[i + 1] - xs[i];
    const double A = (xs[i + 1] - x) / h;
    const double B = (x - xs[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

HermiteSeries::HermiteSeries(std::shared_ptr<const std::vector<double>> x,
                             std::vector<double> y, std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {}

int HermiteSeries::bracket(double x) const {
    const auto& xs = *x_;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    int i = int(it - xs.begin()) - 1;
    return std::max(0, std::min(i, int(xs.size()) - 2));
}

double HermiteSeries::value(double x) const {
    const auto& xs = *x_;
    const int i = bracket(x);
    const double dx = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / dx;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * y_[i] + h10 * dx * d_[i] + h01 * y_[i + 1] + h11 * dx * d_[i + 1];
}

double HermiteSeries::deriv(double x) const {
    const auto& xs = *x_;
    const int i = bracket(x);
    const double dx = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / dx;
    const double g00 = 6.0 * t * (t - 1.0) / dx;
    const double g10 = (3.0 * t - 1.0) * (t - 1.0);
    const double g01 = -g00;
    const double g11 = t * (3.0 * t - 2.0);
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

}  // namespace vhc
