#include "vhc/quadrature.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace vhc {

double pairwise_sum(const std::vector<double>& terms) {
    if (terms.empty()) return 0.0;
    std::vector<double> acc = terms;
    std::size_t n = acc.size();
    while (n > 1) {
        std::size_t m = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) acc[m++] = acc[i] + acc[i + 1];
        if (n % 2 == 1) acc[m++] = acc[n - 1];
        n = m;
    }
    return acc[0];
}

namespace {

// Kronrod-15 abscissae on [0,1] side (symmetric rule) with embedded Gauss-7.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - hl * kXgk[i]);
        fv[14 - i] = f(c + hl * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    resk *= hl;
    resg *= hl;
    return {resk, std::fabs(resk - resg)};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, int max_depth, QuadResult& out) {
    PanelResult p = gk15_panel(f, a, b);
    // the relative floor keeps absolute tolerances from forcing subdivision
    // past the roundoff level of large smooth integrands
    const double floor = 1e-14 * std::fabs(p.kronrod);
    if (p.err <= std::max(tol, floor) || depth >= max_depth) {
        out.value += p.kronrod;
        out.error += p.err;
        return;
    }
    ++out.subdivisions;
    const double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth + 1, max_depth, out);
    adapt(f, c, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace

std::complex<double> integrate_fixed_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels) {
    std::complex<double> acc{};
    if (a == b) return acc;
    panels = std::max(1, panels);
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + p * w;
        const double c = pa + 0.5 * w;
        const double hl = 0.5 * w;
        std::complex<double> resk = kWgk[7] * f(c);
        for (int i = 0; i < 7; ++i)
            resk += kWgk[i] * (f(c - hl * kXgk[i]) + f(c + hl * kXgk[i]));
        acc += resk * hl;
    }
    return acc;
}

QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    adapt(f, a, b, abs_tol, 0, max_depth, out);
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    return integrate_gk(f, a, b, abs_tol).value;
}

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: n >= 1 required");
    nodes.resize(n);
    weights.resize(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

}  // namespace vhc
