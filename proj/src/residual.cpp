#include "vhc/residual.hpp"

#include <algorithm>
#include <cmath>

#include "vhc/quadrature.hpp"

namespace vhc {

double error_S(const Vec2& x, const StreamAssembly& a) {
    const ScalarJet j = a.psi0(x);
    return apply_L(j, x, a.params().h) + a.vorticity_W(x);
}

double scaled_inner_error(int i, const Vec2& y, const StreamAssembly& a) {
    const double em = a.params().eps * a.mu()[i];
    const Vec2 x = a.points()[i] + a.charts()[i].A * (y * em);
    return em * em * error_S(x, a);
}

RegionScan scan_inner(const StreamAssembly& a, int i, int n_r, int n_theta,
                      double a_exponent) {
    const double em = a.params().eps * a.mu()[i];
    const double labs = a.log_eps_abs();
    const double y_max = a.params().delta * a.params().delta / (labs * em);
    const double envelope_eps = em * std::log(labs);

    RegionScan scan;
    const double y_lo = 0.05;
    for (int ir = 0; ir < n_r; ++ir) {
        const double y_abs =
            (ir == 0) ? 0.0
                      : y_lo * std::pow(y_max / y_lo, (ir - 1) / double(n_r - 2));
        const int nt = (ir == 0) ? 1 : n_theta;
        for (int it = 0; it < nt; ++it) {
            const double t = 2.0 * M_PI * (it + 0.37) / nt;
            const Vec2 y{y_abs * std::cos(t), y_abs * std::sin(t)};
            ResidualSample s;
            s.y_norm = y_abs;
            s.x = a.points()[i] + a.charts()[i].A * (y * em);
            s.region = {RegionKind::Inner, i};
            s.raw = scaled_inner_error(i, y, a);
            const double spatial = 1.0 + std::pow(y_abs, 2.0 + a_exponent);
            const double sw = std::fabs(s.raw) * spatial;
            s.weighted = sw / envelope_eps;
            scan.sup_spatial = std::max(scan.sup_spatial, sw);
            if (s.weighted > scan.sup_weighted) {
                scan.sup_weighted = s.weighted;
                scan.argmax = s;
            }
            scan.samples.push_back(s);
        }
    }
    return scan;
}

RegionScan scan_outer(const StreamAssembly& a, int n_shell, int n_annulus,
                      double nu) {
    const double labs = a.log_eps_abs();
    const double eps = a.params().eps;
    RegionScan scan;

    auto add = [&](const Vec2& x) {
        const RegionTag tag = a.classify(x);
        if (tag.kind != RegionKind::Outer) return;
        ResidualSample s;
        s.x = x;
        s.region = tag;
        s.raw = error_S(x, a);
        const double spatial = 1.0 + std::pow(x.norm(), nu);
        const double sw = std::fabs(s.raw) * spatial;
        s.weighted = sw / eps;
        scan.sup_spatial = std::max(scan.sup_spatial, sw);
        if (s.weighted > scan.sup_weighted) {
            scan.sup_weighted = s.weighted;
            scan.argmax = s;
        }
        scan.samples.push_back(s);
    };

    // shells hugging each inner-region boundary from outside
    for (int i = 0; i < a.params().count(); ++i) {
        for (double f : {1.05, 1.3, 2.0}) {
            const double rho = f * a.params().delta / labs;
            for (int t = 0; t < n_shell; ++t) {
                const double th = 2.0 * M_PI * (t + 0.13) / n_shell;
                const Vec2 z{rho * std::cos(th), rho * std::sin(th)};
                add(a.points()[i] + a.charts()[i].A * z);
            }
        }
    }
    // coarse annulus around the cluster plus a far ring
    for (double rr : {0.05, 0.15, 0.35, 0.7, 1.1, 2.0, 5.0}) {
        for (int t = 0; t < n_annulus; ++t) {
            const double th = 2.0 * M_PI * (t + 0.41) / n_annulus;
            add(Vec2{a.params().r0, 0.0} +
                rr * Vec2{std::cos(th), std::sin(th)});
        }
    }
    return scan;
}

ACoefficients coefficients_A(int i, const StreamAssembly& a) {
    const auto& charts = a.charts();
    const auto& cc = a.constants();
    const auto& kappas = a.params().kappas;
    const double labs = a.log_eps_abs();
    const double h = a.params().h;
    const double Ri = charts[i].R;
    const double q = std::sqrt(h * h + Ri * Ri);
    const double c1i = cc[i].c1();

    ACoefficients out;
    out.A1 = labs * (4.0 * c1i -
                     a.alpha() * h * Ri / (kappas[i] * q)) -
             4.0 * c1i * a.log_mu()[i];
    for (int j = 0; j < a.params().count(); ++j) {
        if (j == i) continue;
        const Vec2 w = charts[j].Ainv * (a.points()[i] - a.points()[j]);
        const double w2 = w.norm2();
        const double c1j = cc[j].c1(), c2j = cc[j].c2();
        const double ratio = kappas[j] / kappas[i];
        const double poly = 1.0 + c1j * w.x + c2j * w2;
        const double logterm = std::log(8.0 / (w2 * w2));
        out.A1 += -ratio * 4.0 * w.x / w2 * poly +
                  ratio * logterm * (c1j + 2.0 * c2j * w.x);
        out.A2 += -ratio * 4.0 * w.y / w2 * poly +
                  ratio * logterm * (2.0 * c2j * w.y);
    }
    const Vec2 grad = a.H2eps().jet(a.points()[i]).grad;
    const Vec2 col1{charts[i].A.a11, charts[i].A.a21};
    const Vec2 col2{charts[i].A.a12, charts[i].A.a22};
    out.A1 += col1.dot(grad) / kappas[i];
    out.A2 += col2.dot(grad) / kappas[i];
    return out;
}

double reduced_F1(int i, const StreamAssembly& a) {
    const double h = a.params().h;
    const double Ri = a.charts()[i].R;
    const double q2 = h * h + Ri * Ri;
    const double labs = a.log_eps_abs();
    double s = labs * (2.0 * h * Ri / (q2 * std::sqrt(q2)) -
                       a.alpha() * h * Ri / (a.params().kappas[i] * std::sqrt(q2)));
    for (int j = 0; j < a.params().count(); ++j) {
        if (j == i) continue;
        const Vec2 w = a.charts()[j].Ainv * (a.points()[i] - a.points()[j]);
        s -= a.params().kappas[j] / a.params().kappas[i] * 4.0 * w.x / w.norm2();
    }
    return s;
}

double reduced_F2(int i, const StreamAssembly& a) {
    double s = 0.0;
    for (int j = 0; j < a.params().count(); ++j) {
        if (j == i) continue;
        const Vec2 w = a.charts()[j].Ainv * (a.points()[i] - a.points()[j]);
        s -= a.params().kappas[j] / a.params().kappas[i] * 4.0 * w.y / w.norm2();
    }
    return s;
}

KernelProjections kernel_projections(int i, const StreamAssembly& a, double R_in,
                                     int n_r, int n_theta) {
    const double em = a.params().eps * a.mu()[i];
    if (R_in <= 0.0)
        R_in = 2.0 * a.params().delta1 / (em * a.log_eps_abs());
    KernelProjections out;
    out.radius = R_in;

    // composite radial rule: linear panel on [0, min(4, R)], log panels beyond
    struct Node {
        double r, w;
    };
    std::vector<Node> radial;
    const int n_core = std::max(16, n_r / 2);
    const double r_split = std::min(4.0, R_in);
    GaussLegendre core(n_core);
    for (int q = 0; q < n_core; ++q) {
        const double r = 0.5 * r_split * (core.nodes[q] + 1.0);
        radial.push_back({r, 0.5 * r_split * core.weights[q]});
    }
    if (R_in > r_split) {
        const int n_tail = std::max(16, n_r - n_core);
        GaussLegendre tail(n_tail);
        const double la = std::log(r_split), lb = std::log(R_in);
        for (int q = 0; q < n_tail; ++q) {
            const double t = 0.5 * (lb - la) * (tail.nodes[q] + 1.0) + la;
            const double r = std::exp(t);
            radial.push_back({r, 0.5 * (lb - la) * tail.weights[q] * r});
        }
    }

    std::vector<double> t0, t1, t2;
    t0.reserve(radial.size());
    for (const auto& node : radial) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (int t = 0; t < n_theta; ++t) {
            const double th = 2.0 * M_PI * t / n_theta;
            const Vec2 y{node.r * std::cos(th), node.r * std::sin(th)};
            const double e = scaled_inner_error(i, y, a);
            s0 += e * kernel_Z(0, y);
            s1 += e * kernel_Z(1, y);
            s2 += e * kernel_Z(2, y);
        }
        const double w = node.w * node.r * (2.0 * M_PI / n_theta);
        t0.push_back(s0 * w);
        t1.push_back(s1 * w);
        t2.push_back(s2 * w);
    }
    out.c0 = pairwise_sum(t0);
    out.c1 = pairwise_sum(t1);
    out.c2 = pairwise_sum(t2);
    return out;
}

RateStudy rate_study(const std::vector<const StreamAssembly*>& ladder) {
    if (ladder.size() < 3) throw Error("rate_study: need at least 3 ladder points");
    RateStudy out;
    for (const StreamAssembly* a : ladder) {
        const double eps = a->params().eps;
        const double labs = a->log_eps_abs();

        double inner_spatial = 0.0, inner_const = 0.0;
        for (int i = 0; i < a->params().count(); ++i) {
            const RegionScan s = scan_inner(*a, i);
            const double mu_i = a->mu()[i];
            inner_spatial = std::max(inner_spatial, s.sup_spatial / mu_i);
            inner_const =
                std::max(inner_const,
                         s.sup_spatial / (eps * mu_i * std::log(labs)));
        }
        out.inner.eps.push_back(eps);
        out.inner.sup_spatial.push_back(inner_spatial);
        out.inner.constants.push_back(inner_const);

        const RegionScan s = scan_outer(*a);
        out.outer.eps.push_back(eps);
        out.outer.sup_spatial.push_back(s.sup_spatial);
        out.outer.constants.push_back(s.sup_spatial / eps);
    }
    auto fit = [](RateFit& f) {
        const int n = int(f.eps.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < n; ++i) {
            const double x = std::log(f.eps[i]);
            const double y = std::log(std::max(f.sup_spatial[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const auto [lo, hi] =
            std::minmax_element(f.constants.begin(), f.constants.end());
        f.constant_ratio = *hi / std::max(*lo, 1e-300);
    };
    fit(out.inner);
    fit(out.outer);
    return out;
}

Vec3 reconstruct_vorticity(const Vec3& x, const StreamAssembly& a) {
    const double h = a.params().h;
    const Vec2 xp{x.x, x.y};
    const Vec2 rotated = rotate(-x.z / h, xp);
    const double w = a.vorticity_W(rotated);
    const Vec2 perp = rotate(M_PI / 2.0, xp);
    return Vec3{perp.x, perp.y, h} * (w / h);
}

VorticityGrid3D sample_vorticity_grid(const StreamAssembly& a, const Vec3& lo,
                                      const Vec3& hi, int n) {
    VorticityGrid3D g;
    g.nx = g.ny = g.nz = n;
    g.origin = lo;
    g.spacing = {(hi.x - lo.x) / (n - 1), (hi.y - lo.y) / (n - 1),
                 (hi.z - lo.z) / (n - 1)};
    g.samples.resize(std::size_t(n) * n * n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                g.samples[g.index(i, j, k)] =
                    reconstruct_vorticity(g.point(i, j, k), a);
    return g;
}

std::pair<double, double> divergence_check(const VorticityGrid3D& g) {
    double max_div = 0.0, max_norm = 0.0;
    for (const auto& v : g.samples)
        max_norm = std::max(max_norm, v.max_abs());
    for (int k = 1; k + 1 < g.nz; ++k)
        for (int j = 1; j + 1 < g.ny; ++j)
            for (int i = 1; i + 1 < g.nx; ++i) {
                const double dx = (g.samples[g.index(i + 1, j, k)].x -
                                   g.samples[g.index(i - 1, j, k)].x) /
                                  (2.0 * g.spacing.x);
                const double dy = (g.samples[g.index(i, j + 1, k)].y -
                                   g.samples[g.index(i, j - 1, k)].y) /
                                  (2.0 * g.spacing.y);
                const double dz = (g.samples[g.index(i, j, k + 1)].z -
                                   g.samples[g.index(i, j, k - 1)].z) /
                                  (2.0 * g.spacing.z);
                max_div = std::max(max_div, std::fabs(dx + dy + dz));
            }
    return {max_div, max_norm};
}

}  // namespace vhc
