#include "vhc/mode_solvers.hpp"

#include <algorithm>
#include <cmath>

#include "vhc/quadrature.hpp"

namespace vhc {

namespace {

std::vector<double> real_part(const std::vector<Complex>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    return out;
}

std::vector<double> imag_part(const std::vector<Complex>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].imag();
    return out;
}

}  // namespace

ModeFunction::ModeFunction(int k_, std::shared_ptr<const std::vector<double>> nodes,
                           std::vector<Complex> samples)
    : k(k_), nodes_(std::move(nodes)), samples_(std::move(samples)) {
    build();
}

ModeFunction::ModeFunction(int k_, std::shared_ptr<const std::vector<double>> nodes,
                           std::vector<Complex> samples, std::vector<Complex> d1,
                           std::vector<Complex> d2)
    : k(k_),
      nodes_(std::move(nodes)),
      samples_(std::move(samples)),
      d1_(std::move(d1)),
      d2_(std::move(d2)) {
    build();
}

void ModeFunction::build() {
    if (has_derivatives()) {
        vre_ = HermiteSeries(nodes_, real_part(samples_), real_part(d1_));
        vim_ = HermiteSeries(nodes_, imag_part(samples_), imag_part(d1_));
        dre_ = HermiteSeries(nodes_, real_part(d1_), real_part(d2_));
        dim_ = HermiteSeries(nodes_, imag_part(d1_), imag_part(d2_));
    } else {
        sre_ = CubicSpline(nodes_, real_part(samples_));
        sim_ = CubicSpline(nodes_, imag_part(samples_));
    }
}

Complex ModeFunction::value(double r) const {
    if (has_derivatives()) return {vre_.value(r), vim_.value(r)};
    return {sre_.value(r), sim_.value(r)};
}

Complex ModeFunction::deriv(double r) const {
    if (has_derivatives()) return {dre_.value(r), dim_.value(r)};
    return {sre_.deriv(r), sim_.deriv(r)};
}

Complex ModeFunction::deriv2(double r) const {
    if (has_derivatives()) return {dre_.deriv(r), dim_.deriv(r)};
    return {sre_.deriv2(r), sim_.deriv2(r)};
}

double FourierField::resum(const Vec2& x) const {
    const double r = x.norm();
    const double theta = std::atan2(x.y, x.x);
    const double rc = std::min(std::max(r, nodes->front()), nodes->back());
    const Complex ei{std::cos(theta), std::sin(theta)};
    Complex phase{1.0, 0.0};
    double out = modes[0].value(rc).real();
    for (int k = 1; k <= K; ++k) {
        phase *= ei;
        out += 2.0 * (modes[k].value(rc) * phase).real();
    }
    return out;
}

FourierField decompose(const std::function<double(const Vec2&)>& field,
                       const RadialGrid& grid, int K, int n_theta) {
    if (n_theta <= 0) n_theta = 4 * K + 4;
    if (n_theta < 4 * K + 4)
        throw Error("decompose: n_theta must be at least 4K+4");
    const int n = grid.size();
    auto nodes = std::make_shared<const std::vector<double>>(grid.nodes);

    // unit roots e^{-i 2 pi t/n_theta}
    std::vector<Complex> w(n_theta);
    for (int t = 0; t < n_theta; ++t) {
        const double a = -2.0 * M_PI * t / n_theta;
        w[t] = {std::cos(a), std::sin(a)};
    }

    std::vector<std::vector<Complex>> coef(K + 1,
                                           std::vector<Complex>(n, Complex{}));
    std::vector<double> row(n_theta);
    for (int i = 0; i < n; ++i) {
        const double r = (*nodes)[i];
        for (int t = 0; t < n_theta; ++t) {
            const double a = 2.0 * M_PI * t / n_theta;
            row[t] = field({r * std::cos(a), r * std::sin(a)});
        }
        for (int k = 0; k <= K; ++k) {
            Complex acc{};
            std::size_t idx = 0;
            for (int t = 0; t < n_theta; ++t) {
                acc += row[t] * w[idx];
                idx += k;
                if (idx >= std::size_t(n_theta)) idx -= n_theta;
            }
            coef[k][i] = acc / double(n_theta);
        }
    }

    FourierField out;
    out.K = K;
    out.nodes = nodes;
    out.real_field = true;
    out.modes.reserve(K + 1);
    for (int k = 0; k <= K; ++k)
        out.modes.emplace_back(k, nodes, std::move(coef[k]));
    return out;
}

// ---------------------------------------------------------------------------
// Homogeneous outer modes via the Riccati variable u = z'/z.

namespace {

// z'' = c0(r) z + c1(r) z' for L_k[z] = 0.
inline double riccati_rhs(double r, double u, int k, double h) {
    const double r2 = r * r, h2 = h * h;
    const double c0 = k * k * (r2 + h2) / (h2 * r2);
    const double c1 = (r2 - h2) / (r * (r2 + h2));
    return c0 + c1 * u - u * u;
}

}  // namespace

HomogeneousMode::HomogeneousMode(int k, double h, const RadialGrid& grid)
    : k_(k), h_(h) {
    if (k < 1) throw Error("HomogeneousMode: k >= 1 required");
    nodes_ = std::make_shared<const std::vector<double>>(grid.nodes);
    const auto& r = *nodes_;
    const int n = int(r.size());
    ell_.assign(n, 0.0);
    u_.assign(n, 0.0);
    u_[0] = k / r[0];

    double u = u_[0];
    double ell = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double dr = r[i + 1] - r[i];
        int n_sub = std::max(8, int(std::ceil(4.0 * k * dr / h)));
        if (n_sub % 2 == 1) ++n_sub;
        const double dt = dr / n_sub;
        std::vector<double> us(n_sub + 1);
        us[0] = u;
        double x = r[i];
        for (int s = 0; s < n_sub; ++s) {
            const double k1 = riccati_rhs(x, u, k, h);
            const double k2 = riccati_rhs(x + 0.5 * dt, u + 0.5 * dt * k1, k, h);
            const double k3 = riccati_rhs(x + 0.5 * dt, u + 0.5 * dt * k2, k, h);
            const double k4 = riccati_rhs(x + dt, u + dt * k3, k, h);
            u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            x += dt;
            us[s + 1] = u;
        }
        // Simpson accumulation of ell = int u dr over the uniform substeps
        double acc = 0.0;
        for (int s = 0; s + 2 <= n_sub; s += 2)
            acc += dt / 3.0 * (us[s] + 4.0 * us[s + 1] + us[s + 2]);
        ell += acc;
        ell_[i + 1] = ell;
        u_[i + 1] = u;
    }
    ell_interp_ = HermiteSeries(nodes_, ell_, u_);
    std::vector<double> du(n);
    for (int i = 0; i < n; ++i) du[i] = riccati_rhs(r[i], u_[i], k, h);
    u_interp_ = HermiteSeries(nodes_, u_, du);
}

double HomogeneousMode::log_value(double r) const { return ell_interp_.value(r); }
double HomogeneousMode::log_deriv(double r) const { return u_interp_.value(r); }
double HomogeneousMode::ratio(double r_num, double r_den) const {
    return std::exp(log_value(r_num) - log_value(r_den));
}

HomogeneousMode homogeneous_zk(int k, double h, const RadialGrid& grid) {
    return HomogeneousMode(k, h, grid);
}

// ---------------------------------------------------------------------------
// Outer mode solve.

namespace {

void check_decay(const ModeFunction& g, double nu, const char* who) {
    const auto& r = g.nodes();
    const int n = int(r.size());
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = std::pow(1.0 + r[i], nu) * std::abs(g.samples()[i]);
        if (r[i] <= r[n - 1] / 10.0)
            head = std::max(head, w);
        else
            tail = std::max(tail, w);
    }
    if (tail > 10.0 * std::max(head, 1e-300))
        throw NonDecayingInput(std::string(who) +
                               ": weighted sup of input diverges on the grid");
}

struct SupportRange {
    int lo = 0, hi = -1;  // empty when hi < lo
    bool contains_segment(int j) const { return j + 1 >= lo && j <= hi; }
};

SupportRange find_support(const std::vector<Complex>& v) {
    // only exactly-zero samples are skipped; a relative threshold here would
    // silently discard real tail mass of slowly decaying inputs
    SupportRange s;
    int lo = 0, hi = int(v.size()) - 1;
    while (lo < int(v.size()) && std::abs(v[lo]) == 0.0) ++lo;
    while (hi >= 0 && std::abs(v[hi]) == 0.0) --hi;
    if (hi < lo) return s;
    s.lo = std::max(0, lo - 1);
    s.hi = std::min(int(v.size()) - 1, hi + 1);
    return s;
}

// panel count for a smooth integrand carrying exp variation of `efolds`
int panels_for(double efolds) {
    return 1 + int(std::fabs(efolds) / 2.0);
}

Complex gk_segment(const ModeFunction& g, double a, double b,
                   const std::function<double(double)>& weight, int panels) {
    return integrate_fixed_c(
        [&](double t) { return g.value(t) * weight(t); }, a, b, panels);
}

double fd_mode_residual(const std::vector<double>& r,
                        const std::vector<Complex>& psi,
                        const ModeFunction& g, int k, double h) {
    // second-difference residual of the mode ODE at a few interior probes
    const int n = int(r.size());
    double worst = 0.0;
    for (int probe = 1; probe < 16; ++probe) {
        const int i = std::max(1, std::min(n - 2, probe * n / 16));
        const double dm = r[i] - r[i - 1], dp = r[i + 1] - r[i];
        const Complex d1 =
            (dm * dm * psi[i + 1] + (dp * dp - dm * dm) * psi[i] -
             dp * dp * psi[i - 1]) /
            (dm * dp * (dm + dp));
        const Complex d2 = 2.0 *
                           (dm * psi[i + 1] - (dm + dp) * psi[i] + dp * psi[i - 1]) /
                           (dm * dp * (dm + dp));
        const double ri = r[i], h2 = h * h;
        const Complex lhs = h2 / (ri * ri + h2) * d2 +
                            h2 * (h2 - ri * ri) /
                                (ri * (ri * ri + h2) * (ri * ri + h2)) * d1 -
                            double(k) * double(k) / (ri * ri) * psi[i];
        const double scale =
            std::abs(psi[i]) * (1.0 + double(k) * double(k) / (ri * ri)) +
            std::abs(g.value(ri)) + 1e-300;
        worst = std::max(worst, std::abs(lhs + g.value(ri)) / scale);
    }
    return worst;
}

}  // namespace

ModeFunction outer_mode_solve(const ModeFunction& g_k, double h,
                              const HomogeneousMode* zk, double nu,
                              ModeSolveReport* report) {
    check_decay(g_k, nu, "outer_mode_solve");
    const auto& r = g_k.nodes();
    const int n = int(r.size());
    const int k = std::abs(g_k.k);
    auto nodes = g_k.nodes_ptr();
    const double h2 = h * h;
    const auto w = [h2](double s) { return (h2 + s * s) / (h2 * s); };

    std::vector<Complex> psi(n), d1(n), d2(n);
    const SupportRange sup = find_support(g_k.samples());
    double tail_bound = 0.0;

    if (k == 0) {
        // psi0(r) = -int_0^r w(s) Q(s) ds, Q(s) = int_0^s g0 rho d rho
        std::vector<Complex> Q(n);
        Q[0] = (sup.hi >= 0 && sup.lo == 0)
                   ? g_k.value(r[0]) * (r[0] * r[0] / 2.0)
                   : Complex{};
        for (int j = 0; j + 1 < n; ++j) {
            Complex inc{};
            if (sup.contains_segment(j))
                inc = gk_segment(g_k, r[j], r[j + 1],
                                 [](double t) { return t; }, 1);
            Q[j + 1] = Q[j] + inc;
        }
        psi[0] = -g_k.value(r[0]) * (r[0] * r[0] / 4.0);
        for (int j = 0; j + 1 < n; ++j) {
            Complex seg{};
            if (sup.contains_segment(j)) {
                auto qof = [&](double s) {
                    Complex loc = gk_segment(g_k, r[j], s,
                                             [](double t) { return t; }, 1);
                    return Q[j] + loc;
                };
                seg = integrate_fixed_c(
                    [&](double s) { return w(s) * qof(s); }, r[j], r[j + 1], 2);
            } else {
                // Q constant on the segment; w has closed antiderivative
                auto lam = [&](double s) {
                    return std::log(s) + s * s / (2.0 * h2);
                };
                seg = Q[j] * (lam(r[j + 1]) - lam(r[j]));
            }
            psi[j + 1] = psi[j] - seg;
        }
        for (int i = 0; i < n; ++i) {
            d1[i] = -w(r[i]) * Q[i];
            const double ri = r[i];
            d2[i] = (ri * ri + h2) / h2 * (-g_k.value(ri)) -
                    (h2 - ri * ri) / (ri * (ri * ri + h2)) * d1[i];
        }
    } else {
        if (!zk) throw Error("outer_mode_solve: homogeneous mode required for k>=1");
        // I(r) = int_0^r g z rho e^{-l(r)} d rho, stable ratio form
        std::vector<Complex> I(n);
        I[0] = (sup.hi >= 0 && sup.lo == 0)
                   ? g_k.value(r[0]) * (r[0] * r[0] / double(k + 2))
                   : Complex{};
        for (int j = 0; j + 1 < n; ++j) {
            const double lj = zk->log_value(r[j]);
            const double lj1 = zk->log_value(r[j + 1]);
            const double base = std::exp(lj - lj1);
            Complex inc{};
            if (sup.contains_segment(j))
                inc = gk_segment(
                    g_k, r[j], r[j + 1],
                    [&](double t) { return std::exp(zk->log_value(t) - lj1) * t; },
                    panels_for(lj1 - lj));
            I[j + 1] = I[j] * base + inc;
        }
        // psi(r) = int_r^inf w(s) e^{l(r)-l(s)} I(s) ds, swept from the top
        tail_bound = std::abs(I[n - 1]) * w(r[n - 1]) * h / (2.0 * k);
        psi[n - 1] = I[n - 1] * w(r[n - 1]) * (h / (2.0 * k));
        for (int j = n - 2; j >= 0; --j) {
            const double lj = zk->log_value(r[j]);
            const double lj1 = zk->log_value(r[j + 1]);
            const double base = std::exp(lj - lj1);
            const int np = panels_for(2.0 * (lj1 - lj));
            // part driven by I(r_j) decaying through the segment
            const Complex first = integrate_fixed_c(
                [&](double s) -> Complex {
                    return {w(s) * std::exp(2.0 * (lj - zk->log_value(s))), 0.0};
                },
                r[j], r[j + 1], np);
            Complex seg = I[j] * first.real();
            if (sup.contains_segment(j)) {
                auto jloc = [&](double s) {
                    const double ls = zk->log_value(s);
                    return gk_segment(
                        g_k, r[j], s,
                        [&](double t) {
                            return std::exp(zk->log_value(t) - ls) * t;
                        },
                        panels_for(lj1 - lj));
                };
                seg += integrate_fixed_c(
                    [&](double s) {
                        return w(s) * std::exp(lj - zk->log_value(s)) * jloc(s);
                    },
                    r[j], r[j + 1], np);
            }
            psi[j] = base * psi[j + 1] + seg;
        }
        for (int i = 0; i < n; ++i) {
            const double ri = r[i];
            d1[i] = zk->log_deriv(ri) * psi[i] - w(ri) * I[i];
            d2[i] = (ri * ri + h2) / h2 *
                        (double(k) * double(k) / (ri * ri) * psi[i] -
                         g_k.value(ri)) -
                    (h2 - ri * ri) / (ri * (ri * ri + h2)) * d1[i];
        }
    }

    if (report) {
        report->k = g_k.k;
        report->r_min = r.front();
        report->r_max = r.back();
        report->tail_bound = tail_bound;
        report->residual_norm = fd_mode_residual(r, psi, g_k, k, h);
        double wn = 0.0;
        for (int i = 0; i < n; ++i)
            wn = std::max(wn,
                          std::pow(1.0 + r[i], nu) * std::abs(g_k.samples()[i]));
        report->weighted_input_norm = wn;
    }
    return ModeFunction(g_k.k, nodes, std::move(psi), std::move(d1), std::move(d2));
}

// ---------------------------------------------------------------------------
// Outer field evaluator.

OuterField::OuterField(double h, std::shared_ptr<const std::vector<double>> nodes,
                       std::vector<ModeFunction> modes, OuterSolveReport report)
    : h_(h), nodes_(std::move(nodes)), modes_(std::move(modes)),
      report_(std::move(report)) {}

namespace {

struct ModeEval {
    Complex v, d1, d2;
};

ModeEval eval_mode_extended(const ModeFunction& m, double r, double r_min,
                            double r_max, double h) {
    const int k = m.k;
    if (r < r_min) {
        if (k == 0) {
            // quadratic continuation a + b r^2 matched at r_min
            const Complex d = m.deriv(r_min);
            const Complex b = d / (2.0 * r_min);
            const Complex a = m.value(r_min) - b * (r_min * r_min);
            return {a + b * r * r, 2.0 * b * r, 2.0 * b};
        }
        const int p = std::min(k, 12);
        const double t = std::pow(r / r_min, p);
        const Complex v0 = m.value(r_min);
        return {v0 * t, v0 * t * double(p) / r,
                v0 * t * double(p) * double(p - 1) / (r * r)};
    }
    if (r > r_max) {
        if (k == 0) {
            const Complex q = -m.deriv(r_max) * (h * h * r_max) /
                              (h * h + r_max * r_max);
            auto lam = [&](double s) {
                return std::log(s) + s * s / (2.0 * h * h);
            };
            const Complex v =
                m.value(r_max) - q * (lam(r) - lam(r_max));
            const double w = (h * h + r * r) / (h * h * r);
            return {v, -q * w, -q * (r * r - h * h) / (h * h * r * r)};
        }
        const double lam = -double(k) / h + 0.5 / r;
        const double f = std::exp(-double(k) / h * (r - r_max)) *
                         std::sqrt(r / r_max);
        const Complex v = m.value(r_max) * f;
        return {v, v * lam, v * (lam * lam - 0.5 / (r * r))};
    }
    return {m.value(r), m.deriv(r), m.deriv2(r)};
}

}  // namespace

double OuterField::value(const Vec2& x) const { return jet(x).value; }

ScalarJet OuterField::jet(const Vec2& x) const {
    const double r = std::max(x.norm(), 1e-300);
    const double theta = std::atan2(x.y, x.x);
    const double r_min = nodes_->front(), r_max = nodes_->back();

    double f = 0.0, fr = 0.0, frr = 0.0, ft = 0.0, ftt = 0.0, frt = 0.0;
    const Complex ei{std::cos(theta), std::sin(theta)};
    Complex phase{1.0, 0.0};
    for (int k = 0; k < int(modes_.size()); ++k) {
        const ModeEval me =
            eval_mode_extended(modes_[k], r, r_min, r_max, h_);
        if (k == 0) {
            f += me.v.real();
            fr += me.d1.real();
            frr += me.d2.real();
        } else {
            phase *= ei;
            const Complex pv = me.v * phase;
            const Complex pd = me.d1 * phase;
            f += 2.0 * pv.real();
            fr += 2.0 * pd.real();
            frr += 2.0 * (me.d2 * phase).real();
            ft += -2.0 * double(k) * pv.imag();
            ftt += -2.0 * double(k) * double(k) * pv.real();
            frt += -2.0 * double(k) * pd.imag();
        }
    }

    const double c = std::cos(theta), s = std::sin(theta);
    ScalarJet j;
    j.value = f;
    const Vec2 er{c, s}, et{-s, c};
    j.grad = er * fr + et * (ft / r);
    const double hrt = frt / r - ft / (r * r);
    const double htt = fr / r + ftt / (r * r);
    j.hess = Mat2{frr * c * c + htt * s * s - 2.0 * hrt * c * s,
                  (frr - htt) * c * s + hrt * (c * c - s * s),
                  (frr - htt) * c * s + hrt * (c * c - s * s),
                  frr * s * s + htt * c * c + 2.0 * hrt * c * s};
    return j;
}

OuterField outer_solve(const std::function<double(const Vec2&)>& g, double h,
                       const RadialGrid& grid, const OuterConfig& cfg,
                       OuterWorkspace* workspace) {
    const int K = cfg.K;
    FourierField gf = decompose(g, grid, K, cfg.n_theta);
    OuterSolveReport rep;
    rep.nu = cfg.nu;
    rep.K = K;
    std::vector<ModeFunction> sol;
    sol.reserve(K + 1);
    if (workspace && int(workspace->zks.size()) < K) {
        for (int k = int(workspace->zks.size()) + 1; k <= K; ++k)
            workspace->zks.push_back(
                std::make_shared<const HomogeneousMode>(k, h, grid));
    }
    for (int k = 0; k <= K; ++k) {
        ModeSolveReport mrep;
        if (k == 0) {
            sol.push_back(outer_mode_solve(gf.modes[0], h, nullptr, cfg.nu, &mrep));
        } else if (workspace) {
            sol.push_back(outer_mode_solve(gf.modes[k], h,
                                           workspace->zks[k - 1].get(), cfg.nu,
                                           &mrep));
        } else {
            HomogeneousMode zk(k, h, grid);
            sol.push_back(outer_mode_solve(gf.modes[k], h, &zk, cfg.nu, &mrep));
        }
        rep.modes.push_back(mrep);
    }
    return OuterField(h, gf.nodes, std::move(sol), std::move(rep));
}

// ---------------------------------------------------------------------------
// Inner mode solves.

namespace {

double z_mode0(double r) { return (r * r - 1.0) / (1.0 + r * r); }
double z_mode0_d(double r) {
    const double d = 1.0 + r * r;
    return 4.0 * r / (d * d);
}
double z_mode1(double r) { return 4.0 * r / (1.0 + r * r); }
double z_mode1_d(double r) {
    const double d = 1.0 + r * r;
    return 4.0 * (1.0 - r * r) / (d * d);
}

double u_liouville(double r) {
    const double d = 1.0 + r * r;
    return 8.0 / (d * d);
}

// work grid = input nodes with 1.0 inserted (for the k = 0 base point)
std::vector<double> with_anchor(const std::vector<double>& nodes, double anchor) {
    std::vector<double> out = nodes;
    auto it = std::lower_bound(out.begin(), out.end(), anchor);
    if (it == out.end() || *it != anchor) out.insert(it, anchor);
    return out;
}

Complex hermite_complex(const std::vector<double>& x,
                        const std::vector<Complex>& y,
                        const std::vector<Complex>& d, double t) {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    int i = std::max(0, std::min(int(it - x.begin()) - 1, int(x.size()) - 2));
    const double dx = x[i + 1] - x[i];
    const double s = (t - x[i]) / dx;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * y[i] + h10 * dx * d[i] + h01 * y[i + 1] + h11 * dx * d[i + 1];
}

}  // namespace

ModeFunction inner_mode_solve(const ModeFunction& h_k, double m,
                              ModeSolveReport* report) {
    check_decay(h_k, m, "inner_mode_solve");
    const int k = std::abs(h_k.k);
    const auto& in_nodes = h_k.nodes();
    auto nodes_out = h_k.nodes_ptr();
    const int n_out = int(in_nodes.size());

    std::vector<Complex> phi(n_out), d1(n_out), d2(n_out);

    if (k <= 1) {
        const bool mode0 = (k == 0);
        if (mode0 && !(in_nodes.front() < 1.0 && in_nodes.back() > 1.0))
            throw Error("inner_mode_solve: grid must straddle r = 1 for k = 0");
        std::vector<double> wr =
            mode0 ? with_anchor(in_nodes, 1.0) : in_nodes;
        const int n = int(wr.size());
        auto zf = mode0 ? z_mode0 : z_mode1;

        // M(s) = int_0^s h z rho d rho with analytic slopes for interpolation
        std::vector<Complex> M(n), Mp(n);
        {
            const double r0 = wr[0];
            M[0] = h_k.value(r0) * (mode0 ? -r0 * r0 / 2.0
                                          : 4.0 * r0 * r0 * r0 / 3.0);
            for (int j = 0; j + 1 < n; ++j) {
                M[j + 1] = M[j] + integrate_fixed_c(
                                      [&](double t) {
                                          return h_k.value(t) * (zf(t) * t);
                                      },
                                      wr[j], wr[j + 1], 1);
            }
            for (int i = 0; i < n; ++i) Mp[i] = h_k.value(wr[i]) * zf(wr[i]) * wr[i];
        }
        auto m_at = [&](double s) { return hermite_complex(wr, M, Mp, s); };

        std::vector<Complex> phi_w(n), d1_w(n);
        if (mode0) {
            const int i1 = int(std::lower_bound(wr.begin(), wr.end(), 1.0) -
                               wr.begin());
            const Complex M1 = M[i1];
            const Complex h1v = h_k.value(1.0);
            auto gtilde = [&](double s) -> Complex {
                if (std::fabs(s - 1.0) < 1e-4)
                    return 0.75 * M1 + 0.5 * h1v;
                const double z = z_mode0(s);
                const double u = s - 1.0;
                return m_at(s) / (s * z * z) - M1 / (u * u);
            };
            std::vector<Complex> V(n);
            V[i1] = Complex{};
            for (int j = i1; j + 1 < n; ++j)
                V[j + 1] = V[j] + integrate_fixed_c(gtilde, wr[j], wr[j + 1], 2);
            for (int j = i1; j > 0; --j)
                V[j - 1] = V[j] - integrate_fixed_c(gtilde, wr[j - 1], wr[j], 2);
            for (int i = 0; i < n; ++i) {
                const double r = wr[i];
                const double p = (r + 1.0) / (1.0 + r * r);
                const double pp =
                    (1.0 - 2.0 * r - r * r) / ((1.0 + r * r) * (1.0 + r * r));
                phi_w[i] = M1 * p - z_mode0(r) * V[i];
                d1_w[i] = M1 * pp - z_mode0_d(r) * V[i] - z_mode0(r) * gtilde(r);
            }
        } else {
            // k = 1: base point at the origin, no singular node
            std::vector<Complex> W(n);
            W[0] = h_k.value(wr[0]) * (wr[0] / 12.0);
            auto integrand = [&](double s) -> Complex {
                const double z = z_mode1(s);
                return m_at(s) / (s * z * z);
            };
            for (int j = 0; j + 1 < n; ++j)
                W[j + 1] = W[j] + integrate_fixed_c(integrand, wr[j], wr[j + 1], 2);
            for (int i = 0; i < n; ++i) {
                const double r = wr[i];
                phi_w[i] = -z_mode1(r) * W[i];
                d1_w[i] = -z_mode1_d(r) * W[i] - M[i] / (r * z_mode1(r));
            }
        }
        // resample onto the input grid nodes
        int wi = 0;
        for (int i = 0; i < n_out; ++i) {
            while (wr[wi] != in_nodes[i]) ++wi;
            phi[i] = phi_w[wi];
            d1[i] = d1_w[wi];
        }
    } else {
        // |k| >= 2: finite-difference BVP on a midpoint-refined grid
        std::vector<double> wr;
        wr.reserve(2 * n_out);
        for (int i = 0; i + 1 < n_out; ++i) {
            wr.push_back(in_nodes[i]);
            wr.push_back(std::sqrt(in_nodes[i] * in_nodes[i + 1]));
        }
        wr.push_back(in_nodes.back());
        const int n = int(wr.size());
        std::vector<Complex> a(n), b(n), c(n), rhs(n);
        // regularity row: phi_0 - (r0/r1)^k phi_1 = 0
        b[0] = 1.0;
        c[0] = -std::pow(wr[0] / wr[1], k);
        rhs[0] = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            const double dm = wr[i] - wr[i - 1], dp = wr[i + 1] - wr[i];
            const double denom = dm * dp * (dm + dp);
            const double w2m = 2.0 * dp / denom, w2c = -2.0 * (dm + dp) / denom,
                         w2p = 2.0 * dm / denom;
            const double w1m = -dp * dp / denom, w1c = (dp * dp - dm * dm) / denom,
                         w1p = dm * dm / denom;
            const double r = wr[i];
            a[i] = w2m + w1m / r;
            b[i] = w2c + w1c / r + u_liouville(r) -
                   double(k) * double(k) / (r * r);
            c[i] = w2p + w1p / r;
            rhs[i] = -h_k.value(r);
        }
        b[n - 1] = 1.0;
        a[n - 1] = 0.0;
        rhs[n - 1] = 0.0;
        // complex Thomas solve
        for (int i = 1; i < n; ++i) {
            const Complex wgt = a[i] / b[i - 1];
            b[i] -= wgt * c[i - 1];
            rhs[i] -= wgt * rhs[i - 1];
        }
        std::vector<Complex> sol(n);
        sol[n - 1] = rhs[n - 1] / b[n - 1];
        for (int i = n - 2; i >= 0; --i)
            sol[i] = (rhs[i] - c[i] * sol[i + 1]) / b[i];
        // derivative by centered differences on the refined grid
        std::vector<Complex> dsol(n);
        for (int i = 1; i + 1 < n; ++i) {
            const double dm = wr[i] - wr[i - 1], dp = wr[i + 1] - wr[i];
            dsol[i] = (dm * dm * sol[i + 1] + (dp * dp - dm * dm) * sol[i] -
                       dp * dp * sol[i - 1]) /
                      (dm * dp * (dm + dp));
        }
        dsol[0] = sol[0] * double(k) / wr[0];
        dsol[n - 1] = dsol[n - 2];
        for (int i = 0; i < n_out; ++i) {
            phi[i] = sol[2 * i];
            d1[i] = dsol[std::max(1, std::min(n - 2, 2 * i))];
        }
    }

    for (int i = 0; i < n_out; ++i) {
        const double r = in_nodes[i];
        d2[i] = -h_k.value(r) - d1[i] / r - u_liouville(r) * phi[i] +
                double(k) * double(k) / (r * r) * phi[i];
    }

    if (report) {
        report->k = h_k.k;
        report->r_min = in_nodes.front();
        report->r_max = in_nodes.back();
        double wn = 0.0;
        for (int i = 0; i < n_out; ++i)
            wn = std::max(wn, std::pow(1.0 + in_nodes[i], m) *
                                  std::abs(h_k.samples()[i]));
        report->weighted_input_norm = wn;
    }
    return ModeFunction(h_k.k, nodes_out, std::move(phi), std::move(d1),
                        std::move(d2));
}

ScalarJet phi2_profile(const Vec2& y, double c) {
    const double t = y.norm2();
    const double d = 1.0 + t;
    const double L = std::log(d);
    const double z = (t - 1.0) / d;
    const double zp = 2.0 / (d * d);
    const double zpp = -4.0 / (d * d * d);

    const double p = (4.0 / 3.0) * z * L - (8.0 / 3.0) / d;
    const double dpdt = (4.0 / 3.0) * (zp * L + z / d) + (8.0 / 3.0) / (d * d);
    const double d2pdt2 = (4.0 / 3.0) * (zpp * L + 2.0 * zp / d - z / (d * d)) -
                          (16.0 / 3.0) / (d * d * d);

    ScalarJet j;
    j.value = c * p;
    j.grad = y * (2.0 * c * dpdt);
    const double hrr_extra = 4.0 * c * d2pdt2;
    j.hess = Mat2{2.0 * c * dpdt + hrr_extra * y.x * y.x,
                  hrr_extra * y.x * y.y, hrr_extra * y.x * y.y,
                  2.0 * c * dpdt + hrr_extra * y.y * y.y};
    return j;
}

}  // namespace vhc
