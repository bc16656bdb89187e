#include "vhc/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace vhc {

AssemblyParams AssemblyParams::from_configuration(
    const ClusterConfiguration& config, const ClusterCharges& charges,
    double eps, double delta, double delta1, double s) {
    AssemblyParams p;
    p.eps = eps;
    p.delta = delta;
    p.delta1 = delta1;
    p.r0 = charges.r0;
    p.h = charges.h;
    p.s = s;
    p.kappas = charges.kappas;
    p.cluster_points = config.points;
    p.cluster_d = config.d;
    p.anchor = Vec2{charges.r0, 0.0};
    p.anchor_set = true;
    return p;
}

double AssemblyParams::log_eps_abs() const { return std::fabs(std::log(eps)); }

void AssemblyParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw Error("AssemblyParams: eps in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw Error("AssemblyParams: delta in (0,1)");
    if (!(delta1 > 0.0 && delta1 < delta * delta))
        throw Error("AssemblyParams: delta1 must be below delta^2");
    if (!(r0 > 0.0 && h > 0.0)) throw Error("AssemblyParams: r0, h positive");
    if (kappas.size() != cluster_points.size() || kappas.empty())
        throw Error("AssemblyParams: kappas/cluster_points mismatch");
    if (cluster_points.size() > 1) {
        if (!(cluster_d > 0.0))
            throw Error("AssemblyParams: cluster_d must be positive");
        const double bound = std::sqrt(h * h + r0 * r0) / h * cluster_d / 4.0;
        if (delta > bound * (1.0 + 1e-12))
            throw Error("AssemblyParams: delta exceeds the inner-region bound");
    }
    const double labs = log_eps_abs();
    if (std::fabs(s) > 10.0 * std::log(labs) / labs)
        throw Error("AssemblyParams: |s| too large for the cluster ansatz");
    for (const auto& p : cluster_points)
        if (std::abs(p) > 10.0)
            throw Error("AssemblyParams: cluster points too large");
}

std::vector<Vec2> AssemblyParams::phat() const {
    const double q = std::sqrt(h * h + r0 * r0);
    std::vector<Vec2> out(cluster_points.size());
    for (std::size_t i = 0; i < cluster_points.size(); ++i)
        out[i] = Vec2{cluster_points[i].real() / q, cluster_points[i].imag()};
    return out;
}

std::vector<Vec2> AssemblyParams::physical_points() const {
    const double labs = log_eps_abs();
    std::vector<Vec2> out = phat();
    for (auto& p : out) p = Vec2{r0 + s, 0.0} + p / labs;
    return out;
}

AnchoredOuterField solve_H2eps(const std::function<double(const Vec2&)>& g,
                               double h, const RadialGrid& grid,
                               const OuterConfig& cfg, const Vec2& anchor,
                               OuterWorkspace* workspace) {
    AnchoredOuterField out;
    out.field = outer_solve(g, h, grid, cfg, workspace);
    out.anchor = anchor;
    out.offset = out.field.value(anchor);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

ScalarJet radial_jet(const Vec2& center, const Vec2& x, const CutoffJet1D& c,
                     double rho) {
    ScalarJet j;
    j.value = c.value;
    if (rho < 1e-13) {
        j.hess = Mat2{c.d2, 0.0, 0.0, c.d2};
        return j;
    }
    const Vec2 e = (x - center) / rho;
    j.grad = e * c.d1;
    const double tang = c.d1 / rho;
    j.hess = Mat2{c.d2 * e.x * e.x + tang * e.y * e.y,
                  (c.d2 - tang) * e.x * e.y, (c.d2 - tang) * e.x * e.y,
                  c.d2 * e.y * e.y + tang * e.x * e.x};
    return j;
}

}  // namespace

double StreamAssembly::eta0(const Vec2& x) const {
    const Vec2 c{params_.r0, 0.0};
    return eta_profile((x - c).norm()).value;
}

ScalarJet StreamAssembly::eta0_jet(const Vec2& x) const {
    const Vec2 c{params_.r0, 0.0};
    const double rho = (x - c).norm();
    return radial_jet(c, x, eta_profile(rho), rho);
}

ScalarJet StreamAssembly::bubble_sum_jet(const Vec2& x) const {
    ScalarJet sum;
    for (int j = 0; j < params_.count(); ++j)
        sum += params_.kappas[j] * bubbles_[j].psi_filament(x, charts_[j]);
    return sum;
}

double StreamAssembly::liouville_rhs(const Vec2& x) const {
    const double e0 = eta0(x);
    if (e0 == 0.0) return 0.0;
    double acc = 0.0;
    for (int j = 0; j < params_.count(); ++j) {
        const Vec2 z = charts_[j].Ainv * (x - charts_[j].P);
        acc += params_.kappas[j] *
               (bubbles_[j].delta_gamma(z) + bubbles_[j].dipole_term(z));
    }
    return e0 * acc;
}

double StreamAssembly::source_g(const Vec2& x) const {
    const Vec2 c{params_.r0, 0.0};
    const double rho = (x - c).norm();
    if (rho >= 1.0) return 0.0;
    const ScalarJet eta = radial_jet(c, x, eta_profile(rho), rho);
    const ScalarJet total = eta * bubble_sum_jet(x);
    return apply_L(total, x, params_.h) - liouville_rhs(x);
}

std::function<double(const Vec2&)> StreamAssembly::source_functional() const {
    return [this](const Vec2& x) { return source_g(x); };
}

ScalarJet StreamAssembly::psi0(const Vec2& x) const {
    const Vec2 c{params_.r0, 0.0};
    const double rho = (x - c).norm();
    ScalarJet j = h2e_.jet(x);
    if (rho < 1.0) {
        const ScalarJet eta = radial_jet(c, x, eta_profile(rho), rho);
        j += eta * bubble_sum_jet(x);
    }
    return j;
}

double StreamAssembly::psi0_value(const Vec2& x) const { return psi0(x).value; }

double StreamAssembly::cutoff_upper(int j) const {
    const double d_eps = -4.0 * std::log(params_.delta);
    return cutoff_lower(j) + d_eps;
}

double StreamAssembly::cutoff_lower(int j) const {
    const double labs = labs_;
    const double R = charts_[j].R;
    const double d_eps = -4.0 * std::log(params_.delta);
    return -alpha_ * R * R / (2.0 * params_.kappas[j]) * labs +
           4.0 * std::log(labs) + 2.0 * log_mu_[j] + std::log(8.0) + d_eps;
}

double StreamAssembly::cutoff_eta(int j, double u) const {
    const double lo = cutoff_lower(j);
    const double hi = cutoff_upper(j);
    return smooth_step((u - lo) / (hi - lo)).value;
}

double StreamAssembly::shifted_argument(int j, const Vec2& x) const {
    const double val =
        psi0_value(x) - 0.5 * alpha_ * labs_ * x.norm2();
    return val / params_.kappas[j];
}

double StreamAssembly::nonlinearity_F(const std::vector<double>& u) const {
    double acc = 0.0;
    const double log_eps = -labs_;
    for (int j = 0; j < params_.count(); ++j) {
        const double eta = cutoff_eta(j, u[j]);
        if (eta == 0.0) continue;
        const double R = charts_[j].R;
        const double expo =
            (2.0 - alpha_ / (2.0 * params_.kappas[j]) * R * R) * log_eps + u[j];
        acc += params_.kappas[j] * eta * std::exp(expo);
    }
    return acc;
}

double StreamAssembly::vorticity_W(const Vec2& x) const {
    const double val = psi0_value(x) - 0.5 * alpha_ * labs_ * x.norm2();
    std::vector<double> u(params_.count());
    for (int j = 0; j < params_.count(); ++j) u[j] = val / params_.kappas[j];
    return nonlinearity_F(u);
}

double StreamAssembly::mu_relation_rhs(int i) const {
    double acc = 0.0;
    for (int j = 0; j < params_.count(); ++j) {
        if (j == i) continue;
        const Vec2 w = charts_[j].Ainv * (P_[i] - P_[j]);
        const double w2 = w.norm2();
        const double c1 = cc_[j].c1(), c2 = cc_[j].c2();
        acc += params_.kappas[j] * std::log(8.0 / (w2 * w2)) *
               (1.0 + c1 * w.x + c2 * w2);
    }
    return acc + h2e_.value(P_[i]);
}

double StreamAssembly::mu_relation_residual() const {
    double worst = 0.0;
    for (int i = 0; i < params_.count(); ++i)
        worst = std::max(worst, std::fabs(2.0 * params_.kappas[i] * log_mu_[i] -
                                          mu_relation_rhs(i)));
    return worst;
}

double StreamAssembly::chart_radius(int i, const Vec2& x) const {
    return (charts_[i].Ainv * (x - P_[i])).norm();
}

RegionTag StreamAssembly::classify(const Vec2& x) const {
    const double labs = labs_;
    const double inner_r = params_.delta * params_.delta / labs;
    const double trans_r = params_.delta / labs;
    for (int i = 0; i < params_.count(); ++i) {
        const double rho = chart_radius(i, x);
        if (rho <= inner_r) return {RegionKind::Inner, i};
        if (rho <= trans_r) return {RegionKind::Transition, i};
    }
    return {RegionKind::Outer, -1};
}

StreamAssembly StreamAssembly::restore(const AssemblyParams& params_in,
                                       std::vector<double> mu,
                                       AnchoredOuterField h2e) {
    AssemblyParams params = params_in;
    if (!params.anchor_set) {
        params.anchor = Vec2{params.r0, 0.0};
        params.anchor_set = true;
    }
    params.validate();
    StreamAssembly a;
    a.params_ = params;
    a.labs_ = params.log_eps_abs();
    {
        ClusterCharges charges{params.kappas, params.h, params.r0};
        a.alpha_ = alpha_constant(charges);
    }
    a.P_ = params.physical_points();
    const int n = params.count();
    for (int i = 0; i < n; ++i) {
        a.charts_.push_back(frame_chart(a.P_[i], params.h));
        a.cc_.emplace_back(a.charts_[i].R, params.h);
    }
    a.mu_ = std::move(mu);
    a.log_mu_.resize(n);
    for (int i = 0; i < n; ++i) a.log_mu_[i] = std::log(a.mu_[i]);
    for (int i = 0; i < n; ++i)
        a.bubbles_.emplace_back(BubbleParams(params.eps, a.mu_[i]), a.cc_[i]);
    a.h2e_ = std::move(h2e);
    double gs = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * M_PI * i / 64.0;
        for (double rr : {0.55, 0.7, 0.85, 0.95, 0.3, 0.1}) {
            const Vec2 x =
                Vec2{params.r0, 0.0} + rr * Vec2{std::cos(t), std::sin(t)};
            gs = std::max(gs, std::fabs(a.source_g(x)));
        }
    }
    a.g_sup_ = gs;
    return a;
}

StreamAssembly StreamAssembly::build(const AssemblyParams& params_in) {
    AssemblyParams params = params_in;
    if (!params.anchor_set) {
        params.anchor = Vec2{params.r0, 0.0};
        params.anchor_set = true;
    }
    params.validate();

    StreamAssembly a;
    a.params_ = params;
    a.labs_ = params.log_eps_abs();
    {
        ClusterCharges charges{params.kappas, params.h, params.r0};
        a.alpha_ = alpha_constant(charges);
    }
    a.P_ = params.physical_points();
    const int n = params.count();
    a.charts_.reserve(n);
    a.cc_.reserve(n);
    for (int i = 0; i < n; ++i) {
        a.charts_.push_back(frame_chart(a.P_[i], params.h));
        a.cc_.emplace_back(a.charts_[i].R, params.h);
    }

    const RadialGrid grid = RadialGrid::log_spaced(
        params.grid_rmin, params.grid_rmax, params.grid_nodes);
    OuterConfig ocfg;
    ocfg.K = params.K;
    ocfg.nu = params.nu;

    a.log_mu_.assign(n, 0.0);
    a.mu_.assign(n, 1.0);
    OuterWorkspace workspace;
    bool converged = false;
    for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
        a.bubbles_.clear();
        for (int i = 0; i < n; ++i)
            a.bubbles_.emplace_back(BubbleParams(params.eps, a.mu_[i]), a.cc_[i]);
        a.h2e_ = solve_H2eps(a.source_functional(), params.h, grid, ocfg,
                             params.anchor, &workspace);
        double delta = 0.0;
        std::vector<double> next(n);
        for (int i = 0; i < n; ++i) {
            next[i] = a.mu_relation_rhs(i) / (2.0 * params.kappas[i]);
            delta = std::max(delta, std::fabs(next[i] - a.log_mu_[i]));
        }
        a.sweep_deltas_.push_back(delta);
        a.log_mu_ = next;
        for (int i = 0; i < n; ++i) a.mu_[i] = std::exp(a.log_mu_[i]);
        if (delta < params.mu_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw FixedPointDiverged("StreamAssembly: mu fixed point did not settle");

    // final state consistent with the converged scalings
    a.bubbles_.clear();
    for (int i = 0; i < n; ++i)
        a.bubbles_.emplace_back(BubbleParams(params.eps, a.mu_[i]), a.cc_[i]);
    a.h2e_ = solve_H2eps(a.source_functional(), params.h, grid, ocfg,
                         params.anchor, &workspace);

    // record the source sup on a probe set for reporting and tolerances
    double gs = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * M_PI * i / 64.0;
        for (double rr : {0.55, 0.7, 0.85, 0.95, 0.3, 0.1}) {
            const Vec2 x = Vec2{params.r0, 0.0} + rr * Vec2{std::cos(t), std::sin(t)};
            gs = std::max(gs, std::fabs(a.source_g(x)));
        }
    }
    a.g_sup_ = gs;
    return a;
}

}  // namespace vhc
