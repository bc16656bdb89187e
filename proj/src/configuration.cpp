#include "vhc/configuration.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vhc {

double ClusterCharges::kappa_sum() const {
    double s = 0.0;
    for (double k : kappas) s += k;
    return s;
}

double ClusterCharges::kappa_sq_sum() const {
    double s = 0.0;
    for (double k : kappas) s += k * k;
    return s;
}

double alpha_constant(const ClusterCharges& charges) {
    const double ks = charges.kappa_sum();
    if (std::fabs(ks) < 1e-14)
        throw ZeroTotalCirculation("alpha_constant: sum of circulations is zero");
    const double q2 = charges.h * charges.h + charges.r0 * charges.r0;
    return 2.0 / q2 * charges.kappa_sq_sum() / ks;
}

Complex balance_rhs(const ClusterCharges& charges, int i) {
    const double alpha = alpha_constant(charges);
    const double h = charges.h, r0 = charges.r0;
    const double q2 = h * h + r0 * r0;
    const double u = charges.kappas[i] * h * r0 / (2.0 * q2 * std::sqrt(q2)) -
                     alpha * h * r0 / (4.0 * std::sqrt(q2));
    return {u, 0.0};
}

void ClusterConfiguration::refresh_derived() {
    gauge = Complex{};
    for (const auto& p : points) gauge += p;
    d = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double dist = std::abs(points[i] - points[j]);
            if (first || dist < d) d = dist;
            first = false;
        }
}

namespace {

void check_distinct(const std::vector<Complex>& pts, double guard) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) < guard)
                throw CoincidentPoints("cluster points coincide");
}

std::vector<Complex> residual_at(const std::vector<Complex>& pts,
                                 const ClusterCharges& charges) {
    const int n = int(pts.size());
    check_distinct(pts, 1e-14);
    std::vector<Complex> out(n);
    for (int i = 0; i < n; ++i) {
        Complex f{};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            f += charges.kappas[j] / (pts[i] - pts[j]);
        }
        out[i] = f - balance_rhs(charges, i);
    }
    return out;
}

// Conjugation-symmetry structure of a point set: each point is either its own
// mirror (real axis) or one of a conjugate pair.
struct SymmetryPattern {
    std::vector<int> partner;          // partner[i] = j with P_j ~ conj(P_i)
    std::vector<int> representatives;  // pair representatives and singles
    std::vector<bool> is_single;
};

SymmetryPattern detect_symmetry(const std::vector<Complex>& pts) {
    const int n = int(pts.size());
    double scale = 1e-12;
    for (const auto& p : pts) scale = std::max(scale, std::abs(p));
    const double tol = 1e-8 * scale;
    SymmetryPattern pat;
    pat.partner.assign(n, -1);
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        if (std::fabs(pts[i].imag()) < tol) {
            pat.partner[i] = i;
            used[i] = true;
            pat.representatives.push_back(i);
            pat.is_single.push_back(true);
            continue;
        }
        int match = -1;
        for (int j = 0; j < n; ++j) {
            if (used[j] || j == i) continue;
            if (std::abs(std::conj(pts[i]) - pts[j]) < tol) {
                match = j;
                break;
            }
        }
        if (match < 0)
            throw Error("solve_configuration: guess is not conjugation-symmetric");
        pat.partner[i] = match;
        pat.partner[match] = i;
        used[i] = used[match] = true;
        pat.representatives.push_back(i);
        pat.is_single.push_back(false);
    }
    return pat;
}

// Unknown vector layout: for each representative, (Re) for singles and
// (Re, Im) for pair representatives.
std::vector<Complex> points_from_unknowns(const SymmetryPattern& pat,
                                          const Eigen::VectorXd& u, int n) {
    std::vector<Complex> pts(n);
    int idx = 0;
    for (std::size_t r = 0; r < pat.representatives.size(); ++r) {
        const int i = pat.representatives[r];
        if (pat.is_single[r]) {
            pts[i] = Complex{u[idx], 0.0};
            idx += 1;
        } else {
            pts[i] = Complex{u[idx], u[idx + 1]};
            pts[pat.partner[i]] = std::conj(pts[i]);
            idx += 2;
        }
    }
    return pts;
}

int unknown_count(const SymmetryPattern& pat) {
    int n = 0;
    for (bool s : pat.is_single) n += s ? 1 : 2;
    return n;
}

Eigen::VectorXd symmetric_equations(const std::vector<Complex>& pts,
                                    const ClusterCharges& charges,
                                    const SymmetryPattern& pat,
                                    bool with_gauge) {
    const std::vector<Complex> res = residual_at(pts, charges);
    std::vector<double> rows;
    for (std::size_t r = 0; r < pat.representatives.size(); ++r) {
        const int i = pat.representatives[r];
        rows.push_back(res[i].real());
        if (!pat.is_single[r]) rows.push_back(res[i].imag());
    }
    if (with_gauge) {
        Complex s{};
        for (const auto& p : pts) s += p;
        rows.push_back(s.real());
    }
    Eigen::VectorXd v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i];
    return v;
}

Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& u) {
    const Eigen::VectorXd f0 = f(u);
    Eigen::MatrixXd J(f0.size(), u.size());
    for (int j = 0; j < u.size(); ++j) {
        const double step = 1e-7 * std::max(1.0, std::fabs(u[j]));
        Eigen::VectorXd up = u, um = u;
        up[j] += step;
        um[j] -= step;
        J.col(j) = (f(up) - f(um)) / (2.0 * step);
    }
    return J;
}

double min_pair_distance(const std::vector<Complex>& pts) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::min(d, std::abs(pts[i] - pts[j]));
    return d;
}

}  // namespace

std::vector<Complex> balance_residual(const ClusterConfiguration& config,
                                      const ClusterCharges& charges) {
    return residual_at(config.points, charges);
}

std::vector<Complex> jacobian(const ClusterConfiguration& config,
                              const ClusterCharges& charges) {
    const auto& pts = config.points;
    const int n = int(pts.size());
    check_distinct(pts, 1e-14);
    std::vector<Complex> J(n * n, Complex{});
    for (int i = 0; i < n; ++i) {
        Complex diag{};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Complex dij = pts[i] - pts[j];
            const Complex t = 1.0 / (dij * dij);
            J[i * n + j] = charges.kappas[j] * t;
            diag -= charges.kappas[j] * t;
        }
        J[i * n + i] = diag;
    }
    return J;
}

std::pair<ClusterConfiguration, BalanceReport> solve_configuration(
    const ClusterCharges& charges, const std::vector<Complex>& guess,
    const NewtonOptions& opts) {
    const int n = charges.count();
    if (n < 2) throw Error("solve_configuration: need at least two filaments");
    if (int(guess.size()) != n)
        throw Error("solve_configuration: guess size mismatch");
    if (std::fabs(charges.kappa_sum()) < 1e-14)
        throw ZeroTotalCirculation("solve_configuration: sum kappa = 0");
    if (!(charges.r0 > 0.0))
        throw Error("solve_configuration: r0 must be positive");
    check_distinct(guess, opts.collision_guard);

    const SymmetryPattern pat = detect_symmetry(guess);
    // symmetric pairs must carry equal charges
    for (std::size_t r = 0; r < pat.representatives.size(); ++r) {
        const int i = pat.representatives[r];
        if (!pat.is_single[r] &&
            charges.kappas[i] != charges.kappas[pat.partner[i]])
            throw Error("solve_configuration: conjugate pair with unequal kappa");
    }

    const int nu = unknown_count(pat);
    Eigen::VectorXd u(nu);
    {
        int idx = 0;
        for (std::size_t r = 0; r < pat.representatives.size(); ++r) {
            const int i = pat.representatives[r];
            u[idx++] = guess[i].real();
            if (!pat.is_single[r]) u[idx++] = guess[i].imag();
        }
    }

    auto eqs = [&](const Eigen::VectorXd& v) {
        return symmetric_equations(points_from_unknowns(pat, v, n), charges, pat,
                                   true);
    };

    auto inf_norm = [&](const std::vector<Complex>& pts) {
        const auto res = residual_at(pts, charges);
        double m = 0.0;
        for (const auto& c : res) m = std::max(m, std::abs(c));
        Complex s{};
        for (const auto& p : pts) s += p;
        return std::max(m, std::abs(s));
    };

    std::vector<Complex> pts = points_from_unknowns(pat, u, n);
    double res_norm = inf_norm(pts);
    int it = 0;
    for (; it < opts.max_iterations && res_norm >= opts.tolerance; ++it) {
        const Eigen::MatrixXd J = fd_jacobian(eqs, u);
        const Eigen::VectorXd f = eqs(u);
        const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-f);
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= opts.max_halvings; ++halving) {
            const Eigen::VectorXd trial = u + lambda * step;
            const std::vector<Complex> tpts = points_from_unknowns(pat, trial, n);
            if (min_pair_distance(tpts) < opts.collision_guard) {
                lambda *= 0.5;
                continue;
            }
            const double trial_norm = inf_norm(tpts);
            if (trial_norm < res_norm || trial_norm < opts.tolerance) {
                u = trial;
                pts = tpts;
                res_norm = trial_norm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw NewtonDiverged("solve_configuration: damping failed to reduce residual");
    }
    if (res_norm >= opts.tolerance)
        throw NewtonDiverged("solve_configuration: no convergence within iteration cap");

    ClusterConfiguration config;
    config.points = pts;
    config.alpha = alpha_constant(charges);
    config.refresh_derived();
    if (config.d < opts.collision_guard)
        throw NewtonDiverged("solve_configuration: collision in converged state");

    BalanceReport report;
    report.residual = 0.0;
    for (const auto& c : residual_at(pts, charges))
        report.residual = std::max(report.residual, std::abs(c));
    report.gauge_norm = std::abs(config.gauge);
    {
        Complex s{};
        const auto res = residual_at(pts, charges);
        for (int i = 0; i < n; ++i) s += charges.kappas[i] * res[i];
        report.cokernel_check = std::abs(s);
    }
    report.newton_iterations = it;
    report.jacobian = jacobian(config, charges);

    Eigen::MatrixXcd Jc(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Jc(i, j) = report.jacobian[i * n + j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Jc);
    report.singular_values.assign(svd.singularValues().data(),
                                  svd.singularValues().data() + n);
    report.kernel_dimension = 0;
    for (double s : report.singular_values)
        if (s < 1e-8) ++report.kernel_dimension;
    return {config, report};
}

NondegeneracyReport nondegeneracy_certificate(const ClusterConfiguration& config,
                                              const ClusterCharges& charges,
                                              double threshold, bool require) {
    const int n = charges.count();
    NondegeneracyReport rep;
    rep.threshold = threshold;

    // full complex Jacobian spectrum
    const auto J = jacobian(config, charges);
    Eigen::MatrixXcd Jc(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Jc(i, j) = J[i * n + j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Jc);
    rep.singular_values_full.assign(svd.singularValues().data(),
                                    svd.singularValues().data() + n);
    rep.kernel_dimension = 0;
    for (double s : rep.singular_values_full)
        if (s < threshold) ++rep.kernel_dimension;

    // Jacobian of the symmetric parametrization, translation direction removed
    const SymmetryPattern pat = detect_symmetry(config.points);
    const int nu = unknown_count(pat);
    Eigen::VectorXd u(nu);
    {
        int idx = 0;
        for (std::size_t r = 0; r < pat.representatives.size(); ++r) {
            const int i = pat.representatives[r];
            u[idx++] = config.points[i].real();
            if (!pat.is_single[r]) u[idx++] = config.points[i].imag();
        }
    }
    auto eqs = [&](const Eigen::VectorXd& v) {
        return symmetric_equations(points_from_unknowns(pat, v, n), charges, pat,
                                   false);
    };
    const Eigen::MatrixXd Jsym = fd_jacobian(eqs, u);

    // real-translation direction in unknown space: +1 on every Re component
    Eigen::VectorXd t = Eigen::VectorXd::Zero(nu);
    {
        int idx = 0;
        for (std::size_t r = 0; r < pat.representatives.size(); ++r) {
            t[idx] = 1.0;
            idx += pat.is_single[r] ? 1 : 2;
        }
    }
    t.normalize();
    // orthonormal basis of the complement of t
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(nu, nu) - t * t.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> qsvd(Q, Eigen::ComputeThinU);
    Eigen::MatrixXd basis(nu, nu - 1);
    int col = 0;
    for (int i = 0; i < nu && col < nu - 1; ++i)
        if (qsvd.singularValues()[i] > 0.5) basis.col(col++) = qsvd.matrixU().col(i);
    Eigen::JacobiSVD<Eigen::MatrixXd> ssvd(Jsym * basis);
    rep.sigma_min_symmetric =
        ssvd.singularValues()[ssvd.singularValues().size() - 1];

    rep.passed = rep.sigma_min_symmetric > threshold && rep.kernel_dimension == 1;
    if (require && !rep.passed)
        throw DegenerateConfiguration(
            "nondegeneracy_certificate: configuration fails the certificate");
    return rep;
}

bool sb_family_supported(int m, int n) {
    return (m == 2 && n == 1) || (m == 3 && n == 2) || (m == 4 && n == 3) ||
           (m == 5 && n == 4) || (m == 6 && n == 5);
}

ClusterCharges sb_charges(int m, int n, double h, double r0) {
    ClusterCharges charges;
    charges.h = h;
    charges.r0 = r0;
    charges.kappas.assign(m, 1.0);
    charges.kappas.insert(charges.kappas.end(), n, -1.0);
    return charges;
}

std::pair<ClusterConfiguration, BalanceReport> sb_family(int m, int n, double h,
                                                         double r0) {
    if (m == n) throw UnsupportedPair("sb_family: m must be different from n");
    if (!sb_family_supported(m, n))
        throw UnsupportedPair("sb_family: pair outside the admissible set");
    // Alternating stack along the symmetry-transverse (imaginary) axis with
    // positive charges flanking. Collinear guesses on the real axis escape to
    // infinity (no nearby solution), the vertical interleaving converges.
    const int N = m + n;
    auto charges = sb_charges(m, n, h, r0);
    for (double spacing : {0.6, 0.45, 0.8, 1.0, 0.3}) {
        std::vector<Complex> guess(N);
        int pos_idx = 0, neg_idx = m;
        for (int slot = 0; slot < N; ++slot) {
            const double y = spacing * (slot - (N - 1) / 2.0);
            if (slot % 2 == 0)
                guess[pos_idx++] = Complex{0.0, y};
            else
                guess[neg_idx++] = Complex{0.0, y};
        }
        try {
            auto solved = solve_configuration(charges, guess);
            nondegeneracy_certificate(solved.first, charges, 1e-8, false);
            return solved;
        } catch (const NewtonDiverged&) {
            continue;
        }
    }
    throw NewtonDiverged("sb_family: no guess in the ladder converged");
}

}  // namespace vhc
