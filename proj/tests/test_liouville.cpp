#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fd.hpp"
#include "vhc/liouville.hpp"
#include "vhc/quadrature.hpp"

using namespace vhc;
using vhc::testing::fd_laplacian;

TEST_CASE("bubble value and Liouville identity") {
    const ScalarJet j0 = gamma_bubble({0.0, 0.0}, BubbleParams(0.5, 1.99999));
    CHECK(j0.value ==
          doctest::Approx(std::log(8.0) - 4.0 * std::log(0.5 * 1.99999))
              .epsilon(1e-12));

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (double em : {0.999999, 1e-3}) {
        BubbleParams bp(em, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const Vec2 z{u(rng), u(rng)};
            const ScalarJet g = gamma_bubble(z, bp);
            const double lap = g.laplacian();
            const double res = lap + em * em * std::exp(g.value);
            CHECK(std::fabs(res) < 1e-9);
        }
    }
}

TEST_CASE("bubble far-field asymptotics") {
    BubbleParams p(1e-2, 1.0);
    const double r = 1e6;
    const ScalarJet j = gamma_bubble({r, 0.0}, p);
    CHECK(j.value ==
          doctest::Approx(-4.0 * std::log(r) + std::log(8.0)).epsilon(1e-5));
}

TEST_CASE("kernel functions") {
    CHECK(kernel_Z(0, {0.0, 0.0}) == doctest::Approx(2.0));
    CHECK(kernel_Z(1, {1.0, 0.0}) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(kernel_Z(3, {0.0, 0.0}), std::invalid_argument);

    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int j = 0; j <= 2; ++j) {
        for (int trial = 0; trial < 20; ++trial) {
            const Vec2 y{u(rng), u(rng)};
            auto f = [j](const Vec2& p) { return kernel_Z(j, p); };
            const double res = fd_laplacian(f, y, 2e-3) + bubble_U(y) * kernel_Z(j, y);
            CHECK(std::fabs(res) < 1e-8);
        }
    }
}

TEST_CASE("h1 vanishes at 1 and is cubic at the origin") {
    BubbleParams p(0.3, 1.0);
    H1Profile prof(p);
    CHECK(std::fabs(prof.eval(1.0).first) < 1e-14);

    // |h1(s)|/s^3 settles to a constant as s -> 0
    const double q1 = prof.eval(1e-2).first / 1e-6;
    const double q2 = prof.eval(5e-3).first / 1.25e-7;
    const double q3 = prof.eval(2.5e-3).first / 1.5625e-8;
    CHECK(q2 == doctest::Approx(q1).epsilon(0.25));
    CHECK(q3 == doctest::Approx(q2).epsilon(0.25));
}

namespace {

// fresh nested adaptive quadrature of the h1 formula, independent of the
// cached profile: returns (h1, h1')
std::pair<double, double> fresh_h1(double s, double em) {
    const double em2 = em * em;
    auto G = [em2](double x) {
        return integrate(
            [em2](double eta) {
                const double d = em2 + eta * eta;
                return std::pow(eta, 7) / (d * d);
            },
            0.0, x, 1e-15);
    };
    const double J = integrate(
        [&](double x) { return G(x) / std::pow(x, 7); }, s, 1.0, 1e-14);
    const double v = s * s * s * J;
    const double d = 3.0 * s * s * J - G(s) / std::pow(s, 4);
    return {v, d};
}

}  // namespace

TEST_CASE("h1 satisfies its ODE (fresh nested quadrature oracle)") {
    const double em = 1e-3;
    const double em2 = em * em;
    BubbleParams p(1e-3, 1.0);
    H1Profile prof(p);
    for (double s : {0.011, 0.05, 0.2, 0.5, 1.3, 1.9}) {
        // second derivative by Richardson-extrapolated differences of fresh
        // first derivatives from the differentiated formula
        auto fd2 = [&](double step) {
            return (fresh_h1(s + step, em).second -
                    fresh_h1(s - step, em).second) /
                   (2.0 * step);
        };
        const double ds = 4e-4 * s;
        const double d2 = (4.0 * fd2(0.5 * ds) - fd2(ds)) / 3.0;
        const auto [v, d1] = fresh_h1(s, em);
        const double den = em2 + s * s;
        const double res =
            d2 + d1 / s - 9.0 * v / (s * s) + s * s * s / (den * den);
        CHECK(std::fabs(res) < 1e-6);

        // cached profile agrees with the fresh quadrature
        const auto [cv, cd] = prof.eval(s);
        CHECK(std::fabs(cv - v) < 1e-9 * (1.0 + std::fabs(v)));
        CHECK(std::fabs(cd - d1) < 1e-6 * (1.0 + std::fabs(d1)));
    }
}

TEST_CASE("H1 corrector: angular zero and PDE residual") {
    BubbleParams p(1e-3, 1.0);
    Bubble b(p, CorrectionConstants(1.0, 1.0));

    const double r = 0.4;
    const Vec2 on_ray{r * std::cos(M_PI / 6.0), r * std::sin(M_PI / 6.0)};
    CHECK(std::fabs(b.H1_corrector(on_ray).value) < 1e-12);

    const Vec2 axis{0.5, 0.0};
    CHECK(b.H1_corrector(axis).value ==
          doctest::Approx(b.h1().eval(0.5).first).epsilon(1e-10));

    const Vec2 z{0.3, 0.2};
    auto f = [&](const Vec2& q) { return b.H1_corrector(q).value; };
    const double lap = fd_laplacian(f, z, 2e-4);
    const double em2 = p.epsmu() * p.epsmu();
    const double re_z3 = z.x * z.x * z.x - 3.0 * z.x * z.y * z.y;
    const double den = em2 + z.norm2();
    CHECK(std::fabs(lap + re_z3 / (den * den)) < 1e-5);
}

TEST_CASE("correction constants at R = h = 1") {
    CorrectionConstants cc(1.0, 1.0);
    CHECK(cc.c1() == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-14));
    CHECK(cc.c2() == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("psi_mu at the origin") {
    for (double em : {1e-2, 1e-3}) {
        BubbleParams p(em, 1.0);
        Bubble b(p, CorrectionConstants(1.3, 0.9));
        CHECK(b.psi({0.0, 0.0}).value ==
              doctest::Approx(std::log(8.0) - 4.0 * std::log(em)).epsilon(1e-12));
    }
}

TEST_CASE("bubble residual after corrections stays bounded across the ladder") {
    // sup over |z| <= 0.3 of L(psi_mu) - Delta Gamma - dipole varies < 2x
    const CorrectionConstants cc(1.0, 1.0);
    const FramedChart chart = frame_chart({1.0, 0.0}, 1.0);
    std::vector<double> sups;
    for (double em : {1e-2, 1e-3, 1e-4}) {
        BubbleParams p(em, 1.0);
        Bubble b(p, cc);
        double sup = 0.0;
        for (int ir = 1; ir <= 6; ++ir)
            for (int it = 0; it < 16; ++it) {
                const double r = 0.05 * ir;
                const double t = 2.0 * M_PI * it / 16.0;
                const Vec2 z{r * std::cos(t), r * std::sin(t)};
                const ScalarJet jz = b.psi(z);
                const double L_val = jz.laplacian() + apply_B(jz, z, chart);
                const double res =
                    L_val - b.delta_gamma(z) - b.dipole_term(z);
                sup = std::max(sup, std::fabs(res));
            }
        sups.push_back(sup);
    }
    for (std::size_t i = 1; i < sups.size(); ++i) {
        CHECK(sups[i] < 2.0 * sups[0]);
        CHECK(sups[0] < 2.0 * sups[i]);
    }
}

TEST_CASE("c1 removes the singular z1/(em^2+|z|^2) part") {
    const CorrectionConstants cc(1.0, 1.0);
    const FramedChart chart = frame_chart({1.0, 0.0}, 1.0);
    const double em = 1e-4;
    BubbleParams p(em, 1.0);
    Bubble b(p, cc);

    // first angular mode of L(Gamma (1+c1 z1)) - Delta Gamma - dipole on the
    // circle |z| = 10 em; the singular z1-term lives exactly there
    auto mode1_amplitude = [&](double c1) {
        const double r = 10.0 * em;
        const int nt = 64;
        double acc = 0.0;
        for (int it = 0; it < nt; ++it) {
            const double t = 2.0 * M_PI * it / nt;
            const Vec2 z{r * std::cos(t), r * std::sin(t)};
            const ScalarJet g = gamma_bubble(z, p);
            ScalarJet poly;
            poly.value = 1.0 + c1 * z.x;
            poly.grad = {c1, 0.0};
            const ScalarJet jz = g * poly;
            const double res = jz.laplacian() + apply_B(jz, z, chart) -
                               b.delta_gamma(z) - b.dipole_term(z);
            acc += res * std::cos(t);
        }
        return std::fabs(2.0 * acc / nt);
    };
    const double with_c1 = mode1_amplitude(cc.c1());
    const double without = mode1_amplitude(0.0);
    CHECK(without > 50.0 * with_c1);
}

TEST_CASE("filament pushforward: chain rule and far field") {
    BubbleParams p(1e-4, 1.2);
    CorrectionConstants cc(1.5, 0.8);
    Bubble b(p, cc);
    const FramedChart chart = frame_chart({1.5, 0.0}, 0.8);

    const Vec2 z0{0.2, -0.1};
    const Vec2 x0 = chart.P + chart.A * z0;
    CHECK(b.psi_filament(x0, chart).value ==
          doctest::Approx(b.psi(z0).value).epsilon(1e-13));

    // gradient against finite differences of the composite
    auto f = [&](const Vec2& x) { return b.psi_filament(x, chart).value; };
    const Vec2 fd = vhc::testing::fd_gradient(f, x0, 1e-6);
    const Vec2 an = b.psi_filament(x0, chart).grad;
    CHECK(std::fabs(fd.x - an.x) < 1e-8 * (1.0 + std::fabs(an.x)));
    CHECK(std::fabs(fd.y - an.y) < 1e-8 * (1.0 + std::fabs(an.y)));

    const double dist = 1e3 * p.epsmu();
    const Vec2 far = chart.P + Vec2{dist, 0.0};
    const double got = b.psi_filament(far, chart).value;
    CHECK(std::fabs(got + 4.0 * std::log(dist)) < 4.0);
}

TEST_CASE("bubble mass and first-moment constant") {
    // int U = 8 pi with the analytic tail beyond R
    const double R = 1e4;
    const double mass_inner = 2.0 * M_PI *
                              integrate(
                                  [](double r) {
                                      const double d = 1.0 + r * r;
                                      return 8.0 * r / (d * d);
                                  },
                                  0.0, R, 1e-10);
    const double mass = mass_inner + 8.0 * M_PI / (1.0 + R * R);
    CHECK(mass == doctest::Approx(8.0 * M_PI).epsilon(1e-7));

    // M = int U y1 Z1 via 2d polar quadrature + tail
    GaussLegendre gl(128);
    double m_val = 0.0;
    const double la = std::log(1e-6), lb = std::log(R);
    for (int q = 0; q < 128; ++q) {
        const double t = 0.5 * (lb - la) * (gl.nodes[q] + 1.0) + la;
        const double r = std::exp(t);
        double ang = 0.0;
        const int nt = 64;
        for (int it = 0; it < nt; ++it) {
            const double th = 2.0 * M_PI * it / nt;
            const Vec2 y{r * std::cos(th), r * std::sin(th)};
            ang += bubble_U(y) * y.x * kernel_Z(1, y);
        }
        m_val += 0.5 * (lb - la) * gl.weights[q] * r * r * ang * (2.0 * M_PI / nt);
    }
    const double tail =
        -32.0 * M_PI *
        0.5 * (1.0 / (1.0 + R * R) - 0.5 / ((1.0 + R * R) * (1.0 + R * R)));
    m_val += tail;
    CHECK(m_val == doctest::Approx(-8.0 * M_PI).epsilon(1e-6));
}
