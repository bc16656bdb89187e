#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fd.hpp"
#include "vhc/jet.hpp"
#include "vhc/reduced_operator.hpp"

using namespace vhc;
using vhc::testing::fd_divergence_form_L;

namespace {

// analytic test fields carrying exact jets
struct TestField {
    std::function<double(const Vec2&)> value;
    std::function<ScalarJet(const Vec2&)> jet;
};

TestField gaussian(Vec2 c, double w) {
    auto value = [=](const Vec2& x) {
        return std::exp(-(x - c).norm2() / (w * w));
    };
    auto jet = [=](const Vec2& x) {
        ScalarJet j;
        const Vec2 d = x - c;
        const double v = std::exp(-d.norm2() / (w * w));
        j.value = v;
        j.grad = d * (-2.0 * v / (w * w));
        const double s = 2.0 / (w * w);
        j.hess = Mat2{v * (s * s * d.x * d.x - s), v * s * s * d.x * d.y,
                      v * s * s * d.x * d.y, v * (s * s * d.y * d.y - s)};
        return j;
    };
    return {value, jet};
}

TestField cubic_poly() {
    auto value = [](const Vec2& x) {
        return 1.0 + x.x - 2.0 * x.y + 0.5 * x.x * x.y + x.x * x.x * x.y;
    };
    auto jet = [](const Vec2& x) {
        ScalarJet j;
        j.value = 1.0 + x.x - 2.0 * x.y + 0.5 * x.x * x.y + x.x * x.x * x.y;
        j.grad = {1.0 + 0.5 * x.y + 2.0 * x.x * x.y,
                  -2.0 + 0.5 * x.x + x.x * x.x};
        j.hess = Mat2{2.0 * x.y, 0.5 + 2.0 * x.x, 0.5 + 2.0 * x.x, 0.0};
        return j;
    };
    return {value, jet};
}

}  // namespace

TEST_CASE("K matrix closed forms") {
    const Mat2 K0 = k_matrix({0.0, 0.0}, 1.7);
    CHECK(K0.a11 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(K0.a22 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(K0.a12 == doctest::Approx(0.0).epsilon(1e-15));

    const Mat2 K1 = k_matrix({1.0, 0.0}, 1.0);
    CHECK(K1.a11 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(K1.a12 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(K1.a22 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("K eigenvalues are h^2/(h^2+|x|^2) and 1") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const Vec2 x{u(rng), u(rng)};
        const double h = 0.3 + std::fabs(u(rng));
        const Mat2 K = k_matrix(x, h);
        // symbolic 2x2 eigenvalues
        const double tr = K.trace(), det = K.det();
        const double disc = std::sqrt(tr * tr / 4.0 - det);
        const double lo = tr / 2.0 - disc, hi = tr / 2.0 + disc;
        const double expected = h * h / (h * h + x.norm2());
        CHECK(lo == doctest::Approx(std::min(expected, 1.0)).epsilon(1e-12));
        CHECK(hi == doctest::Approx(std::max(expected, 1.0)).epsilon(1e-12));
        CHECK(det == doctest::Approx(expected).epsilon(1e-12));
        CHECK(K.a12 == doctest::Approx(K.a21).epsilon(1e-15));
    }
}

TEST_CASE("L annihilates constants and matches the first-order coefficient") {
    CHECK(apply_L(ScalarJet::constant(3.7), {0.4, -1.1}, 0.9) == 0.0);

    // first-order coefficient at x = (1,0), h = 1: -(1/2)(2/2 + 1) = -1
    ScalarJet x1;
    x1.value = 1.0;
    x1.grad = {1.0, 0.0};
    CHECK(apply_L(x1, {1.0, 0.0}, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("explicit L equals the divergence form on a function suite") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const std::vector<TestField> suite = {
        gaussian({0.3, -0.2}, 0.8), gaussian({-1.0, 0.5}, 1.3), cubic_poly()};
    for (const auto& f : suite) {
        for (int trial = 0; trial < 25; ++trial) {
            const Vec2 x{u(rng), u(rng)};
            const double h = 0.5 + std::fabs(u(rng));
            const double exact = apply_L(f.jet(x), x, h);
            auto grad = [&](const Vec2& p) { return f.jet(p).grad; };
            const double oracle = fd_divergence_form_L(grad, x, h);
            CHECK(std::fabs(exact - oracle) <
                  1e-6 * (1.0 + std::fabs(exact)));
        }
    }
}

TEST_CASE("frame chart closed forms") {
    const double h = 0.8, R = 1.4;
    const FramedChart onaxis = frame_chart({R, 0.0}, h);
    const double q = std::sqrt(h * h + R * R);
    CHECK(onaxis.A.a11 == doctest::Approx(h / q).epsilon(1e-14));
    CHECK(onaxis.A.a12 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(onaxis.A.a21 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(onaxis.A.a22 == doctest::Approx(1.0).epsilon(1e-14));

    const FramedChart vertical = frame_chart({0.0, R}, h);
    CHECK(vertical.A.a11 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(vertical.A.a12 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(vertical.A.a21 == doctest::Approx(h / q).epsilon(1e-14));
    CHECK(vertical.A.a22 == doctest::Approx(0.0).epsilon(1e-14));

    const FramedChart any = frame_chart({0.6, -0.8}, 1.0);
    CHECK(any.detA == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(any.A.det() == doctest::Approx(any.detA).epsilon(1e-13));
    const Mat2 prod = any.A * any.Ainv;
    CHECK(std::fabs(prod.a11 - 1.0) < 1e-12);
    CHECK(std::fabs(prod.a22 - 1.0) < 1e-12);
    CHECK(std::fabs(prod.a12) < 1e-12);
    CHECK(std::fabs(prod.a21) < 1e-12);

    CHECK_THROWS_AS(frame_chart({0.0, 0.0}, 1.0), DegeneratePoint);
}

TEST_CASE("conjugation: L in x equals Delta_z + B in z") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<TestField> suite = {gaussian({0.9, 0.1}, 0.7),
                                          gaussian({1.2, -0.3}, 1.1)};
    for (const auto& f : suite) {
        for (int trial = 0; trial < 25; ++trial) {
            const Vec2 P{1.0 + 0.4 * u(rng), 0.5 * u(rng)};
            const double h = 0.6 + 0.5 * std::fabs(u(rng));
            const FramedChart chart = frame_chart(P, h);
            const Vec2 z{0.4 * u(rng), 0.4 * u(rng)};
            const Vec2 x = P + chart.A * z;

            const double lhs = apply_L(f.jet(x), x, h);
            const ScalarJet jz = pullback_affine(f.jet(x), chart.A);
            const double rhs = jz.laplacian() + apply_B(jz, z, chart);
            CHECK(std::fabs(lhs - rhs) < 1e-6 * (1.0 + std::fabs(lhs)));
        }
    }
}

TEST_CASE("B at the origin kills constants and matches the leading z1 coefficient") {
    const FramedChart chart = frame_chart({1.2, 0.0}, 0.9);
    CHECK(apply_B(ScalarJet::constant(2.0), {0.0, 0.0}, chart) == 0.0);

    // coefficient of d_{z1 z1}: apply B to a jet with only that entry set
    ScalarJet probe;
    probe.hess = Mat2{1.0, 0.0, 0.0, 0.0};
    const double R = chart.R, h = chart.h;
    const double lead = -2.0 * R * h / std::pow(h * h + R * R, 1.5);
    for (double z1 : {1e-3, -2e-3, 5e-4}) {
        const double got = apply_B(probe, {z1, 0.0}, chart);
        CHECK(std::fabs(got - lead * z1) < 2.0 * z1 * z1 + 1e-14);
    }
}
