#include <doctest.h>

#include <cmath>
#include <random>

#include "vhc/helix.hpp"

using namespace vhc;

TEST_CASE("base point and period") {
    HelixSpec spec(1.0, 0.0, 1.0, 1.0);
    const Vec3 p0 = helix_point(spec, 0.0, 0.0);
    CHECK(p0.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p0.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p0.z == doctest::Approx(0.0).epsilon(1e-14));

    // one full turn: s = 2 pi sqrt(2), rise 2 pi h
    const double s1 = 2.0 * M_PI * std::sqrt(2.0);
    const Vec3 p1 = helix_point(spec, s1, 0.0);
    CHECK(p1.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(p1.y) < 1e-12);
    CHECK(p1.z == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("rotation-translation recovery at tau = 1") {
    HelixSpec spec(1.0, 0.0, 1.0, 1.0);
    const double q = std::sqrt(2.0);
    const Vec3 p = helix_point(spec, 0.0, 1.0);
    const Vec2 rotated = rotate(-spec.sigma() / q, {1.0, 0.0});
    CHECK(p.x == doctest::Approx(rotated.x).epsilon(1e-14));
    CHECK(p.y == doctest::Approx(rotated.y).epsilon(1e-14));
    CHECK(p.z == doctest::Approx(spec.beta() / q).epsilon(1e-14));
}

TEST_CASE("rotation identity over random specs and times") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = u(rng), b = u(rng);
        if (a * a + b * b < 1e-4) continue;
        HelixSpec spec(a, b, 0.5 + std::fabs(u(rng)), u(rng));
        const double s = 3.0 * u(rng), tau = 3.0 * u(rng);
        const double q = std::sqrt(spec.radius() * spec.radius() + spec.h * spec.h);
        const Vec3 lhs = helix_point(spec, s, tau);
        const Vec3 base = helix_point(spec, s, 0.0);
        const Vec2 rot = rotate(-spec.sigma() * tau / q, {base.x, base.y});
        CHECK(std::fabs(lhs.x - rot.x) < 1e-12);
        CHECK(std::fabs(lhs.y - rot.y) < 1e-12);
        CHECK(std::fabs(lhs.z - (base.z + spec.beta() * tau / q)) < 1e-12);
    }
}

TEST_CASE("arclength parametrization") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = 0.3 + std::fabs(u(rng)), b = u(rng);
        HelixSpec spec(a, b, 0.4 + std::fabs(u(rng)), u(rng));
        const double s = 4.0 * u(rng), tau = u(rng);
        const double ds = 1e-5;
        const Vec3 d =
            (helix_point(spec, s + ds, tau) - helix_point(spec, s - ds, tau)) /
            (2.0 * ds);
        CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("frenet closed forms") {
    HelixSpec unit(1.0, 0.0, 1.0, 2.0);
    const FrenetSample f = frenet(unit, 0.7, 0.3);
    CHECK(f.curvature == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(f.torsion == doctest::Approx(0.5).epsilon(1e-13));

    HelixSpec spec345(3.0, 4.0, 2.0, 1.0);  // R = 5
    const FrenetSample g = frenet(spec345, -1.2, 0.0);
    CHECK(g.curvature == doctest::Approx(5.0 / 29.0).epsilon(1e-13));
    CHECK(g.torsion == doctest::Approx(2.0 / 29.0).epsilon(1e-13));
}

TEST_CASE("frame orthonormality") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = 0.2 + std::fabs(u(rng)), b = u(rng);
        HelixSpec spec(a, b, 0.3 + std::fabs(u(rng)), u(rng));
        const FrenetSample f = frenet(spec, 2.0 * u(rng), u(rng));
        CHECK(std::fabs(f.tangent.norm() - 1.0) < 1e-12);
        CHECK(std::fabs(f.normal.norm() - 1.0) < 1e-12);
        CHECK(std::fabs(f.binormal.norm() - 1.0) < 1e-12);
        CHECK(std::fabs(f.tangent.dot(f.normal)) < 1e-12);
        CHECK(std::fabs(f.tangent.dot(f.binormal)) < 1e-12);
        CHECK(std::fabs(f.normal.dot(f.binormal)) < 1e-12);
    }
}

TEST_CASE("small radius limit reports curvature ~ R/h^2") {
    HelixSpec spec(1e-8, 0.0, 1.0, 1.0);
    const FrenetSample f = frenet(spec, 0.0, 0.0);
    CHECK(f.curvature == doctest::Approx(1e-8).epsilon(1e-6));
}

TEST_CASE("degenerate base point rejected") {
    CHECK_THROWS_AS(HelixSpec(0.0, 0.0, 1.0, 1.0), DegeneratePoint);
}

TEST_CASE("binormal flow residual") {
    HelixSpec plus(1.0, 0.0, 1.0, 1.0);
    CHECK(binormal_residual(plus, 0.4, 0.2, 1e-4) < 1e-6);
    HelixSpec minus(1.0, 0.0, 1.0, -1.0);
    CHECK(binormal_residual(minus, 0.4, 0.2, 1e-4) < 1e-6);
}

TEST_CASE("binormal residual is second order in dt") {
    HelixSpec spec(1.3, -0.4, 0.8, 1.7);
    const double r1 = binormal_residual(spec, 1.0, 0.5, 2e-3);
    const double r2 = binormal_residual(spec, 1.0, 0.5, 1e-3);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("speeds satisfy sigma R^2 = beta h") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        HelixSpec spec(u(rng), u(rng) - 1.5, u(rng), u(rng) - 1.5);
        const double R = spec.radius();
        CHECK(spec.sigma() * R * R ==
              doctest::Approx(spec.beta() * spec.h).epsilon(1e-13));
    }
}
