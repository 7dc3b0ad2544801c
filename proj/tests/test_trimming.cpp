#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rgfp/errors.hpp"
#include "rgfp/trimming.hpp"

using namespace rgfp;
using namespace rgfp::trim;

TEST_CASE("box integration and localization") {
    auto g2 = [](const Point& w) { return std::exp(-w[0] * w[0] - w[1] * w[1]); };
    CHECK(integrate_box(g2, 2, 8.0, 1e-12) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
    const TestKernel101 k{1, [](const Point& w) { return std::exp(-w[0] * w[0]); }, 9.0, "g"};
    CHECK(localize_101(k) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(k.G(Point{1, 0, 0}, Point{1.5, 0, 0}) == doctest::Approx(std::exp(-0.25)));
    CHECK_THROWS_AS(integrate_box(g2, 2, 0.0, 1e-12), DomainError);
    CHECK_THROWS_AS(interpolate_101(k, 1), DomainError);
}

TEST_CASE("101 split identity over the battery") {
    const auto f = standard_fields_101();
    for (const auto& k : battery_101()) {
        const auto s = split_101(k, f.phi, f.psi, f.dpsi, f.radius);
        CHECK_MESSAGE(s.residual() < 1e-12, k.name);
        CHECK_MESSAGE(std::fabs(s.direct) > 1e-3, k.name);
    }
}

TEST_CASE("101 interpolated kernel: moments and norm bound") {
    for (const auto& k : battery_101()) {
        const auto gi = interpolate_101(k, 0);
        CHECK_MESSAGE(localize_101(gi, 1e-11) == doctest::Approx(first_moment_101(k, 0)).epsilon(1e-8), k.name);
        const double n = norm_101(gi, 1e-10);
        const double b = moment_bound_101(k, 1e-10);
        CHECK_MESSAGE(n <= b * (1.0 + 1e-8), k.name);
    }
    // Nonnegative kernels saturate the bound.
    const auto k = battery_101().front();
    CHECK(norm_101(interpolate_101(k, 0), 1e-10) == doctest::Approx(moment_bound_101(k, 1e-10)).epsilon(1e-8));
}

TEST_CASE("narrow kernels localize to their integral") {
    const TestKernel101 k{1, [](const Point& w) { return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-4.0 * w[0] * w[0]); }, 5.0,
                          "unit"};
    CHECK(localize_101(k) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("101 interpolation in two dimensions") {
    const TestKernel101 k{2, [](const Point& w) { return std::exp(-(w[0] - 0.3) * (w[0] - 0.3) - w[1] * w[1]); }, 7.0,
                          "gauss2-shifted"};
    const auto gi = interpolate_101(k, 0);
    CHECK(localize_101(gi, 1e-9) == doctest::Approx(first_moment_101(k, 0, 1e-10)).epsilon(1e-6));
    CHECK(first_moment_101(k, 0, 1e-10) == doctest::Approx(0.3 * std::numbers::pi).epsilon(1e-8));
}

TEST_CASE("012 split identity") {
    const auto f = standard_fields_012();
    for (const auto& k : battery_012()) {
        const auto s = split_012(k, f.J, f.A, f.dA, f.B, f.dB, f.radius);
        CHECK_MESSAGE(s.residual() < 1e-12, k.name);
    }
}

TEST_CASE("012 interpolated kernels respect the moment bound") {
    const auto k = battery_012()[1];
    for (Slot s : {Slot::first, Slot::second}) {
        const double n = norm_012(interpolate_012(k, s, 0), 1e-9);
        const double b = moment_bound_012(k, s, 1e-9);
        CHECK(n <= b * (1.0 + 1e-6));
        CHECK(n == doctest::Approx(b).epsilon(1e-6));
    }
}

TEST_CASE("field forms need d = 1") {
    const TestKernel101 k{2, [](const Point& w) { return std::exp(-w[0] * w[0] - w[1] * w[1]); }, 7.0, "g2"};
    const auto f = standard_fields_101();
    CHECK_THROWS_AS(split_101(k, f.phi, f.psi, f.dpsi, f.radius), DomainError);
}
