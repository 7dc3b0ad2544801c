#include <doctest.h>

#include <cmath>

#include "rgfp/cutoff.hpp"
#include "rgfp/errors.hpp"

using namespace rgfp;
using namespace rgfp::cutoff;

TEST_CASE("profile construction") {
    CHECK_THROWS_AS(make_profile(1.0), DomainError);
    CHECK_THROWS_AS(make_profile(0.5), DomainError);
    const auto p = make_profile(2.0);
    CHECK(p.power == doctest::Approx(1.0));
    CHECK(p.normalization == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK(p.id() == "gevrey-step(s=2)");
}

TEST_CASE("plateaus are exact") {
    for (double s : {1.5, 2.0, 3.0}) {
        const auto p = make_profile(s);
        CHECK(eval(p, 0.0) == 1.0);
        CHECK(eval(p, 0.3) == 1.0);
        CHECK(eval(p, 0.5) == 1.0);
        CHECK(eval(p, 1.0) == 0.0);
        CHECK(eval(p, 1.5) == 0.0);
        CHECK(eval(p, 0.75) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(eval(p, 0.6) > eval(p, 0.9));
    }
}

TEST_CASE("smooth step matches the mollifier ratio") {
    const auto p = make_profile(2.0);
    auto m = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
    for (double r = 0.51; r < 1.0; r += 0.01) {
        const double u = 2 * r - 1;
        CHECK(eval(p, r) == doctest::Approx(m(1 - u) / (m(1 - u) + m(u))).epsilon(1e-13));
    }
}

TEST_CASE("derivatives agree with finite differences") {
    const auto p = make_profile(2.0);
    const double h = 1e-5;
    for (double r : {0.55, 0.62, 0.75, 0.88, 0.97}) {
        const double d1 = (eval(p, r + h) - eval(p, r - h)) / (2 * h);
        const double d2 = (eval(p, r + h) - 2 * eval(p, r) + eval(p, r - h)) / (h * h);
        CHECK(eval_derivative(p, r, 1) == doctest::Approx(d1).epsilon(1e-6));
        CHECK(eval_derivative(p, r, 2) == doctest::Approx(d2).epsilon(1e-4));
    }
    CHECK(eval_derivative(p, 0.3, 1) == 0.0);
    CHECK(eval_derivative(p, 1.2, 2) == 0.0);
    CHECK(std::isfinite(eval_derivative(p, 0.5000001, 2)));
    CHECK(std::isfinite(eval_derivative(p, 0.9999999, 2)));
    CHECK_THROWS_AS(eval_derivative(p, 0.7, 3), DomainError);
}

TEST_CASE("bands") {
    const auto prof = make_profile(2.0);
    const auto params = ModelParams::make(1, 4, 0.0);
    CHECK(eval_band(prof, params, 0, 0.0) == 0.0);
    CHECK(eval_band(prof, params, 0, 0.9) == eval(prof, 0.9));
    CHECK(eval_band(prof, params, 0, 0.2) == 0.0);   // below gamma^-1 / 2
    CHECK(eval_band(prof, params, 0, 1.01) == 0.0);
    for (double r : {0.3, 0.7, 1.3}) CHECK(eval_band(prof, params, 3, 8.0 * r) == eval_band(prof, params, 0, r));
}

TEST_CASE("bands telescope to one") {
    const auto prof = make_profile(2.0);
    const auto params = ModelParams::make(1, 4, 0.0);
    for (double r = 1e-6; r <= 1e6; r *= 1.7) {
        double s = 0.0;
        for (long h = -40; h <= 40; ++h) s += eval_band(prof, params, h, r);
        CHECK(std::fabs(s - 1.0) < 1e-14);
    }
}
