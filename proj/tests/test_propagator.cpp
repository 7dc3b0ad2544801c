#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rgfp/errors.hpp"
#include "rgfp/propagator.hpp"

using namespace rgfp;
using namespace rgfp::prop;

namespace {

const auto kProfile2 = cutoff::make_profile(2.0);

}  // namespace

TEST_CASE("band specifications") {
    for (const char* s : {"single:0", "below:-1", "above:1", "range:-2:3", "full"})
        CHECK(ScaleBand::parse(s).str() == s);
    CHECK_THROWS_AS(ScaleBand::parse("single"), ConfigError);
    CHECK_THROWS_AS(ScaleBand::parse("single:x"), ConfigError);
    CHECK_THROWS_AS(ScaleBand::parse("range:2:1"), ConfigError);
    CHECK_THROWS_AS(ScaleBand::parse("middle:0"), ConfigError);
    CHECK_THROWS_AS(ScaleBand::parse(""), ConfigError);
}

TEST_CASE("Riesz constant") {
    CHECK(riesz_constant(1, 0.5) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(riesz_constant(2, 1.0) == doctest::Approx(0.5 / std::numbers::pi).epsilon(1e-15));
    CHECK(riesz_constant(3, 2.0) == doctest::Approx(0.25 / std::numbers::pi).epsilon(1e-15));
    CHECK_THROWS_AS(riesz_constant(1, 1.0), DomainError);
    CHECK_THROWS_AS(riesz_constant(2, 0.0), DomainError);
    CHECK_THROWS_AS(riesz_constant(4, 1.0), DomainError);
    const auto p = ModelParams::make(1, 4, 0.0);
    CHECK(eval(ScaleBand::full(), p, kProfile2, 1.0) == doctest::Approx(0.398942280401433).epsilon(1e-14));
    CHECK_THROWS_AS(eval(ScaleBand::full(), p, kProfile2, 0.0), DomainError);
    CHECK_THROWS_AS(eval(ScaleBand::single(0), p, kProfile2, -1.0), DomainError);
}

TEST_CASE("momentum weights") {
    const auto p = ModelParams::make(2, 4, 0.0, 3.0);
    for (double k : {0.01, 0.3, 0.9, 2.0, 7.0}) {
        const double b = momentum_weight(ScaleBand::below(0), p, kProfile2, k);
        const double a = momentum_weight(ScaleBand::above(1), p, kProfile2, k);
        CHECK(a + b == doctest::Approx(1.0).epsilon(1e-15));
        const double r = momentum_weight(ScaleBand::range(-1, 1), p, kProfile2, k);
        const double s = momentum_weight(ScaleBand::single(0), p, kProfile2, k) +
                         momentum_weight(ScaleBand::single(1), p, kProfile2, k);
        CHECK(r == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("single bands are self-similar") {
    for (int d = 1; d <= 3; ++d) {
        const auto p = ModelParams::make(d, 4, 0.01, 2.0);
        for (long h : {-2L, 1L, 3L})
            for (double y : {0.0, 0.4, 1.7, 5.0}) {
                const double x = y * std::pow(2.0, -static_cast<double>(h));
                const double lhs = eval(ScaleBand::single(h), p, kProfile2, x);
                const double rhs = band_scale(p, h) * eval(ScaleBand::single(0), p, kProfile2, y);
                CHECK(std::fabs(lhs - rhs) < 1e-12 * band_scale(p, h));
            }
    }
}

TEST_CASE("band decomposition") {
    for (int d = 1; d <= 3; ++d) {
        const auto p = ModelParams::make(d, 4, 0.0, 2.0);
        for (double x : {0.3, 1.0, 4.2}) {
            const double b1 = eval(ScaleBand::below(1), p, kProfile2, x);
            const double b0 = eval(ScaleBand::below(0), p, kProfile2, x);
            const double s1 = eval(ScaleBand::single(1), p, kProfile2, x);
            CHECK(std::fabs(b1 - b0 - s1) < 1e-12);
            const double r = eval(ScaleBand::range(-1, 2), p, kProfile2, x);
            double s = 0.0;
            for (long h = 0; h <= 2; ++h) s += eval(ScaleBand::single(h), p, kProfile2, x);
            CHECK(std::fabs(r - s) < 1e-12);
            const double full = eval(ScaleBand::full(), p, kProfile2, x);
            const double above = eval(ScaleBand::above(1), p, kProfile2, x);
            CHECK(std::fabs(above + b0 - full) < 1e-13);
        }
    }
}

TEST_CASE("below bands scale") {
    const auto p = ModelParams::make(3, 4, 0.02, 2.0);
    for (double y : {0.0, 0.5, 2.0, 9.0}) {
        const double lhs = eval(ScaleBand::below(-1), p, kProfile2, 2.0 * y);
        const double rhs = band_scale(p, -1) * eval(ScaleBand::below(0), p, kProfile2, y);
        CHECK(std::fabs(lhs - rhs) < 1e-12 * band_scale(p, -1));
    }
}

TEST_CASE("stretched-exponential fit on synthetic data") {
    std::vector<double> xs, vs;
    for (double x = 1.0; x <= 150.0; x += 0.01) {
        xs.push_back(x);
        vs.push_back(3.0 * std::exp(-2.0 * std::sqrt(x / 2.0)) * std::cos(x));
    }
    const auto f = fit_stretched_exponential(xs, vs, Window{2.0, 100.0}, 2.0);
    CHECK(f.sigma_fit == doctest::Approx(0.5).epsilon(0.02));
    // sigma and c trade off against each other; the fixed-sigma fit below pins c tightly.
    CHECK(f.c == doctest::Approx(2.0).epsilon(0.05));
    CHECK(f.C >= f.C_ls);
    for (size_t i = 0; i < xs.size(); ++i)
        if (xs[i] >= 2.0 && xs[i] <= 100.0)
            CHECK(std::fabs(vs[i]) <= f.C * std::exp(-f.c * std::pow(xs[i] / 2.0, f.sigma_fit)) * (1 + 1e-12));
    FitOptions fixed;
    fixed.fixed_sigma = 0.5;
    CHECK(fit_stretched_exponential(xs, vs, Window{2.0, 100.0}, 2.0, fixed).c == doctest::Approx(2.0).epsilon(0.01));
    std::vector<double> grow;
    for (double x : xs) grow.push_back(std::exp(0.1 * x) * std::cos(x));
    CHECK_THROWS_AS(fit_stretched_exponential(xs, grow, Window{2.0, 100.0}, 2.0), FitError);
    CHECK_THROWS_AS(fit_stretched_exponential(xs, vs, Window{200.0, 300.0}, 2.0), FitError);
}

TEST_CASE("propagator decay fit") {
    const auto p = ModelParams::make(1, 4, 0.001, 2.0, 2.0);
    const Window w{8.0, 500.0};
    const auto f = decay_fit(ScaleBand::single(0), p, kProfile2, w);
    CHECK(f.c > 0.0);
    CHECK(f.sigma_fit > 0.3);
    CHECK(f.sigma_fit < 0.6);
    CHECK(f.n_points >= 4);
    CHECK_THROWS_AS(decay_fit(ScaleBand::full(), p, kProfile2, w), DomainError);
    CHECK_THROWS_AS(decay_fit(ScaleBand::single(0), p, kProfile2, Window{5.0, 1.0}), DomainError);
    const auto sw = stretched_window(p, 2.0, 4.0, 1);
    CHECK(sw.lo == doctest::Approx(4.0));
    CHECK(sw.hi == doctest::Approx(16.0));
}

TEST_CASE("zero mode of single bands") {
    for (int d = 1; d <= 3; ++d) {
        const auto p = ModelParams::make(d, 4, 0.001, 2.0);
        const auto prof = cutoff::make_profile(2.0);
        CHECK(verify_zero_mode(0, p, prof) < 1e-10);
    }
    const auto p = ModelParams::make(1, 4, 0.001, 3.0, 3.0);
    CHECK(verify_zero_mode(2, p, cutoff::make_profile(3.0)) < 1e-10);
}
