#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "rgfp/errors.hpp"
#include "rgfp/perturb.hpp"
#include "rgfp/quadrature.hpp"

using namespace rgfp;
using namespace rgfp::perturb;

namespace {

double J_closed(int d, double gamma) {
    return quad::sphere_area(d) * std::log(gamma) / std::pow(2.0 * std::numbers::pi, d);
}

}  // namespace

TEST_CASE("overlapping bands") {
    CHECK(overlapping_bands(2.0) == 1);
    CHECK(overlapping_bands(3.0) == 1);
    CHECK(overlapping_bands(1.5) == 2);
    CHECK(overlapping_bands(1.2) == 4);
    const auto p = ModelParams::make(1, 4, 0.0, 2.0);
    const auto prof = cutoff::make_profile(2.0);
    CHECK(band_overlap(p, prof, 2, 0.0) == 0.0);
    CHECK(band_overlap(p, prof, 0, 0.0) > 0.0);
}

TEST_CASE("bubble integral closed form") {
    for (int d = 1; d <= 3; ++d)
        for (double g : {1.5, 2.0, 3.0})
            for (double s : {2.0, 3.0}) {
                const auto p = ModelParams::make(d, 4, 0.0, g, s);
                const auto prof = cutoff::make_profile(s);
                CHECK(integral_J(p, prof, 0.0) == doctest::Approx(J_closed(d, g)).epsilon(1e-13));
                const double nearest = integral_J_nearest(p, prof, 0.0);
                if (g >= 2.0)
                    CHECK(nearest == doctest::Approx(J_closed(d, g)).epsilon(1e-13));
                else
                    CHECK(std::fabs(nearest / J_closed(d, g) - 1.0) > 1e-6);
            }
}

TEST_CASE("first-order coupling") {
    const auto prof = cutoff::make_profile(2.0);
    for (int d = 1; d <= 3; ++d)
        for (int N : {4, 6, 10}) {
            const auto p = ModelParams::make(d, N, 0.01, 2.0);
            const double expect = 0.01 * std::pow(2.0 * std::numbers::pi, d) / (2.0 * (N - 8) * quad::sphere_area(d));
            CHECK(lambda_star_first_order(p, prof) == doctest::Approx(expect).epsilon(1e-12));
        }
    CHECK(lambda_star_first_order(ModelParams::make(3, 4, 0.01), prof) == doctest::Approx(-0.024674011).epsilon(1e-8));
    ModelParams bad = ModelParams::make(1, 4, 0.01);
    bad.N = 8;
    CHECK_THROWS_AS(lambda_star_first_order(bad, prof), DomainError);
}

TEST_CASE("anomalous dimension to first order") {
    for (int d = 1; d <= 3; ++d)
        for (int N : {4, 6, 10})
            for (double g : {1.5, 2.0}) {
                const auto p = ModelParams::make(d, N, 1e-3, g, 2.0);
                const auto prof = cutoff::make_profile(2.0);
                const auto sol = solve_eta2_detailed(p, prof);
                const double target = 2.0 * (N - 2) / (N - 8.0);
                CHECK(sol.exps.eta2 / 1e-3 == doctest::Approx(target).epsilon(0.01));
                CHECK(sol.residual < 1e-14);
                CHECK(sol.exps.delta2 == doctest::Approx(2 * p.psi_dim() + sol.exps.eta2));
                CHECK(sol.exps.delta1 == p.psi_dim());
            }
}

TEST_CASE("Gaussian point") {
    const auto p = ModelParams::make(2, 6, 0.0);
    const auto prof = cutoff::make_profile(2.0);
    const auto e = solve_eta2(p, prof);
    CHECK(e.eta2 == 0.0);
    CHECK(e.zeta2 == 0.0);
    CHECK(e.lambda_star == 0.0);
}

TEST_CASE("eta2 is odd in eps at leading order") {
    const auto prof = cutoff::make_profile(2.0);
    const double up = solve_eta2(ModelParams::make(1, 6, 2e-3), prof).eta2;
    const double dn = solve_eta2(ModelParams::make(1, 6, -2e-3), prof).eta2;
    CHECK(std::fabs(up + dn) < 0.02 * std::fabs(up));
}

TEST_CASE("zeta1 vanishes") {
    const auto p = ModelParams::make(1, 4, 0.001);
    const auto c = verify_zeta1(p, cutoff::make_profile(2.0), 0, 2);
    CHECK(c.h.size() == 3);
    CHECK(c.momentum_residual == 0.0);
    CHECK(c.position_residual < 1e-10);
}

TEST_CASE("exponent record") {
    const auto p = ModelParams::make(1, 4, 0.001);
    const auto prof = cutoff::make_profile(2.0);
    const auto e = solve_eta2(p, prof);
    const auto j = nlohmann::json::parse(exponents_json(e, p, prof));
    for (const char* k : {"delta1", "delta2", "eta2", "zeta2", "lambda_star", "eps", "d", "N", "gamma", "s", "profile_id"})
        CHECK(j.contains(k));
    CHECK(j["profile_id"] == prof.id());
    CHECK(j["eta2"].get<double>() == doctest::Approx(e.eta2).epsilon(1e-11));
}
