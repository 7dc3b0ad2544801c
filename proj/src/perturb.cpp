#include "rgfp/perturb.hpp"

#include <cmath>
#include <json.hpp>

#include "rgfp/errors.hpp"
#include "rgfp/io.hpp"
#include "rgfp/propagator.hpp"
#include "rgfp/quadrature.hpp"

namespace rgfp::perturb {

namespace {

double measure(int d) { return quad::sphere_area(d) / std::pow(2.0 * M_PI, d); }

}  // namespace

long overlapping_bands(double gamma) {
    long j = 0;
    while (0.5 * std::pow(gamma, static_cast<double>(j)) < 1.0) ++j;
    return j;
}

double band_overlap(const ModelParams& params, const CutoffProfile& profile, long j, double power) {
    const double g = params.gamma;
    const double lo = std::max(0.5 / g, 0.5 * std::pow(g, static_cast<double>(j - 1)));
    const double hi = std::min(1.0, std::pow(g, static_cast<double>(j)));
    if (!(hi > lo)) return 0.0;
    auto f = [&](double k) {
        return cutoff::band0(profile, g, k) * cutoff::eval_band(profile, params, j, k) * std::pow(k, -1.0 - power);
    };
    quad::Options o;
    o.abs_tol = 1e-18;
    o.rel_tol = 1e-14;
    o.initial_panels = 16;
    o.max_panels = 20000;
    return measure(params.d) * quad::integrate_adaptive(f, lo, hi, o).value;
}

double integral_J(const ModelParams& params, const CutoffProfile& profile, double shift) {
    CompensatedSum s;
    s += band_overlap(params, profile, 0, shift);
    for (long j = 1; j <= overlapping_bands(params.gamma); ++j) s += 2.0 * band_overlap(params, profile, j, shift);
    return s.value();
}

double integral_J_nearest(const ModelParams& params, const CutoffProfile& profile, double shift) {
    return band_overlap(params, profile, 0, shift) + 2.0 * band_overlap(params, profile, 1, shift);
}

double lambda_star_first_order(const ModelParams& params, const CutoffProfile& profile) {
    if (params.N == 8) throw DomainError("N=8 excluded: I_2 vanishes");
    const double I2 = -4.0 * (params.N - 8) * integral_J(params, profile, 0.0);
    return -2.0 * params.eps * std::log(params.gamma) / I2;
}

Zeta2Data zeta2_data(const ModelParams& params, const CutoffProfile& profile) {
    Zeta2Data z;
    z.lambda_star = lambda_star_first_order(params, profile);
    const long jmax = overlapping_bands(params.gamma);
    for (long j = 0; j <= jmax; ++j) z.A.push_back(band_overlap(params, profile, j, 2.0 * params.eps));
    return z;
}

double zeta2_first_order(const ModelParams& params, const Zeta2Data& data, double eta2_guess) {
    CompensatedSum s;
    s += data.A.at(0);
    const double e = 2.0 * params.eps + eta2_guess;
    for (size_t j = 1; j < data.A.size(); ++j)
        s += 2.0 * std::pow(params.gamma, static_cast<double>(j) * e) * data.A[j];
    return -4.0 * (params.N - 2) * data.lambda_star * s.value();
}

double zeta2_first_order(const ModelParams& params, const CutoffProfile& profile, double eta2_guess) {
    return zeta2_first_order(params, zeta2_data(params, profile), eta2_guess);
}

Eta2Solution solve_eta2_detailed(const ModelParams& params, const CutoffProfile& profile, double tol,
                                 int max_iter) {
    params.validate();
    const Zeta2Data data = zeta2_data(params, profile);
    const double lg = std::log(params.gamma);
    auto map = [&](double eta) {
        const double z = zeta2_first_order(params, data, eta);
        if (!(1.0 + z > 0.0)) throw ConvergenceError("solve_eta2: 1 + zeta2 <= 0", eta, INFINITY);
        return -std::log1p(z) / lg;
    };
    double eta = 0.0;
    Eta2Solution out;
    for (int it = 1; it <= max_iter; ++it) {
        const double next = map(eta);
        const double step = std::fabs(next - eta);
        eta = next;
        out.iterations = it;
        if (step <= tol * std::max(1.0, std::fabs(eta))) break;
        if (it == max_iter) throw ConvergenceError("solve_eta2: no convergence", eta, step);
    }
    const double zeta2 = zeta2_first_order(params, data, eta);
    out.residual = std::fabs(eta + std::log1p(zeta2) / lg);
    Exponents& x = out.exps;
    x.delta1 = params.psi_dim();
    x.eta2 = eta;
    x.delta2 = 2.0 * params.psi_dim() + eta;
    x.zeta2 = zeta2;
    x.lambda_star = data.lambda_star;
    x.nu_star = 0.0;
    return out;
}

Exponents solve_eta2(const ModelParams& params, const CutoffProfile& profile, double tol) {
    return solve_eta2_detailed(params, profile, tol).exps;
}

Zeta1Check verify_zeta1(const ModelParams& params, const CutoffProfile& profile, long h_lo, long h_hi) {
    Zeta1Check c;
    for (long h = h_lo; h <= h_hi; ++h) {
        c.h.push_back(h);
        const double m = std::fabs(cutoff::eval_band(profile, params, h, 0.0));
        const double p = prop::verify_zero_mode(h, params, profile);
        c.momentum.push_back(m);
        c.position.push_back(p);
        c.momentum_residual = std::max(c.momentum_residual, m);
        c.position_residual = std::max(c.position_residual, p);
    }
    return c;
}

std::string exponents_json(const Exponents& exps, const ModelParams& params, const CutoffProfile& profile,
                           int digits) {
    nlohmann::ordered_json j;
    j["delta1"] = round_sig(exps.delta1, digits);
    j["delta2"] = round_sig(exps.delta2, digits);
    j["eta2"] = round_sig(exps.eta2, digits);
    j["zeta2"] = round_sig(exps.zeta2, digits);
    j["lambda_star"] = round_sig(exps.lambda_star, digits);
    j["eps"] = params.eps;
    j["d"] = params.d;
    j["N"] = params.N;
    j["gamma"] = params.gamma;
    j["s"] = params.gevrey_s;
    j["profile_id"] = profile.id();
    return j.dump();
}

}  // namespace rgfp::perturb
