#pragma once

#include <string>
#include <vector>

#include "rgfp/core.hpp"
#include "rgfp/cutoff.hpp"

namespace rgfp::perturb {

using cutoff::CutoffProfile;

// S_d/(2pi)^d Int f_0(k) f_j(k) k^(-1-power) dk: overlap of band 0 with band j >= 0.
double band_overlap(const ModelParams& params, const CutoffProfile& profile, long j, double power);

// Largest j whose band overlaps band 0 (bands j and 0 overlap iff gamma^(j-1)/2 < 1).
long overlapping_bands(double gamma);

// S_d/(2pi)^d Int f_0 (f_0 + 2 sum_{j>=1} f_j) / k^(d + shift) d^dk. Every band overlapping f_0
// enters, which reduces to f_0^2 + 2 f_0 f_1 for gamma >= 2; at shift 0 the value is
// S_d ln(gamma)/(2pi)^d for every gamma > 1.
double integral_J(const ModelParams& params, const CutoffProfile& profile, double shift);
// Variant keeping only f_0^2 + 2 f_0 f_1 (exact for gamma >= 2 only).
double integral_J_nearest(const ModelParams& params, const CutoffProfile& profile, double shift);

// lambda* = -2 eps ln(gamma) / I_2 with I_2 = -4(N-8) J(0).
double lambda_star_first_order(const ModelParams& params, const CutoffProfile& profile);

// Precomputed overlaps A_j = band_overlap(j, 2 eps) for the zeta_2 tree values.
struct Zeta2Data {
    double lambda_star = 0.0;
    std::vector<double> A;  // A[0..jmax]
};
Zeta2Data zeta2_data(const ModelParams& params, const CutoffProfile& profile);

// zeta_2 = -4(N-2) lambda* [A_0 + 2 sum_{j>=1} gamma^(j(2eps+eta2)) A_j].
double zeta2_first_order(const ModelParams& params, const Zeta2Data& data, double eta2_guess);
double zeta2_first_order(const ModelParams& params, const CutoffProfile& profile, double eta2_guess);

struct Eta2Solution {
    Exponents exps;
    int iterations = 0;
    double residual = 0.0;  // |eta2 + log_gamma(1 + zeta2(eta2))|
};

// Plain fixed-point iteration eta2 <- -log_gamma(1 + zeta2(eta2)) from eta2 = 0.
Eta2Solution solve_eta2_detailed(const ModelParams& params, const CutoffProfile& profile, double tol = 1e-15,
                                 int max_iter = 200);
Exponents solve_eta2(const ModelParams& params, const CutoffProfile& profile, double tol = 1e-15);

struct Zeta1Check {
    std::vector<long> h;
    std::vector<double> momentum;  // |f_h(0)|
    std::vector<double> position;  // |Int p_h(x) d^dx| by position-space quadrature
    double momentum_residual = 0.0;
    double position_residual = 0.0;
    double residual() const { return momentum_residual > position_residual ? momentum_residual : position_residual; }
};

Zeta1Check verify_zeta1(const ModelParams& params, const CutoffProfile& profile, long h_lo = 0, long h_hi = 5);

// One-line JSON record with keys delta1, delta2, eta2, zeta2, lambda_star, eps, d, N, gamma, s,
// profile_id; numbers rounded to `digits` significant digits.
std::string exponents_json(const Exponents& exps, const ModelParams& params, const CutoffProfile& profile,
                           int digits = 12);

}  // namespace rgfp::perturb
