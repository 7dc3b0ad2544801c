#pragma once

#include <vector>

#include "rgfp/core.hpp"
#include "rgfp/cutoff.hpp"
#include "rgfp/propagator.hpp"

namespace rgfp::response {

using cutoff::CutoffProfile;

// Scalar part of the free two-point function: P_{<=0}(x) + P_{>=1}(x), equal to C0 x^(alpha-d).
double free_G(const ModelParams& params, const CutoffProfile& profile, double x);
// -2N [P_{<=0}^2 + 2 P_{<=0} P_{>=1} + P_{>=1}^2].
double free_F(const ModelParams& params, const CutoffProfile& profile, double x);

struct ScaleSumSpec {
    long h_min = 0;
    long h_max = -1;            // h_min > h_max is the empty window
    bool auto_window = true;    // choose the window from x; h_min/h_max are then ignored
    bool check_boundary = true;
    double boundary_tol = 1e-10;  // allowed omitted mass relative to |value|

    static ScaleSumSpec fixed(long lo, long hi, bool check = true) {
        ScaleSumSpec s;
        s.h_min = lo;
        s.h_max = hi;
        s.auto_window = false;
        s.check_boundary = check;
        return s;
    }
};

struct ScaleSumResult {
    double value = 0.0;
    double boundary_mass = 0.0;  // geometric estimate of the mass below h_min plus the top term
    long h_min = 0;
    long h_max = -1;
};

// p_h(x) = gamma^(h(d-alpha)) p_0(gamma^h x).
double band_term(long h, const ModelParams& params, const CutoffProfile& profile, double x);

// Window [h_min, h_max] for argument x: down to terms below 1e-13 of the running sum, up to
// gamma^h x >= 4 and two consecutive terms below 1e-13 of the sum or below the quadrature noise.
ScaleSumSpec auto_window(const ModelParams& params, const CutoffProfile& profile, double x);

// sum_h gamma^(2 h Delta1) p_0(gamma^h x). Throws WindowError when the boundary check fails.
ScaleSumResult scale_sum_G_detailed(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps,
                                    double x, const ScaleSumSpec& spec = {});
double scale_sum_G(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double x,
                   const ScaleSumSpec& spec = {});

// -2N sum_{h'} p_{h'}(y) [gamma^(2h' eta2) p_{h'}(y) + 2 sum_{h''>h'} gamma^(2h'' eta2) p_{h''}(y)].
ScaleSumResult scale_sum_F_detailed(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps,
                                    double y, const ScaleSumSpec& spec = {});
double scale_sum_F(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double y,
                   const ScaleSumSpec& spec = {});

// Leading power law -2N C0(d, alpha) C0(d, alpha - 2 eta2) y^(-2 Delta2).
double F_leading(const ModelParams& params, const Exponents& exps, double y);
// |F(y) - F_leading(y)| y^(2 Delta2) / |eps|.
double F_remainder_ratio(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double y);

// Least-squares slope of log|v| against log x.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& vs);

struct TailProfile {
    std::vector<long> h;
    std::vector<double> residual;  // |P_{<=h}(x)| x^(2 Delta1): deviation of the sum above h from the full value
    double slope = 0.0;            // d ln(residual) / dh over the points with gamma^h x <= gamma^-3
    double expected_slope = 0.0;   // 2 Delta1 ln(gamma)
    size_t slope_points = 0;
    double plateau = 0.0;          // C0: value reached once gamma^h x >> 1
};

TailProfile tail_profile(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double x,
                         const std::vector<long>& h_list);

// P_{>=1}(x) = full - P_{<=0}.
double correction_E1_free(const ModelParams& params, const CutoffProfile& profile, double x);
// -2N [2 P_{<=0} P_{>=1} + P_{>=1}^2].
double correction_E2_free(const ModelParams& params, const CutoffProfile& profile, double x);

// Stretched-exponential fit of |E1| sampled with spacing opt.step on [lo, lookahead*hi].
prop::DecayFit decay_fit_E1(const ModelParams& params, const CutoffProfile& profile, const prop::Window& w,
                            const prop::FitOptions& opt = {});

// Scale-h remainder propagator at h = h', s = 1/2:
// Int d^dp/(2pi)^d |p|^-(d/2+eps-2eta2) e^(ipy) log(gamma^-h |p|) (gamma^-h |p|)^-eta2 f_h(p).
double ptilde(long h, const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double y);

struct PtildeCheck {
    double C1 = 0.0;
    double C2 = 0.0;
    double sigma = 0.0;
    double max_ratio = 0.0;  // max over h and samples of |ptilde| / bound
    size_t samples = 0;
};

// Fits C1 exp(-C2 (gamma^(h-1) y)^sigma) gamma^(h(d/2-eps+2eta2)) at h = 0 with sigma = 1/s on the
// window, then evaluates the bound ratio for every h in h_list on a grid offset from the fit samples.
PtildeCheck ptilde_bound_check(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps,
                               const prop::Window& w, const std::vector<long>& h_list);

}  // namespace rgfp::response
