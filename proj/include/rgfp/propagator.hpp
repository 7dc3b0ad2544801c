#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgfp/core.hpp"
#include "rgfp/cutoff.hpp"

namespace rgfp::prop {

using cutoff::CutoffProfile;

struct ScaleBand {
    enum class Kind { single, below, above, range, full };
    Kind kind = Kind::full;
    long h = 0;
    long h1 = 0;
    long h2 = 0;

    static ScaleBand single(long h) { return {Kind::single, h, 0, 0}; }
    static ScaleBand below(long h) { return {Kind::below, h, 0, 0}; }
    static ScaleBand above(long h) { return {Kind::above, h, 0, 0}; }
    static ScaleBand range(long h1, long h2);
    static ScaleBand full() { return {Kind::full, 0, 0, 0}; }

    // "single:0", "below:-1", "above:1", "range:-2:3", "full"
    static ScaleBand parse(const std::string& text);
    std::string str() const;
};

// Cutoff combination of the band; above(h) is 1 - chi(gamma^(1-h) k) so that below(h-1) + above(h) = 1.
double momentum_weight(const ScaleBand& band, const ModelParams& params, const CutoffProfile& profile,
                       double k);

// gamma^(h (d - alpha)) = gamma^(2 h [psi]): natural magnitude of scale-h propagators.
double band_scale(const ModelParams& params, long h);

struct EvalOptions {
    double rel_tol = 1e-13;  // absolute tolerance in units of band_scale
    int max_panels = 50000;
};

// Scalar position-space propagator: inverse radial Fourier transform of momentum_weight(k) / k^alpha.
// full uses the closed Riesz form and above(h) = full - below(h-1).
double eval(const ScaleBand& band, const ModelParams& params, const CutoffProfile& profile, double x,
            const EvalOptions& opt = {});

// C0(d, alpha) = 2^-alpha pi^(-d/2) Gamma((d-alpha)/2) / Gamma(alpha/2).
double riesz_constant(int d, double alpha);

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct DecayFit {
    double C = 0.0;       // prefactor lifted so that the bound holds at every sample of the window
    double C_ls = 0.0;    // least-squares prefactor
    double c = 0.0;       // rate
    double sigma_fit = 0.0;
    double residual = 0.0;  // rms of the log fit
    Window window;
    size_t n_points = 0;   // envelope maxima used in the fit
    size_t n_samples = 0;  // samples inside the window
};

struct FitOptions {
    double step = 0.1;       // sample spacing in x
    double lookahead = 1.5;  // envelope is taken over [lo, lookahead * hi]
    std::optional<double> fixed_sigma;
    double sigma_lo = 0.02;
    double sigma_hi = 0.98;
    size_t min_points = 4;
};

// Fit log|v| ~ log C - c (x/gamma)^sigma over the upper envelope of the local maxima of |v|.
// xs must be increasing with uniform spacing and cover [w.lo, lookahead * w.hi].
DecayFit fit_stretched_exponential(const std::vector<double>& xs, const std::vector<double>& values,
                                   const Window& w, double gamma, const FitOptions& opt = {});

// Samples the band on [lo, lookahead*hi] and fits. Bands with a power-law tail (above, full) are
// rejected.
DecayFit decay_fit(const ScaleBand& band, const ModelParams& params, const CutoffProfile& profile,
                   const Window& w, const FitOptions& opt = {});

// Window [gamma t_lo^s, gamma t_hi^s] in the stretched variable t = (x/gamma)^sigma, rescaled to band
// h by gamma^-h.
Window stretched_window(const ModelParams& params, double t_lo, double t_hi, long h = 0);

// |Int p_h(x) d^dx| by radial position-space quadrature with a Gaussian regulator exp(-delta x^2),
// delta chosen so that the regulator's leakage into the support of f_h is below 1e-15.
double verify_zero_mode(long h, const ModelParams& params, const CutoffProfile& profile);

}  // namespace rgfp::prop
