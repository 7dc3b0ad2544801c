#include "rgfp/core.hpp"

#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rgfp/errors.hpp"

namespace rgfp {

void ModelParams::validate() const {
    if (d < 1 || d > 3) throw ConfigError("d must be 1, 2 or 3 (got " + std::to_string(d) + ")");
    if (N == 8) throw ConfigError("N=8 excluded");
    if (N < 4 || N % 2 != 0)
        throw ConfigError("N must be even and >= 4 (got " + std::to_string(N) + ")");
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be > 1");
    if (!(gevrey_s > 1.0) || !std::isfinite(gevrey_s)) throw ConfigError("Gevrey order s must be > 1");
    if (!(eps_guard > 0.0)) throw ConfigError("eps guard must be positive");
    if (!std::isfinite(eps) || std::fabs(eps) >= eps_guard) {
        std::ostringstream os;
        os << "|eps| = " << std::fabs(eps) << " outside the validity radius " << eps_guard;
        throw ConfigError(os.str());
    }
}

ModelParams ModelParams::make(int d, int N, double eps, double gamma, double s, double eps_guard) {
    ModelParams p;
    p.d = d;
    p.N = N;
    p.eps = eps;
    p.gamma = gamma;
    p.gevrey_s = s;
    p.eps_guard = eps_guard;
    p.validate();
    return p;
}

int KernelLabel::p_norm() const { return std::accumulate(p.begin(), p.end(), 0); }

bool KernelLabel::valid() const {
    if (n < 0 || m < 0 || l < 0) return false;
    if (n + m + l < 1) return false;
    if ((n + l) % 2 != 0) return false;
    if (static_cast<int>(p.size()) != l) return false;
    for (int v : p)
        if (v != 0 && v != 1) return false;
    return true;
}

std::string KernelLabel::str() const {
    std::ostringstream os;
    os << '(' << n << ',' << m << ',' << l << ',';
    if (l == 0) {
        os << "{}";
    } else {
        os << '(';
        for (size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
        os << ')';
    }
    os << ')';
    return os.str();
}

KernelLabel KernelLabel::make(int n, int m, int l, std::vector<int> p) {
    if (p.empty() && l > 0) p.assign(l, 0);
    KernelLabel k{n, m, l, std::move(p)};
    if (!k.valid()) throw ConfigError("invalid kernel label " + k.str());
    return k;
}

KernelLabel KernelLabel::with_derivatives(int n, int m, int l, int ones) {
    std::vector<int> p(l, 0);
    for (int i = 0; i < ones && i < l; ++i) p[i] = 1;
    return make(n, m, l, std::move(p));
}

const char* to_string(Relevance r) {
    switch (r) {
        case Relevance::relevant: return "relevant";
        case Relevance::marginal: return "marginal";
        case Relevance::irrelevant: return "irrelevant";
    }
    return "?";
}

Exponents free_exponents(const ModelParams& params) {
    Exponents e;
    e.delta1 = params.psi_dim();
    e.delta2 = 2.0 * params.psi_dim();
    return e;
}

double field_dimension(const ModelParams& params) { return params.d / 4.0 - params.eps / 2.0; }

double scaling_dimension(const KernelLabel& label, const Exponents& exps, const ModelParams& params) {
    const double d = params.d;
    return d - label.n * (d - exps.delta1) - label.m * (d - exps.delta2) -
           label.l * field_dimension(params) - label.p_norm();
}

double delta_sc(const KernelLabel& label, const Exponents& exps, const ModelParams& params) {
    return scaling_dimension(label, exps, params) + params.d * (label.n + label.m + label.l - 1);
}

Relevance classify_label(const KernelLabel& label, const Exponents& exps, const ModelParams& params,
                         double tol) {
    const double D = scaling_dimension(label, exps, params);
    if (std::fabs(D) < tol) return Relevance::marginal;
    return D > 0 ? Relevance::relevant : Relevance::irrelevant;
}

bool is_trimmed_local(const KernelLabel& label) {
    const int pn = label.p_norm();
    if (label.n == 0 && label.m == 0 && label.l == 2) return pn <= 1;
    if (pn != 0) return false;
    if (label.n == 0 && label.m == 0 && label.l == 4) return true;
    if (label.n == 1 && label.m == 0 && label.l == 1) return true;
    if (label.n == 0 && label.m == 1 && label.l == 2) return true;
    return false;
}

double dilate_exponent(const KernelLabel& label, const Exponents& exps, const ModelParams& params,
                       long k) {
    if (k == 0) return 1.0;
    const double e = static_cast<double>(k) * delta_sc(label, exps, params) * std::log(params.gamma);
    // Keep clear of subnormals as well as of infinity.
    if (std::fabs(e) > std::log(DBL_MAX) - 1.0) {
        std::ostringstream os;
        os << "dilatation gamma^(" << k << "*delta_sc) of " << label.str() << " overflows (log = " << e
           << ")";
        throw OverflowError(os.str());
    }
    return std::exp(e);
}

std::vector<KernelLabel> canonical_labels(int max_order) {
    std::vector<KernelLabel> out;
    for (int total = 1; total <= max_order; ++total)
        for (int n = 0; n <= total; ++n)
            for (int m = 0; n + m <= total; ++m) {
                const int l = total - n - m;
                if ((n + l) % 2 != 0) continue;
                for (int ones = 0; ones <= l; ++ones) out.push_back(KernelLabel::with_derivatives(n, m, l, ones));
            }
    return out;
}

}  // namespace rgfp
