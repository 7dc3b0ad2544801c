#pragma once

#include <string>
#include <vector>

namespace rgfp {

inline constexpr double kDefaultEpsGuard = 0.05;
inline constexpr double kMarginalTol = 1e-12;

struct ModelParams {
    int d = 1;
    int N = 4;
    double eps = 0.0;
    double gamma = 2.0;
    double gevrey_s = 2.0;
    double eps_guard = kDefaultEpsGuard;

    double sigma() const { return 1.0 / gevrey_s; }
    double psi_dim() const { return d / 4.0 - eps / 2.0; }
    double alpha() const { return d / 2.0 + eps; }
    double delta1() const { return psi_dim(); }

    // Throws ConfigError naming the first violated invariant.
    void validate() const;
    static ModelParams make(int d, int N, double eps, double gamma = 2.0, double s = 2.0,
                            double eps_guard = kDefaultEpsGuard);
};

// Kernel index (n, m, l, p): n phi legs, m J legs, l psi legs, p derivative flags.
struct KernelLabel {
    int n = 0;
    int m = 0;
    int l = 0;
    std::vector<int> p;

    int p_norm() const;
    bool valid() const;
    std::string str() const;
    bool operator==(const KernelLabel&) const = default;

    static KernelLabel make(int n, int m, int l, std::vector<int> p = {});
    // p = (1,...,1,0,...,0) with `ones` leading ones.
    static KernelLabel with_derivatives(int n, int m, int l, int ones);
};

enum class Relevance { relevant, marginal, irrelevant };
const char* to_string(Relevance r);

struct Exponents {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double eta2 = 0.0;
    double zeta2 = 0.0;
    double lambda_star = 0.0;
    double nu_star = 0.0;
};

// Gaussian values: delta1 = [psi], delta2 = 2[psi], everything else zero.
Exponents free_exponents(const ModelParams& params);

double field_dimension(const ModelParams& params);

// D_sc = d - n(d - D1) - m(d - D2) - l[psi] - |p|_1
double scaling_dimension(const KernelLabel& label, const Exponents& exps, const ModelParams& params);
// delta_sc = D_sc + d(n + m + l - 1)
double delta_sc(const KernelLabel& label, const Exponents& exps, const ModelParams& params);

Relevance classify_label(const KernelLabel& label, const Exponents& exps, const ModelParams& params,
                         double tol = kMarginalTol);

bool is_trimmed_local(const KernelLabel& label);

// gamma^(k * delta_sc(label)); OverflowError when the exponent leaves the double range.
double dilate_exponent(const KernelLabel& label, const Exponents& exps, const ModelParams& params,
                       long k);

// One representative per (n, m, l, |p|_1) with 1 <= n+m+l <= max_order and n+l even.
// Permutations of p are omitted: every quantity here depends on p only through |p|_1.
std::vector<KernelLabel> canonical_labels(int max_order);

}  // namespace rgfp
