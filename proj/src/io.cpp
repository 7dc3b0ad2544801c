#include "rgfp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>

#include "rgfp/errors.hpp"

namespace rgfp {

void RadialSamples::validate() const {
    if (radii.size() != values.size()) throw DomainError("RadialSamples: radii and values differ in length");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError("RadialSamples: radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("RadialSamples: radii not increasing");
        if (!std::isfinite(values[i])) throw DomainError("RadialSamples: non-finite value");
    }
    for (const char* key : {"d", "eps", "gamma", "scale", "profile"})
        if (!meta.count(key)) throw DomainError(std::string("RadialSamples: missing meta key ") + key);
}

std::vector<double> log_grid(double x_lo, double x_hi, int per_decade) {
    if (!(x_lo > 0.0) || !(x_hi >= x_lo) || per_decade < 1) throw DomainError("log_grid: bad range");
    const double decades = std::log10(x_hi / x_lo);
    const int n = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
    std::vector<double> g;
    if (x_hi == x_lo) return {x_lo};
    for (int i = 0; i <= n; ++i) g.push_back(x_lo * std::pow(10.0, decades * i / n));
    g.back() = x_hi;
    return g;
}

std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double round_sig(double v, int digits) {
    if (!std::isfinite(v)) return v;
    return std::strtod(format_sig(v, digits).c_str(), nullptr);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string provenance_line(const std::string& config_hash, const std::string& profile_id) {
    return std::string("# rgfp version=") + kVersion + " config_hash=" + config_hash + " profile=" + profile_id;
}

void write_csv(std::ostream& os, const RadialSamples& samples, int digits) {
    samples.validate();
    for (const auto& [k, v] : samples.meta) os << "# " << k << "=" << v << "\n";
    os << "r,value\n";
    for (size_t i = 0; i < samples.radii.size(); ++i)
        os << format_sig(samples.radii[i], digits) << "," << format_sig(samples.values[i], digits) << "\n";
}

void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, int digits) {
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw DomainError("write_csv: row width mismatch");
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_sig(row[i], digits);
        os << "\n";
    }
}

}  // namespace rgfp
