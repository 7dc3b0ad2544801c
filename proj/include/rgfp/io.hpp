#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace rgfp {

inline constexpr const char* kVersion = "0.3.1";

// Sampled radial function with metadata (d, eps, gamma, scale tag, profile id, ...).
struct RadialSamples {
    std::vector<double> radii;
    std::vector<double> values;
    std::map<std::string, std::string> meta;

    // Throws DomainError on unsorted radii, non-finite values or missing required meta keys.
    void validate() const;
};

// n points per decade, both ends included.
std::vector<double> log_grid(double x_lo, double x_hi, int per_decade = 32);

// Round to `digits` significant digits (through %.*g) so that JSON output has a fixed precision.
double round_sig(double v, int digits);
std::string format_sig(double v, int digits);

// "# rgfp version=... config_hash=... profile=..."
std::string provenance_line(const std::string& config_hash, const std::string& profile_id);

// FNV-1a, 64 bit, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

// Comment lines "# key=value" for the meta map, then the column header and rows.
void write_csv(std::ostream& os, const RadialSamples& samples, int digits = 9);
void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, int digits = 9);

}  // namespace rgfp
