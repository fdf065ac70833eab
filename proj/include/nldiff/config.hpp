#pragma once

#include "nldiff/grid.hpp"
#include "nldiff/operators.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nldiff {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key-value view of a sectioned config. Keys are fully qualified
/// ("operator.kind"); [section] headers prefix the keys below them, and dotted
/// keys are accepted at top level. JSON input (first non-space byte '{') is
/// flattened the same way. Unknown keys are the caller's problem to reject.
class KeyValueConfig {
public:
    static KeyValueConfig parse_text(const std::string& text);
    static KeyValueConfig parse_file(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::vector<double> get_number_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// Throws ConfigError naming the first key not in `known` (prefix match).
    void reject_unknown(const std::vector<std::string>& known_prefixes) const;

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, int> lines_; // for error messages
};

/// Construct an operator from config keys under `prefix` (e.g. "operator"):
///   kind = fractional_laplacian | laplacian | anisotropic_fractional_sum |
///          relativistic_schrodinger | bessel_resolvent | geometric_stable |
///          convolution_zero_order | identity | shifted | sum
/// plus kind-specific keys (alpha, kappa, alphas, shift_c, kernel, width,
/// base.*, left.*, right.*). Convolution0Order kernels need `grid` to realize
/// the density (builtin families or file:path.csv).
OperatorSpec operator_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                  const Grid& grid);
/// Variant for grid-free specs; throws if the spec needs a grid.
OperatorSpec operator_from_config(const KeyValueConfig& cfg, const std::string& prefix);

/// Parse "n=256,L=32,dim=3" (order-insensitive).
Grid grid_from_string(const std::string& text);

} // namespace nldiff
