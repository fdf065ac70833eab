#pragma once

#include "nldiff/grid.hpp"
#include "nldiff/operators.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nldiff {

enum class KernelKind { HeatKernel, Green, ResolventGreen };

enum class GreenAssumption { G1, G1prime, G2, G3 };

/// Structural constants fitted from a kernel, in the roles they play in the
/// Green-function assumptions: K1 (local R^alpha mass), K2 (power tail),
/// K3 (constant tail level), C1 (L1 norm), Cp (Lp norms by p).
struct FittedConstants {
    std::optional<double> K1;
    std::optional<double> K2;
    std::optional<double> K3;
    std::optional<double> C1;
    std::map<double, double> Cp;
    std::optional<double> alpha_fit;       // least-squares radial exponent
    std::optional<double> crossover_radius; // (K2/K3)^{1/(N-alpha)} when both fitted
    // raw profiles backing the fits, for reports
    std::vector<double> fit_radii;
    std::vector<double> K1_ratio;  // int_{B_R} G / R^alpha per radius
    std::vector<double> K2_ratio;  // R^{N-alpha} * esssup_{|x|>R} G per radius
};

struct KernelReport {
    OperatorSpec spec;
    Grid grid;
    Field kernel;
    KernelKind kind;
    double time = 0.0; // heat kernels only
    FittedConstants fitted;
    std::set<GreenAssumption> classification;
    bool classification_inconclusive = false;
    double window_min = 0.0, window_max = 0.0; // radial fit range
    double mass = 0.0;
    double min_value = 0.0;
    bool under_resolved = false;
    bool periodic_correction = false; // zero mode dropped (sigma(0)=0 Green)
    bool quadrature_disagreement = false;
    double quadrature_max_rel_err = 0.0;

    KernelReport(OperatorSpec s, Grid g, Field k, KernelKind kd)
        : spec(std::move(s)), grid(g), kernel(std::move(k)), kind(kd) {}
};

/// Heat kernel H(.,t) = idft of e^{-t sigma}, centered at the origin.
/// Flags `under_resolved` when the spectrum has not decayed to 1e-8 at the
/// Nyquist frequency.
KernelReport heat_kernel(const OperatorSpec& spec, const Grid& grid, double t);

/// Resolvent Green function: idft of 1/(1 + sigma); mass = 1/(1 + sigma(0)).
KernelReport green_resolvent(const OperatorSpec& spec, const Grid& grid);

/// Green function: idft of 1/sigma. For mass-conserving operators the zero mode
/// is dropped (zero-mean periodic Green function, `periodic_correction` set).
KernelReport green_function(const OperatorSpec& spec, const Grid& grid);

enum class TimeDiscount { None, Exponential }; // weight 1 or e^{-t}

/// Log-spaced time grid with `per_decade` nodes covering [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, int per_decade = 64);
/// Default quadrature grid for a given grid/operator order: [1e-4 h^alpha, 1e2].
std::vector<double> default_time_grid(const Grid& grid, double alpha_eff);

/// Green function by trapezoid-in-log-time quadrature of heat kernels,
/// cross-validated against the symbol route on the central window (flagging
/// disagreement beyond 2%).
KernelReport green_time_quadrature(const OperatorSpec& spec, const Grid& grid,
                                   const std::vector<double>& t_grid,
                                   TimeDiscount discount);

/// Shell-averaged radial profile: radii are per-shell mean distances, values
/// per-shell means, shells of width h.
struct RadialProfile {
    std::vector<double> radius;
    std::vector<double> value;
    std::vector<std::size_t> count;
};
RadialProfile radial_profile(const Field& f);

/// Least-squares slope of log(value) vs log(radius) restricted to [r_min, r_max];
/// returns slope and r^2 of the fit. Nonpositive values are skipped.
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};
LogLogFit fit_radial_exponent(const RadialProfile& prof, double r_min, double r_max);

/// Fit the structural constants of (G1)/(G1')/(G2)/(G3) from a Green-type
/// kernel and classify. `alpha` is the scaling order to test against;
/// `p_values` are the exponents to evaluate C_p at (G3 applies to
/// ResolventGreen reports). Stability = variation below factor 3 across the
/// R-window; fewer than 6 usable shells marks the report inconclusive.
void classify_assumptions(KernelReport& report, double alpha,
                          const std::vector<double>& p_values = {});

/// Trend across grid refinements of one fitted constant (e.g. C1 or Cp):
/// "stable" when every refinement ratio is <= 1.1, "growing" when the total
/// ratio across the sequence is >= 1.3, else "undecided".
std::string refinement_trend(const std::vector<double>& values);

/// Linear-implies-nonlinear integrability probe: int_0^inf e^{-t} C(t)^{(p-1)/p} dt
/// from a tabulated on-diagonal bound C(t) by trapezoid in log t, and judges
/// finiteness from the small-t power of the integrand.
struct IntegrabilityResult {
    double value = 0.0;        // quadrature over the tabulated range
    bool finite = true;        // small-t exponent > -1 and tail decays
    double small_t_exponent = 0.0;
};
IntegrabilityResult linear_implies_nonlinear_integral(
    const std::vector<double>& t, const std::vector<double>& C_of_t, double p);

} // namespace nldiff
