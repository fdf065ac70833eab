#pragma once

#include "nldiff/evolution.hpp"
#include "nldiff/grid.hpp"
#include "nldiff/operators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nldiff {

enum class QuotientKind { Nash, Sobolev, SubcriticalGNS, Poincare, StroockVaropoulos };

/// Nash quotient ||f||_2 / (||f||_1^theta Q[f]^{(1-theta)/2}) with
/// theta = (1/2)(2*-2)/(2*-1), 2* = 2N/(N-alpha).
double nash_quotient(const OperatorSpec& spec, const Field& f, double alpha, int N);

/// Subcritical GNS quotient ||f||_pt / (||f||_qt^theta Q[f]^{(1-theta)/2}) with
/// theta = (qt/pt)(2*-pt)/(2*-qt). Pass two_star = 2 for the Poincare family.
/// Preconditions (from the subcritical range): pt in [(1+m)/m, 2), qt in [1/m, pt).
double gns_quotient(const OperatorSpec& spec, const Field& f, double p_tilde,
                    double q_tilde, double two_star, double m);

/// theta of the subcritical GNS, exposed for exponent arithmetic tests.
double gns_theta(double p_tilde, double q_tilde, double two_star);

struct StroockVaropoulosResult {
    double lhs;   // < u^{p-1}, (-L)[u^m] >
    double rhs;   // 4m(p-1)/(p+m-1)^2 * Q[u^{(p+m-1)/2}]
    double slack; // lhs - rhs, nonnegative up to roundoff for u >= 0
};
StroockVaropoulosResult stroock_varopoulos_check(const OperatorSpec& spec,
                                                 const Field& u, double p, double m);

/// Deterministic function families probing quotient suprema.
Field gaussian_bump(const Grid& grid, double width);
Field mollified_block(const Grid& grid, double radius);
Field two_bumps(const Grid& grid, double width, double separation);
/// Band-limited nonnegative noise: random spectrum below `cutoff_fraction` of
/// Nyquist, shifted to be nonnegative. Deterministic in `seed`.
Field band_limited_noise(const Grid& grid, double cutoff_fraction, std::uint64_t seed);
/// Nonnegative iid-uniform noise field in [0, 1), deterministic in `seed`.
Field uniform_noise(const Grid& grid, std::uint64_t seed);

struct QuotientReport {
    QuotientKind inequality;
    std::string family;
    std::vector<double> parameter;   // e.g. bump widths
    std::vector<double> quotient;    // per-sample quotient values
    double sup_quotient = 0.0;
    std::size_t violation_count = 0; // Stroock-Varopoulos only
    /// "unbounded-trend" when the quotient grows by >= factor 2 per
    /// width-halving across 3 consecutive halvings, else "bounded".
    std::string trend = "bounded";
};

/// Evaluate the Nash quotient over Gaussian bumps across three decades of width.
QuotientReport nash_family_report(const OperatorSpec& spec, const Grid& grid,
                                  double alpha, int N, int samples = 50);

/// Discrete analog of the L^{m+1} energy identity along a trajectory:
/// every consecutive pair contributes
///   |[I(u_{j+1}) - I(u_j)]/dt + (m+1) <u_{j+1}^m, (-L)[u_{j+1}^m]>|
/// with I(u) = int u^{m+1}; the rows are returned for order measurements.
struct EnergyIdentityRow {
    double t;
    double residual;
    double dirichlet; // Q[u_j^m]
};
std::vector<EnergyIdentityRow> energy_identity_rows(const Trajectory& traj);

} // namespace nldiff
