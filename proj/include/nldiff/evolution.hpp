#pragma once

#include "nldiff/elliptic.hpp"
#include "nldiff/grid.hpp"
#include "nldiff/operators.hpp"

#include <utility>
#include <vector>

namespace nldiff {

/// Time discretization 0 = t_0 < t_1 < ... < t_J = T as a list of steps.
struct TimeGrid {
    std::vector<double> steps;

    static TimeGrid uniform(double T, double dt);
    /// Geometric steps from dt0 growing by `ratio` per step until T is reached.
    static TimeGrid geometric(double T, double dt0, double ratio);

    double total() const;
    std::vector<double> node_times() const; // t_1..t_J
    void validate() const;
};

enum class SnapshotPolicy { All, GeometricInTime, Final };

struct StepDiagnostics {
    int step = 0;
    double t = 0.0;
    double residual = 0.0;
    int newton_iters = 0;
    double mass = 0.0;
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
    double boundary_contamination = 0.0;
};

struct Trajectory {
    Grid grid;
    OperatorSpec spec;
    double m = 1.0;
    std::vector<std::pair<double, Field>> snapshots; // (t, u), snapshots[0] = (0, u0)
    std::vector<StepDiagnostics> diagnostics;        // one row per time step

    Trajectory(Grid g, OperatorSpec s, double m_) : grid(g), spec(std::move(s)), m(m_) {}

    const Field& at_time(double t, double tol = 1e-9) const;
};

struct EvolveOptions {
    SnapshotPolicy snapshots = SnapshotPolicy::GeometricInTime;
    int snapshots_per_decade = 16;
};

/// March the implicit scheme u_j + dt (-L)[u_j^m] = u_{j-1} from u0 >= 0.
/// Elliptic failures are rethrown with the failing step index attached.
Trajectory evolve(const OperatorSpec& spec, const Field& u0, double m,
                  const TimeGrid& tgrid, const EllipticSolveConfig& cfg = {},
                  const EvolveOptions& opts = {});

/// Time-scaled trajectory u_Lambda(x, t) = Lambda^{1/(m-1)} u(x, Lambda t),
/// built from the snapshots of `traj` whose times are divisible by Lambda.
Trajectory rescale_trajectory(const Trajectory& traj, double Lambda);

} // namespace nldiff
