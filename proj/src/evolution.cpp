#include "nldiff/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace nldiff {

TimeGrid TimeGrid::uniform(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("TimeGrid: T, dt > 0");
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    if (n == 0 || std::abs(static_cast<double>(n) * dt - T) > 1e-9 * T)
        throw std::invalid_argument("TimeGrid::uniform: T must be a multiple of dt");
    TimeGrid g;
    g.steps.assign(n, dt);
    return g;
}

TimeGrid TimeGrid::geometric(double T, double dt0, double ratio) {
    if (!(T > 0.0) || !(dt0 > 0.0) || !(ratio >= 1.0))
        throw std::invalid_argument("TimeGrid::geometric: bad parameters");
    TimeGrid g;
    double t = 0.0, dt = dt0;
    while (t < T) {
        dt = std::min(dt, T - t);
        g.steps.push_back(dt);
        t += dt;
        dt *= ratio;
    }
    return g;
}

double TimeGrid::total() const {
    double T = 0.0;
    for (double dt : steps) T += dt;
    return T;
}

std::vector<double> TimeGrid::node_times() const {
    std::vector<double> t;
    double acc = 0.0;
    for (double dt : steps) {
        acc += dt;
        t.push_back(acc);
    }
    return t;
}

void TimeGrid::validate() const {
    if (steps.empty()) throw std::invalid_argument("TimeGrid: empty");
    for (double dt : steps)
        if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: steps must be positive");
}

const Field& Trajectory::at_time(double t, double tol) const {
    for (const auto& [ts, f] : snapshots)
        if (std::abs(ts - t) <= tol * std::max(1.0, std::abs(t))) return f;
    throw std::out_of_range("Trajectory::at_time: no snapshot at t=" + std::to_string(t));
}

Trajectory evolve(const OperatorSpec& spec, const Field& u0, double m,
                  const TimeGrid& tgrid, const EllipticSolveConfig& cfg,
                  const EvolveOptions& opts) {
    tgrid.validate();
    if (!(m >= 1.0)) throw std::invalid_argument("evolve: m >= 1");
    double mn = 0.0;
    for (double v : u0.values()) mn = std::min(mn, v);
    if (mn < -1e-12) throw std::invalid_argument("evolve: u0 must be nonnegative");

    Trajectory traj(u0.grid(), spec, m);
    traj.snapshots.emplace_back(0.0, u0);

    // Geometric snapshot policy: keep times close to a log ladder anchored at
    // the first step, always including the final time.
    const double T = tgrid.total();
    double next_snap = tgrid.steps.front();
    const double snap_ratio =
        std::pow(10.0, 1.0 / static_cast<double>(opts.snapshots_per_decade));

    Field u = u0;
    double t = 0.0;
    int step_idx = 0;
    for (double dt : tgrid.steps) {
        ++step_idx;
        EllipticSolveReport rep = [&] {
            try {
                return resolvent_step(spec, dt, u, m, cfg);
            } catch (const SolverFailure& e) {
                throw SolverFailure("step " + std::to_string(step_idx) + ": " + e.what(),
                                    e.last_residual);
            }
        }();
        u = rep.solution;
        t += dt;

        StepDiagnostics d;
        d.step = step_idx;
        d.t = t;
        d.residual = rep.residual;
        d.newton_iters = rep.newton_iters;
        d.mass = integral(u);
        d.l1 = lp_norm(u, 1.0);
        d.l2 = lp_norm(u, 2.0);
        d.linf = lp_norm_inf(u);
        d.boundary_contamination = boundary_mass_fraction(u);
        traj.diagnostics.push_back(d);

        bool store = false;
        switch (opts.snapshots) {
            case SnapshotPolicy::All: store = true; break;
            case SnapshotPolicy::Final: store = (t >= T * (1.0 - 1e-12)); break;
            case SnapshotPolicy::GeometricInTime:
                if (t >= next_snap * (1.0 - 1e-12)) {
                    store = true;
                    while (next_snap <= t * (1.0 + 1e-12)) next_snap *= snap_ratio;
                }
                if (t >= T * (1.0 - 1e-12)) store = true;
                break;
        }
        if (store) traj.snapshots.emplace_back(t, u);
    }
    return traj;
}

Trajectory rescale_trajectory(const Trajectory& traj, double Lambda) {
    if (!(Lambda > 0.0)) throw std::invalid_argument("rescale_trajectory: Lambda > 0");
    if (!(traj.m > 1.0)) throw std::invalid_argument("rescale_trajectory: needs m > 1");
    const double amp = std::pow(Lambda, 1.0 / (traj.m - 1.0));
    Trajectory out(traj.grid, traj.spec, traj.m);
    for (const auto& [t, f] : traj.snapshots)
        out.snapshots.emplace_back(t / Lambda, amp * f);
    return out;
}

} // namespace nldiff
