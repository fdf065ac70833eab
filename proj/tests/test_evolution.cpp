#include "nldiff/evolution.hpp"
#include "nldiff/fft.hpp"
#include "nldiff/inequalities.hpp"

#include <doctest.h>

#include <cmath>

using namespace nldiff;

TEST_CASE("time grids") {
    const TimeGrid tg = TimeGrid::uniform(1.0, 0.25);
    CHECK(tg.steps.size() == 4);
    CHECK(tg.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0.3), std::invalid_argument);
    const TimeGrid geo = TimeGrid::geometric(1.0, 0.1, 1.5);
    CHECK(geo.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero initial data stays zero") {
    const Grid g(1, 32, 4.0);
    const Field u0(g);
    const Trajectory traj = evolve(OperatorSpec::fractional_laplacian(1.0), u0, 2.0,
                                   TimeGrid::uniform(0.5, 0.125), {},
                                   {SnapshotPolicy::All, 16});
    for (const auto& [t, u] : traj.snapshots)
        for (double v : u.values()) CHECK(v == 0.0);
}

TEST_CASE("identity-operator ODE matches the separable solution") {
    // dY/dt = -Y^2, Y(0) = 1  =>  Y(t) = 1/(1 + t)
    const Grid g(1, 8, 1.0);
    const Field u0(g, std::vector<double>(g.size(), 1.0));
    const double T = 1.0;
    auto run = [&](double dt) {
        const Trajectory traj = evolve(OperatorSpec::identity(), u0, 2.0,
                                       TimeGrid::uniform(T, dt), {},
                                       {SnapshotPolicy::Final, 16});
        return traj.snapshots.back().second[0];
    };
    const double exact = 0.5;
    const double coarse = run(1e-3), fine = run(5e-4);
    const double richardson = 2.0 * fine - coarse;
    CHECK(std::abs(richardson - exact) / exact <= 1e-6);
}

TEST_CASE("m = 1 trajectory converges to the exact semigroup at first order") {
    const Grid g(1, 128, 16.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    const Field u0 = gaussian_bump(g, 1.0);
    const double T = 1.0;
    const auto sig = symbol_on_grid(spec, g);
    std::vector<double> mult(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) mult[i] = std::exp(-T * sig[i]);
    const Field exact = apply_multiplier(u0, mult);

    std::vector<double> errs;
    const std::vector<double> dts = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    for (double dt : dts) {
        const Trajectory traj = evolve(spec, u0, 1.0, TimeGrid::uniform(T, dt), {},
                                       {SnapshotPolicy::Final, 16});
        const Field& uT = traj.snapshots.back().second;
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(uT[i] - exact[i]));
        errs.push_back(err);
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log2(errs[i] / errs[i + 1]);
        CHECK(order == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("snapshots: t=0 first, strictly increasing, nonnegative fields") {
    const Grid g(1, 64, 8.0);
    const Field u0 = gaussian_bump(g, 0.5);
    const Trajectory traj = evolve(OperatorSpec::laplacian(), u0, 2.0,
                                   TimeGrid::uniform(1.0, 1.0 / 64), {},
                                   {SnapshotPolicy::GeometricInTime, 16});
    CHECK(traj.snapshots.front().first == 0.0);
    for (std::size_t i = 0; i + 1 < traj.snapshots.size(); ++i)
        CHECK(traj.snapshots[i].first < traj.snapshots[i + 1].first);
    CHECK(traj.snapshots.back().first == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [t, u] : traj.snapshots)
        for (double v : u.values()) CHECK(v >= 0.0);
    // diagnostics cover every step
    CHECK(traj.diagnostics.size() == 64);
}

TEST_CASE("rescale_trajectory: Lambda = 1 is the identity; analytic case exact") {
    const Grid g(1, 8, 1.0);
    const Field u0(g, std::vector<double>(g.size(), 1.0));
    const Trajectory traj = evolve(OperatorSpec::identity(), u0, 2.0,
                                   TimeGrid::uniform(1.0, 1.0 / 64), {},
                                   {SnapshotPolicy::All, 16});
    const Trajectory same = rescale_trajectory(traj, 1.0);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        CHECK(same.snapshots[i].first == doctest::Approx(traj.snapshots[i].first));
        CHECK(same.snapshots[i].second[0] ==
              doctest::Approx(traj.snapshots[i].second[0]));
    }
    // Lambda = 4 on the ODE: the rescaled numeric solution solves the same
    // discrete recursion with steps dt/Lambda, so values coincide exactly
    const double Lambda = 4.0;
    const Trajectory scaled = rescale_trajectory(traj, Lambda);
    const Trajectory rerun = evolve(OperatorSpec::identity(), Lambda * u0, 2.0,
                                    TimeGrid::uniform(1.0 / Lambda, 1.0 / 256), {},
                                    {SnapshotPolicy::All, 16});
    for (const auto& [t, u] : rerun.snapshots) {
        const Field& v = scaled.at_time(t, 1e-9);
        CHECK(u[0] == doctest::Approx(v[0]).epsilon(1e-9));
    }
    CHECK_THROWS_AS(rescale_trajectory(rerun, 0.0), std::invalid_argument);
}

TEST_CASE("solver failures carry the failing step index") {
    const Grid g(1, 32, 4.0);
    const Field u0 = gaussian_bump(g, 0.5);
    EllipticSolveConfig cfg;
    cfg.max_newton = 1;
    cfg.max_inner = 1;
    try {
        evolve(OperatorSpec::fractional_laplacian(1.0), u0, 3.0,
               TimeGrid::uniform(10.0, 5.0), cfg, {SnapshotPolicy::All, 16});
        CHECK(false);
    } catch (const SolverFailure& e) {
        CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
}

TEST_CASE("energy identity rows shrink at first order in dt") {
    const Grid g(1, 128, 16.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    const Field u0 = gaussian_bump(g, 1.0);
    double prev = 0.0;
    for (double dt : {1.0 / 64, 1.0 / 128}) {
        const Trajectory traj = evolve(spec, u0, 2.0, TimeGrid::uniform(0.5, dt), {},
                                       {SnapshotPolicy::All, 16});
        const auto rows = energy_identity_rows(traj);
        double mx = 0.0;
        for (const auto& r : rows) mx = std::max(mx, r.residual);
        if (prev > 0.0) CHECK(prev / mx == doctest::Approx(2.0).epsilon(0.25));
        prev = mx;
        // Dirichlet energy decays monotonically
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
            CHECK(rows[i + 1].dirichlet <= rows[i].dirichlet * (1.0 + 1e-8));
    }
}

TEST_CASE("mass identity for shifted operators: d(mass) = -dt * c * int u^m") {
    const Grid g(1, 64, 8.0);
    const auto spec = OperatorSpec::shifted(1.0, OperatorSpec::fractional_laplacian(1.0));
    const Field u0 = gaussian_bump(g, 1.0);
    const double m = 2.0, dt = 1.0 / 32;
    const Trajectory traj = evolve(spec, u0, m, TimeGrid::uniform(1.0, dt), {},
                                   {SnapshotPolicy::All, 16});
    for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
        const Field& a = traj.snapshots[j].second;
        const Field& b = traj.snapshots[j + 1].second;
        // the zero mode of the implicit step: int u_{j+1} + dt*c*int u_{j+1}^m = int u_j
        const double lhs = integral(b) - integral(a);
        const double rhs = -dt * 1.0 * integral(power(b, m));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        CHECK(integral(b) < integral(a)); // strictly decreasing mass
    }
}
