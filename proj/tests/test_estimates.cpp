#include "nldiff/estimates.hpp"
#include "nldiff/inequalities.hpp"

#include <doctest.h>

#include <cmath>

using namespace nldiff;

TEST_CASE("constant formulas at (m, alpha, N) = (2, 1, 3), hand-evaluated") {
    EstimateParams p;
    p.m = 2.0;
    p.alpha = 1.0;
    p.N = 3;
    p.K1 = 1.0;
    p.K2 = 1.0;
    CHECK(p.C_m() == doctest::Approx(4.0));
    CHECK(p.theta_alpha() == doctest::Approx(0.25));
    // 2^{1/2} 4^{3/4} 2^{1/4} K1^{1/2} K2^{1/4}
    CHECK(p.C_smoothing_G1() ==
          doctest::Approx(std::sqrt(2.0) * std::pow(4.0, 0.75) * std::pow(2.0, 0.25)));
    p.K1 = 2.0;
    p.K2 = 3.0;
    CHECK(p.C_smoothing_G1() ==
          doctest::Approx(std::sqrt(2.0) * std::pow(4.0, 0.75) * std::pow(2.0, 0.25) *
                          std::pow(2.0, 0.5) * std::pow(3.0, 0.25)));
    // dual use of theta: theta(p) = 1/(alpha p + N(m-1))
    CHECK(p.theta(2.0) == doctest::Approx(1.0 / 5.0));
}

TEST_CASE("absolute-bound constant and the identity-operator trajectory") {
    EstimateParams p;
    p.m = 2.0;
    p.N = 1;
    p.C1 = 1.0;
    CHECK(p.C_tilde_absolute() == doctest::Approx(4.0)); // (2^2 * 1)^{1/1}

    const Grid g(1, 8, 1.0);
    const Field u0(g, std::vector<double>(g.size(), 1.0));
    const Trajectory traj = evolve(OperatorSpec::identity(), u0, 2.0,
                                   TimeGrid::uniform(1.0, 1.0 / 128), {},
                                   {SnapshotPolicy::All, 16});
    p.norm_u0_L1 = lp_norm(u0, 1.0);
    const EstimateReport rep = check_smoothing(traj, p, SmoothingVariant::Absolute, 0.0);
    CHECK(rep.passed);
    CHECK(rep.margin_min >= 0.0);
}

TEST_CASE("zero-order constants reduce correctly at q = 1 (p = infinity)") {
    EstimateParams p;
    p.m = 2.0;
    p.p = std::numeric_limits<double>::infinity();
    p.CJp = 0.5;
    p.norm_u0_L1 = 2.0;
    // q = p/(p-1) -> 1: coeff = 2 (m q C(m)^{m/(m-1)})^{1/m} = 2 sqrt(2*16)
    CHECK(p.coeff_zero_order_small() == doctest::Approx(2.0 * std::sqrt(32.0)));
    // level = 2 (m C(m)/(m-1) CJp)^q ||u0||_1 = 2 * (2*4*0.5) * 2
    CHECK(p.level_zero_order() == doctest::Approx(16.0));
    // t0 = (mq)^{1/2} * ((m/(m-1)) CJp)^{-q(m-1)} * C(m)^{1-q(m-1)} * ||u0||^{-1}
    //    = sqrt(2) * (2*0.5)^{-1} * 4^0 * 2^{-1}
    CHECK(p.t0_zero_order() == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("G3 constants") {
    EstimateParams p;
    p.m = 2.0;
    p.p = 2.0;
    p.Cp = 0.7;
    p.norm_u0_L1 = 1.0;
    CHECK(p.C_m_resolvent() == doctest::Approx(2.0 * 9.0)); // 2 (1+m)^{m/(m-1)} = 2*3^2
    CHECK(p.level_G3() == doctest::Approx(2.0 * std::sqrt(18.0) * std::sqrt(0.7)));
    CHECK(p.t0_G3() == doctest::Approx(1.0 / (std::sqrt(18.0) * std::sqrt(0.7))));
}

TEST_CASE("fundamental bound rejects m close to 1 and non-Green kernels") {
    const Grid g(1, 32, 8.0);
    Field u0 = gaussian_bump(g, 1.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    Trajectory traj(g, spec, 1.1);
    traj.snapshots.emplace_back(0.0, u0);
    KernelReport green = green_function(spec, g);
    CHECK_THROWS_AS(check_fundamental_bound(traj, green, {1.0}, {0}),
                    std::invalid_argument);
    KernelReport heat = heat_kernel(spec, g, 1.0);
    Trajectory traj2(g, spec, 2.0);
    traj2.snapshots.emplace_back(0.0, u0);
    CHECK_THROWS_AS(check_fundamental_bound(traj2, heat, {1.0}, {0}),
                    std::invalid_argument);
}

TEST_CASE("decay-fit on the identity ODE reproduces -1/(m-1)") {
    const Grid g(1, 8, 1.0);
    const Field u0(g, std::vector<double>(g.size(), 1.0));
    const Trajectory traj = evolve(OperatorSpec::identity(), u0, 2.0,
                                   TimeGrid::uniform(200.0, 0.05), {},
                                   {SnapshotPolicy::GeometricInTime, 16});
    const DecayFit fit = fit_decay_exponent(traj, 20.0, 200.0);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(fit.r_squared > 0.999);
}

TEST_CASE("smoothing implications: q=r identity and the gamma=0 collapse") {
    // input bound with q = 1, gamma = 0.3, F(s) = A s^{-0.4} fitted on a run
    const Grid g(1, 128, 16.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    const Field u0 = gaussian_bump(g, 1.0);
    const Trajectory traj = evolve(spec, u0, 2.0, TimeGrid::uniform(2.0, 1.0 / 64), {},
                                   {SnapshotPolicy::GeometricInTime, 16});
    EstimateParams par;
    par.m = 2.0;
    par.alpha = 1.0;
    par.N = 1;
    const double gamma = par.alpha * par.theta_alpha(); // 1/2
    const PowerLawBound F =
        fit_smoothing_bound(traj, 1.0, gamma, par.N * par.theta_alpha());
    CHECK(F.amplitude > 0.0);

    // r = q = 1: the derived L^r-L^inf bound IS the input bound -> margins >= 0
    const EstimateReport rep = check_smoothing_implications(traj, F, gamma, 1.0, 3.0);
    CHECK(rep.passed);

    // gamma = 0 exponent collapse: eF_p = (p-r)/p against (p-r)/(p(m-1)) once the
    // absolute-bound exponent 1/(m-1) is folded into F
    const PowerLawBound Fabs = fit_smoothing_bound(traj, 1.0, 0.0, 1.0 / (par.m - 1.0));
    const EstimateReport rep0 =
        check_smoothing_implications(traj, Fabs, 0.0, 1.0, 3.0);
    CHECK(rep0.passed);
}

TEST_CASE("estimate kind names are stable") {
    CHECK(estimate_kind_name(EstimateKind::FundamentalBound) == "fundamental");
    CHECK(estimate_kind_name(EstimateKind::SmoothingZeroOrder) == "smoothing:zero-order");
}

TEST_CASE("resolvent-route fundamental bound where the lambda condition triggers") {
    const Grid g(1, 256, 16.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    const Field u0 = uniform_noise(g, 21);
    const Trajectory traj = evolve(spec, u0, 2.0, TimeGrid::uniform(4.0, 1.0 / 32), {},
                                   {SnapshotPolicy::GeometricInTime, 16});
    KernelReport gres = green_resolvent(spec, g);
    std::vector<double> times;
    for (const auto& [t, u] : traj.snapshots)
        if (t >= 2.0) times.push_back(t);
    const std::vector<std::size_t> pts = {0, g.n() / 8, g.n() / 2, g.n() - 1};
    const EstimateReport rep =
        check_fundamental_bound_resolvent(traj, gres, times, pts);
    CHECK(rep.passed);
    CHECK(!rep.data_table.empty()); // lambda > 1/((m-1)t) did trigger
}

TEST_CASE("G3 two-regime bound along the fractional run") {
    const Grid g(1, 512, 32.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    Field u0(g);
    u0[0] = 1.0 / g.cell_volume();
    const Trajectory traj = evolve(spec, u0, 2.0, TimeGrid::uniform(5.0, 1.0 / 128), {},
                                   {SnapshotPolicy::GeometricInTime, 16});
    EstimateParams params;
    params.m = 2.0;
    params.alpha = 1.0;
    params.N = 1;
    params.p = 1.2;
    params.norm_u0_L1 = 1.0;
    params.Cp = lp_norm(green_resolvent(spec, g).kernel, 1.2);
    const EstimateReport rep = check_smoothing(traj, params, SmoothingVariant::G3);
    CHECK(rep.passed);
    CHECK(rep.margin_min > 0.0);
}

TEST_CASE("combined two-regime bound on the sum operator") {
    // local (R <= 1) behavior governed by the Laplacian (alpha = 2), far by the
    // fractional part (alpha = 1); the constants must cover both regimes.
    const Grid g(1, 512, 32.0);
    const auto spec =
        OperatorSpec::sum(OperatorSpec::laplacian(), OperatorSpec::fractional_laplacian(1.0));
    Field u0(g);
    u0[0] = 1.0 / g.cell_volume();
    const Trajectory traj = evolve(spec, u0, 2.0, TimeGrid::uniform(5.0, 1.0 / 128), {},
                                   {SnapshotPolicy::GeometricInTime, 16});
    const KernelReport green = green_function(spec, g);
    // regime-wise fits: alpha = 2 on [4h, 1], alpha = 1 on [1, L/8]
    auto fit_regime = [&](double alpha, double r_lo, double r_hi) {
        KernelReport rep = green;
        rep.window_min = r_lo;
        rep.window_max = r_hi;
        classify_assumptions(rep, alpha);
        return std::pair<double, double>(rep.fitted.K1.value_or(0.0),
                                         rep.fitted.K2.value_or(0.0));
    };
    const auto [K1_loc, K2_loc] = fit_regime(2.0, 4.0 * g.spacing(), 1.0);
    const auto [K1_far, K2_far] = fit_regime(1.0, 1.0, g.side() / 8.0);
    EstimateParams params;
    params.m = 2.0;
    params.alpha = 1.0;
    params.N = 1;
    params.norm_u0_L1 = 1.0;
    params.K1 = std::max(K1_loc, K1_far);
    params.K2 = std::max(K2_loc, K2_far);
    REQUIRE(*params.K1 > 0.0);
    REQUIRE(*params.K2 > 0.0);
    const EstimateReport rep = check_smoothing(traj, params, SmoothingVariant::Combined);
    CHECK(rep.passed);
    CHECK(rep.margin_min > 0.0);
}

TEST_CASE("fundamental-bound margins are invariant under the time rescaling") {
    const Grid g(1, 256, 16.0);
    const auto spec = OperatorSpec::fractional_laplacian(1.0);
    const Field u0 = gaussian_bump(g, 1.0);
    const double m = 2.0, Lambda = 2.0;
    const Trajectory direct = evolve(spec, u0, m, TimeGrid::uniform(2.0, 1.0 / 64), {},
                                     {SnapshotPolicy::All, 16});
    const Trajectory rescaled = rescale_trajectory(direct, Lambda);
    KernelReport green = green_function(spec, g);
    const std::vector<std::size_t> pts = {0, g.n() / 8, g.n() - g.n() / 8};
    const EstimateReport ra =
        check_fundamental_bound(direct, green, {1.0, 2.0}, pts);
    const EstimateReport rb =
        check_fundamental_bound(rescaled, green, {1.0 / Lambda, 2.0 / Lambda}, pts);
    REQUIRE(ra.data_table.size() == rb.data_table.size());
    for (std::size_t i = 0; i < ra.data_table.size(); ++i)
        CHECK(ra.data_table[i].margin ==
              doctest::Approx(rb.data_table[i].margin).epsilon(1e-9));
}
