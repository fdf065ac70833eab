#include "nldiff/experiment.hpp"

#include "nldiff/estimates.hpp"
#include "nldiff/evolution.hpp"
#include "nldiff/inequalities.hpp"
#include "nldiff/io.hpp"
#include "nldiff/kernels.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nldiff {

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

void write_summary(const std::string& dir, const std::vector<SummaryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["name"] = r.name;
        j["passed"] = r.passed;
        j["margin"] = r.margin;
        j["slack"] = r.slack;
        j["paper_ref"] = r.paper_ref;
        arr.push_back(j);
    }
    std::ofstream(dir + "/summary.json") << arr.dump(2) << "\n";
}

} // namespace

ExperimentOutcome run_experiment(const KeyValueConfig& cfg, const std::string& out_dir) {
    cfg.reject_unknown({"operator", "grid", "solver", "schedule", "checks", "output",
                        "seed"});
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const Grid grid(static_cast<int>(cfg.get_int("grid.dim", 1)),
                    static_cast<std::size_t>(cfg.get_int("grid.n", 256)),
                    cfg.get_number("grid.L", 16.0));
    const OperatorSpec spec = operator_from_config(cfg, "operator", grid);

    EllipticSolveConfig solver;
    solver.tol_residual = cfg.get_number("solver.tol_residual", solver.tol_residual);
    solver.max_newton = static_cast<int>(cfg.get_int("solver.max_newton", solver.max_newton));
    solver.max_inner = static_cast<int>(cfg.get_int("solver.max_inner", solver.max_inner));
    solver.damping = cfg.get_number("solver.damping", solver.damping);

    const double m = cfg.get_number("schedule.m", 2.0);
    const double T = cfg.get_number("schedule.T", 1.0);
    const double dt = cfg.get_number("schedule.dt", 1e-2);
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));

    const std::string u0_spec = cfg.get_string("schedule.u0", "delta");
    Field u0(grid);
    if (u0_spec == "delta") u0[0] = 1.0 / grid.cell_volume();
    else if (u0_spec == "noise") u0 = uniform_noise(grid, seed);
    else if (u0_spec.rfind("file:", 0) == 0) u0 = read_field_csv(grid, u0_spec.substr(5));
    else throw ConfigError("schedule.u0: unknown initial data '" + u0_spec + "'");

    EvolveOptions opts;
    const std::string policy = cfg.get_string("schedule.snapshots", "geometric");
    if (policy == "geometric") opts.snapshots = SnapshotPolicy::GeometricInTime;
    else if (policy == "all") opts.snapshots = SnapshotPolicy::All;
    else if (policy == "final") opts.snapshots = SnapshotPolicy::Final;
    else throw ConfigError("schedule.snapshots: unknown policy '" + policy + "'");

    { // meta.json first: resolved config + version, useful even on failure
        nlohmann::json meta;
        meta["version"] = kVersion;
        nlohmann::json resolved;
        for (const auto& [k, v] : cfg.entries()) resolved[k] = v;
        meta["config"] = resolved;
        meta["operator"] = spec.describe();
        meta["grid"] = grid.describe();
        std::ofstream(out_dir + "/meta.json") << meta.dump(2) << "\n";
    }

    ExperimentOutcome outcome;
    Trajectory traj(grid, spec, m);
    try {
        traj = evolve(spec, u0, m, TimeGrid::uniform(T, dt), solver, opts);
    } catch (const SolverFailure&) {
        std::ofstream(out_dir + "/FAILED") << "solver failure during evolve\n";
        write_summary(out_dir, outcome.summary);
        outcome.status = 3;
        throw;
    }
    write_trajectory(traj, out_dir + "/trajectory");

    const double alpha = cfg.get_number("checks.alpha", spec.alpha_effective().value_or(1.0));
    const double p = cfg.get_number("checks.p", 2.0);

    for (const std::string& name : split_list(cfg.get_string("checks.list", ""))) {
        EstimateParams params;
        params.m = m;
        params.alpha = alpha;
        params.N = grid.dim();
        params.p = p;
        params.norm_u0_L1 = lp_norm(u0, 1.0);

        SummaryRow row;
        row.name = name;
        if (name == "decay-fit") {
            const double target = cfg.get_number("checks.slope_target");
            const double tol = cfg.get_number("checks.slope_tol", 0.1 * std::abs(target));
            const double t_max = traj.snapshots.back().first;
            const DecayFit fit = fit_decay_exponent(traj, t_max / 10.0, t_max);
            row.passed = std::abs(fit.slope - target) <= tol;
            row.margin = tol - std::abs(fit.slope - target);
            row.slack = tol;
            row.paper_ref = "sup-norm decay exponent t^{-N theta}";
            nlohmann::json j;
            j["slope"] = fit.slope;
            j["r_squared"] = fit.r_squared;
            std::ofstream(out_dir + "/" + name + ".json") << j.dump(2) << "\n";
            outcome.summary.push_back(row);
            continue;
        }

        EstimateReport rep(EstimateKind::DecayFit);
        if (name == "fundamental") {
            KernelReport gk = green_function(spec, grid);
            classify_assumptions(gk, alpha);
            write_kernel_report(gk, out_dir + "/green.json");
            std::vector<double> times;
            for (const auto& [t, u] : traj.snapshots)
                if (t > 0.0) times.push_back(t);
            const std::vector<std::size_t> pts = {0, grid.n() / 8,
                                                  grid.n() - grid.n() / 8, grid.n() - 1};
            rep = check_fundamental_bound(traj, gk, times, pts);
            row.paper_ref = "fundamental upper bound, G1/G2 route";
        } else if (name == "smoothing:G1") {
            KernelReport gk = green_function(spec, grid);
            classify_assumptions(gk, alpha);
            write_kernel_report(gk, out_dir + "/green.json");
            params.K1 = gk.fitted.K1;
            params.K2 = gk.fitted.K2;
            rep = check_smoothing(traj, params, SmoothingVariant::G1);
            row.paper_ref = "L1-Linf smoothing under (G1)";
        } else if (name == "smoothing:absolute") {
            if (spec.kind() == OperatorKind::Identity) {
                params.C1 = 1.0; // the identity Green function is the delta
            } else {
                KernelReport gk = green_function(spec, grid);
                write_kernel_report(gk, out_dir + "/green.json");
                params.C1 = lp_norm(gk.kernel, 1.0);
            }
            rep = check_smoothing(traj, params, SmoothingVariant::Absolute);
            row.paper_ref = "absolute bound under (G2)";
        } else if (name == "smoothing:G3") {
            KernelReport gk = green_resolvent(spec, grid);
            write_kernel_report(gk, out_dir + "/green_resolvent.json");
            params.Cp = lp_norm(gk.kernel, p);
            rep = check_smoothing(traj, params, SmoothingVariant::G3);
            row.paper_ref = "two-regime bound under (G3)";
        } else if (name == "smoothing:zero-order") {
            if (!spec.levy_kernel())
                throw ConfigError("smoothing:zero-order requires a 0-order operator");
            params.p = std::numeric_limits<double>::infinity();
            params.CJp = lp_norm_inf(*spec.levy_kernel());
            rep = check_smoothing(traj, params, SmoothingVariant::ZeroOrder);
            row.paper_ref = "zero-order two-regime smoothing";
        } else if (name == "implications") {
            const double gamma = alpha * params.theta_alpha();
            const PowerLawBound F =
                fit_smoothing_bound(traj, 1.0, gamma, grid.dim() * params.theta_alpha());
            rep = check_smoothing_implications(traj, F, gamma, 1.0, p);
            row.paper_ref = "Lq-Lp smoothing implications";
        } else {
            throw ConfigError("checks.list: unknown check '" + name + "'");
        }
        row.passed = rep.passed;
        row.margin = rep.margin_min;
        row.slack = rep.slack_used;
        const std::string stem = out_dir + "/" + estimate_kind_name(rep.kind);
        write_estimate_report(rep, row.paper_ref, stem + ".json");
        write_estimate_table_csv(rep, stem + ".csv");
        outcome.summary.push_back(row);
    }

    write_summary(out_dir, outcome.summary);
    for (const auto& r : outcome.summary)
        if (!r.passed) outcome.status = 1;
    return outcome;
}

std::string preset_config(const std::string& name) {
    if (name == "ode-absolute-bound")
        return "seed = 11\n"
               "[operator]\n"
               "kind = identity\n"
               "[grid]\n"
               "dim = 1\nn = 8\nL = 1.0\n"
               "[schedule]\n"
               "m = 2.0\nT = 1.0\ndt = 0.0078125\nu0 = noise\nsnapshots = all\n"
               "[checks]\n"
               "list = smoothing:absolute\n";
    if (name == "fractional-smoothing-1d")
        return "seed = 0\n"
               "[operator]\n"
               "kind = fractional_laplacian\nalpha = 1.0\n"
               "[grid]\n"
               "dim = 1\nn = 1024\nL = 32.0\n"
               "[schedule]\n"
               "m = 2.0\nT = 5.0\ndt = 0.00390625\nu0 = delta\nsnapshots = geometric\n"
               "[checks]\n"
               "list = smoothing:G1, fundamental, decay-fit\n"
               "alpha = 1.0\n"
               "slope_target = -0.5\n";
    throw ConfigError("unknown preset '" + name + "'");
}

} // namespace nldiff
