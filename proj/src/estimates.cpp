#include "nldiff/estimates.hpp"

#include <algorithm>
#include <cmath>

namespace nldiff {

double EstimateParams::C_smoothing_G1() const {
    const double th = theta_alpha();
    return std::pow(2.0, 1.0 / m) * std::pow(C_m(), N * th) *
           std::pow(m / (m - 1.0), alpha * th) * std::pow(K1.value(), (N - alpha) * th) *
           std::pow(K2.value(), alpha * th);
}

double EstimateParams::C_tilde_G1prime() const {
    return std::pow(2.0 * m / (m - 1.0) * C_m() * K3.value(), 1.0 / m);
}

double EstimateParams::t0_G1prime() const {
    const double am = alpha * m / (m - 1.0);
    return std::pow(2.0, m) * std::pow(m / (m - 1.0), -(m - 1.0)) * C_m() *
           std::pow(K1.value(), m) * std::pow(K2.value(), am) *
           std::pow(K3.value(), -(am + (m - 1.0))) * std::pow(norm_u0_L1, -(m - 1.0));
}

double EstimateParams::C_tilde_combined() const {
    return 2.0 * std::pow(std::pow(C_m() * K1.value(), m / (m - 1.0)) +
                              m / (m - 1.0) * C_m() * K2.value(),
                          1.0 / m);
}

double EstimateParams::C_tilde_absolute() const {
    return std::pow(std::pow(2.0, m / (m - 1.0)) * C1.value(), 1.0 / (m - 1.0));
}

double EstimateParams::level_G3() const {
    const double e = 1.0 - 1.0 / p;
    return 2.0 * std::pow(C_m_resolvent(), e) * std::pow(Cp.value(), e) * norm_u0_L1;
}

double EstimateParams::t0_G3() const {
    const double e = 1.0 - 1.0 / p;
    const double lvl = std::pow(C_m_resolvent(), e) * std::pow(Cp.value(), e);
    return 1.0 / (m - 1.0) * std::pow(lvl, -(m - 1.0)) * std::pow(norm_u0_L1, -(m - 1.0));
}

double EstimateParams::coeff_zero_order_small() const {
    const double q = q_conjugate();
    return 2.0 * std::pow(m * q * std::pow(C_m(), m / (m - 1.0)), 1.0 / m);
}

double EstimateParams::level_zero_order() const {
    const double q = q_conjugate();
    return 2.0 * std::pow(m * C_m() / (m - 1.0) * CJp.value(), q) * norm_u0_L1;
}

double EstimateParams::t0_zero_order() const {
    const double q = q_conjugate();
    return std::pow(m * q, (m - 1.0) / m) *
           std::pow(m / (m - 1.0) * CJp.value(), -q * (m - 1.0)) *
           std::pow(C_m(), 1.0 - q * (m - 1.0)) * std::pow(norm_u0_L1, -(m - 1.0));
}

std::string estimate_kind_name(EstimateKind k) {
    switch (k) {
        case EstimateKind::FundamentalBound: return "fundamental";
        case EstimateKind::FundamentalBoundResolvent: return "fundamental-resolvent";
        case EstimateKind::SmoothingG1: return "smoothing:G1";
        case EstimateKind::SmoothingG1prime: return "smoothing:G1prime";
        case EstimateKind::SmoothingCombined: return "smoothing:combined";
        case EstimateKind::SmoothingG3: return "smoothing:G3";
        case EstimateKind::SmoothingAbsolute: return "smoothing:absolute";
        case EstimateKind::SmoothingZeroOrder: return "smoothing:zero-order";
        case EstimateKind::DecayFit: return "decay-fit";
        case EstimateKind::SmoothingImplications: return "implications";
    }
    return "?";
}

bool snapshot_resolved(const Field& u, std::size_t min_cells) {
    const double cutoff = 1e-6 * lp_norm_inf(u);
    if (cutoff == 0.0) return false;
    std::size_t cells = 0;
    for (double v : u.values())
        if (std::abs(v) > cutoff && ++cells >= min_cells) return true;
    return false;
}

namespace {

double normalized_margin(double lhs, double rhs) {
    const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return (rhs - lhs) / denom;
}

void track_worst(EstimateReport& rep, double margin, double t, std::size_t pt) {
    if (margin < rep.margin_min) {
        rep.margin_min = margin;
        rep.worst_time = t;
        rep.worst_point = pt;
    }
}

} // namespace

EstimateReport check_fundamental_bound(const Trajectory& traj,
                                       const KernelReport& green,
                                       const std::vector<double>& sample_times,
                                       const std::vector<std::size_t>& sample_points,
                                       double slack, bool skip_contaminated) {
    if (!(traj.m >= 1.2))
        throw std::invalid_argument("check_fundamental_bound: restricted to m >= 1.2 "
                                    "(the constant blows up as m -> 1+)");
    if (green.kind != KernelKind::Green)
        throw std::invalid_argument("check_fundamental_bound: needs a plain Green kernel");
    EstimateReport rep(EstimateKind::FundamentalBound);
    rep.slack_used = slack;
    const double Cm = std::pow(2.0, traj.m / (traj.m - 1.0));
    for (double t : sample_times) {
        const Field& u = traj.at_time(t);
        if (!snapshot_resolved(u)) {
            ++rep.skipped_snapshots;
            continue;
        }
        if (skip_contaminated && boundary_mass_fraction(u) > 1e-6) {
            ++rep.skipped_snapshots;
            rep.notes.push_back("skipped boundary-contaminated snapshot t=" +
                                std::to_string(t));
            continue;
        }
        const Field conv = convolve(u, green.kernel);
        const Field um = power(u, traj.m);
        for (std::size_t pt : sample_points) {
            const double lhs = um[pt];
            const double rhs = Cm / t * conv[pt];
            const double margin = normalized_margin(lhs, rhs);
            track_worst(rep, margin, t, pt);
            rep.data_table.push_back({t, lhs, rhs, margin});
        }
    }
    rep.finish();
    return rep;
}

EstimateReport check_fundamental_bound_resolvent(
    const Trajectory& traj, const KernelReport& green_res,
    const std::vector<double>& sample_times,
    const std::vector<std::size_t>& sample_points, double slack) {
    if (!(traj.m >= 1.2))
        throw std::invalid_argument("check_fundamental_bound_resolvent: m >= 1.2");
    if (green_res.kind != KernelKind::ResolventGreen)
        throw std::invalid_argument("needs a resolvent Green kernel");
    EstimateReport rep(EstimateKind::FundamentalBoundResolvent);
    rep.slack_used = slack;
    const double m = traj.m;
    const double Cm = 2.0 * std::pow(1.0 + m, m / (m - 1.0));
    for (double t : sample_times) {
        const Field& u = traj.at_time(t);
        if (!snapshot_resolved(u)) {
            ++rep.skipped_snapshots;
            continue;
        }
        const double lambda = std::pow(lp_norm_inf(u), m - 1.0);
        if (!(lambda > 1.0 / ((m - 1.0) * t))) {
            rep.notes.push_back("lambda condition not met at t=" + std::to_string(t));
            continue;
        }
        const Field conv = convolve(u, green_res.kernel);
        const Field um = power(u, m);
        for (std::size_t pt : sample_points) {
            const double lhs = um[pt];
            const double rhs = Cm * lambda * conv[pt];
            const double margin = normalized_margin(lhs, rhs);
            track_worst(rep, margin, t, pt);
            rep.data_table.push_back({t, lhs, rhs, margin});
        }
    }
    rep.finish();
    return rep;
}

EstimateReport check_smoothing(const Trajectory& traj, const EstimateParams& params,
                               SmoothingVariant variant, double slack) {
    EstimateKind kind = EstimateKind::SmoothingG1;
    switch (variant) {
        case SmoothingVariant::G1: kind = EstimateKind::SmoothingG1; break;
        case SmoothingVariant::G1prime: kind = EstimateKind::SmoothingG1prime; break;
        case SmoothingVariant::Combined: kind = EstimateKind::SmoothingCombined; break;
        case SmoothingVariant::G3: kind = EstimateKind::SmoothingG3; break;
        case SmoothingVariant::Absolute: kind = EstimateKind::SmoothingAbsolute; break;
        case SmoothingVariant::ZeroOrder: kind = EstimateKind::SmoothingZeroOrder; break;
    }
    auto need = [&](const std::optional<double>& c, const char* what) {
        if (!c)
            throw std::invalid_argument(std::string("check_smoothing: missing fitted "
                                                    "constant ") +
                                        what + " for " + estimate_kind_name(kind));
    };
    switch (variant) {
        case SmoothingVariant::G1:
        case SmoothingVariant::Combined:
            need(params.K1, "K1 (classification G1)");
            need(params.K2, "K2 (classification G1)");
            break;
        case SmoothingVariant::G1prime:
            need(params.K1, "K1 (classification G1')");
            need(params.K2, "K2 (classification G1')");
            need(params.K3, "K3 (classification G1')");
            break;
        case SmoothingVariant::G3:
            need(params.Cp, "Cp (classification G3)");
            break;
        case SmoothingVariant::Absolute:
            need(params.C1, "C1 (classification G2)");
            break;
        case SmoothingVariant::ZeroOrder:
            need(params.CJp, "C_{J,p} (assumption J2)");
            break;
    }

    EstimateReport rep(kind);
    rep.slack_used = slack;
    const double m = params.m;
    const double u0l1 = params.norm_u0_L1;

    auto rhs_at = [&](double t) -> double {
        switch (variant) {
            case SmoothingVariant::G1:
                return params.C_smoothing_G1() * std::pow(t, -params.N * params.theta_alpha()) *
                       std::pow(u0l1, params.alpha * params.theta_alpha());
            case SmoothingVariant::G1prime: {
                const double t0 = params.t0_G1prime();
                if (t <= t0)
                    return params.C_smoothing_G1() *
                           std::pow(t, -params.N * params.theta_alpha()) *
                           std::pow(u0l1, params.alpha * params.theta_alpha());
                return params.C_tilde_G1prime() * std::pow(t, -1.0 / m) *
                       std::pow(u0l1, 1.0 / m);
            }
            case SmoothingVariant::Combined: {
                // Branch-assigned bound: the alpha branch below the crossover
                // time ||u0||_1^{-(m-1)}, the alpha=2 branch above. The two
                // branches meet there, so this equals max(b1, b2); the min is
                // NOT a valid bound (the large-time branch fails as t -> 0).
                const double th_a = params.theta_alpha();
                const double th_2 = 1.0 / (2.0 + params.N * (m - 1.0));
                const double C = params.C_tilde_combined();
                const double b1 =
                    C * std::pow(t, -params.N * th_a) * std::pow(u0l1, params.alpha * th_a);
                const double b2 =
                    C * std::pow(t, -params.N * th_2) * std::pow(u0l1, 2.0 * th_2);
                return std::max(b1, b2);
            }
            case SmoothingVariant::G3: {
                // branch-assigned: decaying branch up to t0, the constant level
                // beyond; the branches cross exactly at t0
                const double b1 = 2.0 * std::pow(m - 1.0, -1.0 / (m - 1.0)) *
                                  std::pow(t, -1.0 / (m - 1.0));
                const double b2 = params.level_G3();
                return std::max(b1, b2);
            }
            case SmoothingVariant::Absolute:
                return params.C_tilde_absolute() * std::pow(t, -1.0 / (m - 1.0));
            case SmoothingVariant::ZeroOrder: {
                const double t0 = params.t0_zero_order();
                if (t <= t0)
                    return params.coeff_zero_order_small() * std::pow(t, -1.0 / (m - 1.0));
                return params.level_zero_order();
            }
        }
        return 0.0;
    };

    // reported alongside margins: the empirical prefactor of the decay law
    double decay_exponent = 0.0;
    switch (variant) {
        case SmoothingVariant::G1:
        case SmoothingVariant::G1prime:
        case SmoothingVariant::Combined:
            decay_exponent = params.N * params.theta_alpha();
            break;
        default:
            decay_exponent = 1.0 / (m - 1.0);
            break;
    }

    for (const auto& [t, u] : traj.snapshots) {
        if (t <= 0.0) continue;
        if (!snapshot_resolved(u)) {
            ++rep.skipped_snapshots;
            continue;
        }
        const double lhs = lp_norm_inf(u);
        const double rhs = rhs_at(t);
        const double margin = (rhs - lhs) / std::max(rhs, 1e-300);
        track_worst(rep, margin, t, 0);
        rep.data_table.push_back({t, lhs, rhs, margin});
        rep.empirical_prefactor =
            std::max(rep.empirical_prefactor, lhs * std::pow(t, decay_exponent));
    }
    rep.finish();
    return rep;
}

DecayFit fit_decay_exponent(const Trajectory& traj, double t_min, double t_max) {
    DecayFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t k = 0;
    for (const auto& [t, u] : traj.snapshots) {
        if (t < t_min || t > t_max || t <= 0.0) continue;
        const double v = lp_norm_inf(u);
        if (!(v > 0.0)) continue;
        const double x = std::log(t), y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++k;
    }
    fit.points = k;
    if (k < 2) return fit;
    const double n = static_cast<double>(k);
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [t, u] : traj.snapshots) {
        if (t < t_min || t > t_max || t <= 0.0) continue;
        const double v = lp_norm_inf(u);
        if (!(v > 0.0)) continue;
        const double e = std::log(v) - (intercept + fit.slope * std::log(t));
        ss_res += e * e;
    }
    fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

PowerLawBound fit_smoothing_bound(const Trajectory& traj, double q, double gamma,
                                  double exponent) {
    PowerLawBound F;
    F.exponent = exponent;
    double A = 0.0;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& [t0, u0] = traj.snapshots[i];
        if (!snapshot_resolved(u0)) continue;
        const double uq = lp_norm(u0, q);
        for (std::size_t j = i + 1; j < traj.snapshots.size(); ++j) {
            const auto& [t1, u1] = traj.snapshots[j];
            const double s = t1 - t0;
            if (!(s > 0.0)) continue;
            const double need =
                lp_norm_inf(u1) * std::pow(s, exponent) / std::pow(uq, gamma);
            A = std::max(A, need);
        }
    }
    F.amplitude = A;
    return F;
}

EstimateReport check_smoothing_implications(const Trajectory& traj,
                                            const PowerLawBound& F, double gamma,
                                            double q, double p, double slack) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("implications: gamma in [0,1)");
    if (!(q >= 1.0) || !(p > 1.0))
        throw std::invalid_argument("implications: q >= 1, p > 1");
    EstimateReport rep(EstimateKind::SmoothingImplications);
    rep.slack_used = slack;
    const double r = 1.0; // derived bounds are checked from L^1 data
    const double denom = (1.0 - gamma) * q + gamma * r;
    // L^r-L^inf exponents from interpolation + absorption
    const double eF_inf = q / denom;
    const double eU_inf = gamma * r / denom;
    // L^r-L^p exponents via Lp-decay interpolation
    const double eF_p = (q / p) * (p - r) / denom;
    const double eU_p = (r / p) * ((1.0 - gamma) * q + gamma * p) / denom;

    auto Fval = [&](double s) { return F.amplitude * std::pow(s, -F.exponent); };

    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& [t0, u0] = traj.snapshots[i];
        if (!snapshot_resolved(u0)) {
            ++rep.skipped_snapshots;
            continue;
        }
        const double ur = lp_norm(u0, r);
        for (std::size_t j = i + 1; j < traj.snapshots.size(); ++j) {
            const auto& [t1, u1] = traj.snapshots[j];
            const double s = t1 - t0;
            if (!(s > 0.0)) continue;
            {
                const double lhs = lp_norm_inf(u1);
                const double rhs = std::pow(Fval(s), eF_inf) * std::pow(ur, eU_inf);
                const double margin = (rhs - lhs) / std::max(rhs, 1e-300);
                track_worst(rep, margin, t1, 0);
                rep.data_table.push_back({t1, lhs, rhs, margin});
            }
            {
                const double lhs = lp_norm(u1, p);
                const double rhs = std::pow(Fval(s), eF_p) * std::pow(ur, eU_p);
                const double margin = (rhs - lhs) / std::max(rhs, 1e-300);
                track_worst(rep, margin, t1, 1);
                rep.data_table.push_back({t1, lhs, rhs, margin});
            }
        }
    }
    rep.finish();
    return rep;
}

} // namespace nldiff
