#include "nldiff/inequalities.hpp"
#include "nldiff/fft.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nldiff {

double nash_quotient(const OperatorSpec& spec, const Field& f, double alpha, int N) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("nash: alpha in (0,2]");
    if (!(alpha < N)) throw std::invalid_argument("nash: requires alpha < N");
    const double two_star = 2.0 * N / (N - alpha);
    const double theta = 0.5 * (two_star - 2.0) / (two_star - 1.0);
    const double l2 = lp_norm(f, 2.0);
    if (!(l2 > 0.0)) throw std::invalid_argument("nash: f must be nonzero");
    const double l1 = lp_norm(f, 1.0);
    const double Q = quadratic_form(spec, f);
    return l2 / (std::pow(l1, theta) * std::pow(Q, 0.5 * (1.0 - theta)));
}

double gns_theta(double p_tilde, double q_tilde, double two_star) {
    return (q_tilde / p_tilde) * (two_star - p_tilde) / (two_star - q_tilde);
}

double gns_quotient(const OperatorSpec& spec, const Field& f, double p_tilde,
                    double q_tilde, double two_star, double m) {
    const double lo_p = (1.0 + m) / m;
    if (!(p_tilde >= lo_p && p_tilde < 2.0))
        throw std::invalid_argument("gns: p_tilde must lie in [(1+m)/m, 2)");
    if (!(q_tilde >= 1.0 / m && q_tilde < p_tilde))
        throw std::invalid_argument("gns: q_tilde must lie in [1/m, p_tilde)");
    const double theta = gns_theta(p_tilde, q_tilde, two_star);
    // L^q "norms" with q < 1 are admissible here (the paper uses the same
    // quantity even though it is not a proper norm).
    const Grid& g = f.grid();
    auto lq = [&](double q) {
        double acc = 0.0;
        for (double v : f.values()) acc += std::pow(std::abs(v), q);
        return std::pow(acc * g.cell_volume(), 1.0 / q);
    };
    const double lp = lq(p_tilde);
    if (!(lp > 0.0)) throw std::invalid_argument("gns: f must be nonzero");
    const double lqv = lq(q_tilde);
    const double Q = quadratic_form(spec, f);
    return lp / (std::pow(lqv, theta) * std::pow(Q, 0.5 * (1.0 - theta)));
}

StroockVaropoulosResult stroock_varopoulos_check(const OperatorSpec& spec,
                                                 const Field& u, double p, double m) {
    double mn = 0.0;
    for (double v : u.values()) mn = std::min(mn, v);
    if (mn < -1e-12) throw std::invalid_argument("stroock_varopoulos: u must be >= 0");
    StroockVaropoulosResult r{};
    const double c = 4.0 * m * (p - 1.0) / ((p + m - 1.0) * (p + m - 1.0));
    r.lhs = inner_product(power(u, p - 1.0), apply(spec, power(u, m)));
    r.rhs = c * quadratic_form(spec, power(u, 0.5 * (p + m - 1.0)));
    r.slack = r.lhs - r.rhs;
    return r;
}

Field gaussian_bump(const Grid& grid, double width) {
    Field f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = grid.radius(i);
        f[i] = std::exp(-r * r / (2.0 * width * width));
    }
    return f;
}

Field mollified_block(const Grid& grid, double radius) {
    // indicator of B_radius mollified over one cell width
    const double h = grid.spacing();
    Field f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = grid.radius(i);
        f[i] = 0.5 * (1.0 - std::tanh((r - radius) / h));
    }
    return f;
}

Field two_bumps(const Grid& grid, double width, double separation) {
    Field f(grid);
    const double half = separation / 2.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = grid.unravel(i);
        const double x0 = grid.coordinate(idx[0]);
        double r2a = (x0 - half) * (x0 - half);
        double r2b = (x0 + half) * (x0 + half);
        for (int d = 1; d < grid.dim(); ++d) {
            const double xd = grid.coordinate(idx[static_cast<std::size_t>(d)]);
            r2a += xd * xd;
            r2b += xd * xd;
        }
        f[i] = std::exp(-r2a / (2.0 * width * width)) +
               std::exp(-r2b / (2.0 * width * width));
    }
    return f;
}

Field band_limited_noise(const Grid& grid, double cutoff_fraction, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Field white(grid);
    for (auto& v : white.values()) v = unif(rng);
    const double nyq = M_PI * static_cast<double>(grid.n()) / grid.side();
    const double cutoff = cutoff_fraction * nyq;
    SpectralField s = dft(white);
    auto& c = s.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto idx = grid.unravel(i);
        double k2 = 0.0;
        for (int d = 0; d < grid.dim(); ++d) {
            const double k = grid.frequency(idx[static_cast<std::size_t>(d)]);
            k2 += k * k;
        }
        if (std::sqrt(k2) > cutoff) c[i] = 0.0;
    }
    Field f = idft(s);
    double mn = f[0];
    for (double v : f.values()) mn = std::min(mn, v);
    for (auto& v : f.values()) v -= mn; // shift to nonnegative
    return f;
}

Field uniform_noise(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Field f(grid);
    for (auto& v : f.values()) v = unif(rng);
    return f;
}

QuotientReport nash_family_report(const OperatorSpec& spec, const Grid& grid,
                                  double alpha, int N, int samples) {
    QuotientReport rep;
    rep.inequality = QuotientKind::Nash;
    rep.family = "gaussians";
    // up to three decades of width; desk-scale grids cap the range at
    // [h, L/8], which is what a width sweep can resolve without the bump
    // overlapping its periodic images
    const double w_lo = grid.spacing();
    const double w_hi = std::min(1000.0 * w_lo, grid.side() / 8.0);
    for (int i = 0; i < samples; ++i) {
        const double w =
            w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / (samples - 1));
        const Field f = gaussian_bump(grid, w);
        rep.parameter.push_back(w);
        rep.quotient.push_back(nash_quotient(spec, f, alpha, N));
    }
    rep.sup_quotient = *std::max_element(rep.quotient.begin(), rep.quotient.end());
    // unbounded-trend: quotient grows by >= factor 2 per halving across 3
    // consecutive halvings of the width (checked on the small-width end)
    int consecutive = 0;
    for (std::size_t i = 0; i + 1 < rep.parameter.size(); ++i) {
        // find j with parameter[j] ~ parameter[i]*2
        for (std::size_t j = i + 1; j < rep.parameter.size(); ++j) {
            if (std::abs(rep.parameter[j] / rep.parameter[i] - 2.0) < 0.05) {
                if (rep.quotient[i] >= 2.0 * rep.quotient[j]) ++consecutive;
                else consecutive = 0;
                break;
            }
        }
        if (consecutive >= 3) {
            rep.trend = "unbounded-trend";
            break;
        }
    }
    return rep;
}

std::vector<EnergyIdentityRow> energy_identity_rows(const Trajectory& traj) {
    std::vector<EnergyIdentityRow> rows;
    const double m = traj.m;
    for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
        const auto& [t0, u0] = traj.snapshots[j];
        const auto& [t1, u1] = traj.snapshots[j + 1];
        const double dt = t1 - t0;
        if (!(dt > 0.0)) continue;
        const double I0 = integral(power(u0, m + 1.0));
        const double I1 = integral(power(u1, m + 1.0));
        const Field u1m = power(u1, m);
        const double dirichlet = inner_product(u1m, apply(traj.spec, u1m));
        EnergyIdentityRow row;
        row.t = t1;
        row.residual = std::abs((I1 - I0) / dt + (m + 1.0) * dirichlet);
        row.dirichlet = dirichlet;
        rows.push_back(row);
    }
    return rows;
}

} // namespace nldiff
