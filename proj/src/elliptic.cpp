#include "nldiff/elliptic.hpp"
#include "nldiff/fft.hpp"

#include <algorithm>
#include <cmath>

namespace nldiff {

namespace {

double l2(const std::vector<double>& v, double w) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc * w);
}

// Projected residual: on clamped cells (u = 0) only the descent part of F
// counts, i.e. min(F, 0); elsewhere the full F.
double projected_l2(const Field& u, const Field& F, double w, bool clamping) {
    double acc = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        double r = F[i];
        if (clamping && u[i] == 0.0 && r > 0.0) r = 0.0;
        acc += r * r;
    }
    return std::sqrt(acc * w);
}

} // namespace

EllipticSolveReport resolvent_step(const OperatorSpec& spec, double lambda,
                                   const Field& f, double m,
                                   const EllipticSolveConfig& cfg) {
    cfg.validate();
    if (!(lambda >= 0.0)) throw std::invalid_argument("resolvent_step: lambda >= 0");
    if (!(m >= 1.0)) throw std::invalid_argument("resolvent_step: m >= 1");
    double fmin = 0.0;
    for (double v : f.values()) fmin = std::min(fmin, v);
    if (fmin < -1e-12)
        throw std::invalid_argument("resolvent_step: f must be nonnegative "
                                    "(sign-changing data is rejected, not odd-extended)");

    const Grid& grid = f.grid();
    const double w = grid.cell_volume();
    const double norm_f = l2(f.values(), w);

    if (lambda == 0.0) {
        EllipticSolveReport rep(f);
        return rep;
    }

    const auto sig = symbol_on_grid(spec, grid);

    auto residual_field = [&](const Field& u) {
        Field r = apply_multiplier(power(u, m), sig);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] + lambda * r[i] - f[i];
        return r;
    };

    if (m == 1.0) {
        // exact single spectral division u_hat = f_hat / (1 + lambda sigma)
        std::vector<double> mult(sig.size());
        for (std::size_t i = 0; i < sig.size(); ++i) mult[i] = 1.0 / (1.0 + lambda * sig[i]);
        Field u = apply_multiplier(f, mult);
        std::size_t negatives = 0;
        if (cfg.positivity_clamp) {
            for (double v : u.values())
                if (v < 0.0) ++negatives;
            u.clamp_nonnegative();
        }
        EllipticSolveReport rep(std::move(u));
        const Field F = residual_field(rep.solution);
        rep.residual = l2(F.values(), w);
        rep.projected_residual =
            projected_l2(rep.solution, F, w, cfg.positivity_clamp);
        rep.clamped_fraction =
            static_cast<double>(negatives) / static_cast<double>(rep.solution.size());
        return rep;
    }

    Field u = f; // exact at lambda = 0, ordered start for the monotone problem
    Field F = residual_field(u);
    double res = projected_l2(u, F, w, cfg.positivity_clamp);
    const double target = cfg.tol_residual * std::max(norm_f, 1e-300);

    int newton = 0;
    int inner_total = 0;
    std::size_t clamped_last = 0;
    while (res > target && newton < cfg.max_newton) {
        // Jacobian weight with degeneracy floor; residuals stay unregularized.
        // J = I + lambda (-L) diag(w) is self-adjoint only in the w-weighted
        // inner product, so CG runs on the symmetrized operator
        // I + lambda W^{1/2} (-L) W^{1/2} in the variable y = W^{1/2} v.
        std::vector<double> sqw(u.size());
        double wbar = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double wi = std::max(m * std::pow(std::abs(u[i]), m - 1.0), 1e-12);
            sqw[i] = std::sqrt(wi);
            wbar += wi;
        }
        wbar /= static_cast<double>(u.size());

        std::vector<double> prec(sig.size());
        for (std::size_t i = 0; i < sig.size(); ++i)
            prec[i] = 1.0 / (1.0 + lambda * sig[i] * wbar);

        auto jac_sym = [&](const Field& y) {
            Field jy(grid);
            for (std::size_t i = 0; i < y.size(); ++i) jy[i] = sqw[i] * y[i];
            jy = apply_multiplier(jy, sig);
            for (std::size_t i = 0; i < y.size(); ++i)
                jy[i] = y[i] + lambda * sqw[i] * jy[i];
            return jy;
        };

        // Preconditioned CG on the SPD symmetrized Jacobian.
        Field y(grid);
        Field r(grid);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = -sqw[i] * F[i];
        const double rhs_norm = l2(r.values(), w);
        Field z = apply_multiplier(r, prec);
        Field p = z;
        double rz = inner_product(r, z);
        int inner = 0;
        while (inner < cfg.max_inner) {
            Field jp = jac_sym(p);
            const double pjp = inner_product(p, jp);
            if (!(pjp > 0.0)) break;
            const double a = rz / pjp;
            for (std::size_t i = 0; i < y.size(); ++i) {
                y[i] += a * p[i];
                r[i] -= a * jp[i];
            }
            ++inner;
            if (l2(r.values(), w) <= 1e-12 * rhs_norm) break;
            z = apply_multiplier(r, prec);
            const double rz_new = inner_product(r, z);
            const double beta = rz_new / rz;
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
            rz = rz_new;
        }
        inner_total += inner;
        Field v(grid);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = y[i] / sqw[i];

        // Backtracking damping: halve until the (projected) residual decreases.
        double step = cfg.damping;
        bool accepted = false;
        for (int halving = 0; halving < 20; ++halving) {
            Field u_try(grid);
            std::size_t negatives = 0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                u_try[i] = u[i] + step * v[i];
                if (u_try[i] < 0.0) ++negatives;
            }
            if (cfg.positivity_clamp) u_try.clamp_nonnegative();
            Field F_try = residual_field(u_try);
            const double res_try = projected_l2(u_try, F_try, w, cfg.positivity_clamp);
            if (res_try < res) {
                u = std::move(u_try);
                F = std::move(F_try);
                res = res_try;
                accepted = true;
                clamped_last = cfg.positivity_clamp ? negatives : 0;
                break;
            }
            step *= 0.5;
        }
        ++newton;
        if (!accepted)
            throw SolverFailure("resolvent_step: damping exhausted without progress "
                                "(residual " + std::to_string(res) + ")", res);
    }
    if (res > target)
        throw SolverFailure("resolvent_step: no convergence after max_newton iterations "
                            "(residual " + std::to_string(res) + ")", res);

    EllipticSolveReport rep(std::move(u));
    rep.residual = l2(F.values(), w);
    rep.projected_residual = res;
    rep.newton_iters = newton;
    rep.inner_iters = inner_total;
    rep.clamped_fraction =
        static_cast<double>(clamped_last) / static_cast<double>(rep.solution.size());
    return rep;
}

} // namespace nldiff
