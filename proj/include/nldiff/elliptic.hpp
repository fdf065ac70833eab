#pragma once

#include "nldiff/grid.hpp"
#include "nldiff/operators.hpp"

#include <stdexcept>
#include <string>

namespace nldiff {

struct EllipticSolveConfig {
    double tol_residual = 1e-9; // relative to ||f||_2
    int max_newton = 50;
    int max_inner = 500;
    double damping = 1.0; // initial Newton damping in (0, 1]
    bool positivity_clamp = true;

    void validate() const {
        if (!(tol_residual > 0.0) || tol_residual > 1e-3)
            throw std::invalid_argument("tol_residual must be in (0, 1e-3]");
        if (max_newton < 1 || max_inner < 1)
            throw std::invalid_argument("iteration limits must be positive");
        if (!(damping > 0.0) || damping > 1.0)
            throw std::invalid_argument("damping must be in (0, 1]");
    }
};

struct EllipticSolveReport {
    Field solution;
    double residual = 0.0; // ||u + lambda (-L)[u^m] - f||_2, absolute
    /// Residual with the positivity clamp treated as a projection: on cells
    /// held at zero only the descent direction counts (min(F, 0)). Equals
    /// `residual` when no cell is clamped.
    double projected_residual = 0.0;
    int newton_iters = 0;
    int inner_iters = 0;
    double clamped_fraction = 0.0;

    explicit EllipticSolveReport(Field u) : solution(std::move(u)) {}
};

struct SolverFailure : std::runtime_error {
    double last_residual;
    SolverFailure(const std::string& what, double res)
        : std::runtime_error(what), last_residual(res) {}
};

/// Solve u + lambda (-L)[u^m] = f for nonnegative f via semismooth Newton.
/// m = 1 is the exact spectral division; lambda = 0 returns f. The Jacobian
/// action v -> v + lambda (-L)[m |u|^{m-1} v] is inverted by preconditioned CG
/// with the constant-coefficient solve as preconditioner; the degenerate weight
/// is floored at 1e-12 while residuals are always tested on the unregularized
/// equation. With the positivity clamp on, convergence is judged on the
/// projected residual: the spectral discretization can undershoot zero by
/// ~1e-8 at free boundaries, and the projection absorbs exactly that defect.
EllipticSolveReport resolvent_step(const OperatorSpec& spec, double lambda,
                                   const Field& f, double m,
                                   const EllipticSolveConfig& cfg = {});

} // namespace nldiff
