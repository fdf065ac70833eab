#pragma once

#include "nldiff/grid.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nldiff {

enum class OperatorKind {
    FractionalLaplacian,   // |xi|^alpha, alpha in (0,2]
    Laplacian,             // |xi|^2
    AnisotropicFractionalSum, // sum_i |xi_i|^{alpha_i}
    RelativisticSchrodinger,  // (kappa^2+|xi|^2)^{alpha/2} - kappa^alpha
    BesselResolvent,       // (1+|xi|^2)^{alpha/2}
    GeometricStable,       // log(1+|xi|^alpha)
    Convolution0Order,     // 1 - Jhat(xi), J >= 0 with unit mass
    Identity,              // 1
    Shifted,               // c + base
    Sum,                   // left + right
};

/// A symmetric nonnegative translation-invariant operator, realized through its
/// Fourier symbol. Immutable after construction; parameters are validated here
/// rather than at evaluation time.
class OperatorSpec {
public:
    static OperatorSpec fractional_laplacian(double alpha);
    static OperatorSpec laplacian();
    static OperatorSpec anisotropic_fractional_sum(std::vector<double> alphas);
    static OperatorSpec relativistic_schrodinger(double alpha, double kappa);
    static OperatorSpec bessel_resolvent(double alpha);
    static OperatorSpec geometric_stable(double alpha);
    /// kernel must be nonnegative, even, and have discrete mass 1 within 1e-8.
    static OperatorSpec convolution_zero_order(Field kernel);
    static OperatorSpec identity();
    static OperatorSpec shifted(double c, OperatorSpec base);
    static OperatorSpec sum(OperatorSpec left, OperatorSpec right);

    OperatorKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double kappa() const { return kappa_; }
    double shift() const { return shift_; }
    const std::vector<double>& alphas() const { return alphas_; }
    const OperatorSpec& left() const { return *left_; }
    const OperatorSpec& right() const { return *right_; }
    /// Lévy density for Convolution0Order; absent for spectral-only kinds.
    const std::optional<Field>& levy_kernel() const { return levy_kernel_; }

    /// Local scaling order used by estimate checkers (2 for Laplacian, alpha for
    /// fractional kinds); absent where no power order applies.
    std::optional<double> alpha_effective() const { return alpha_effective_; }
    void set_alpha_effective(double a) { alpha_effective_ = a; }

    /// sigma(0) == 0, i.e. the linear flow conserves mass.
    bool conserves_mass() const;

    std::string describe() const;

private:
    OperatorSpec() = default;

    OperatorKind kind_{OperatorKind::Identity};
    double alpha_{0.0};
    double kappa_{0.0};
    double shift_{0.0};
    std::vector<double> alphas_;
    std::shared_ptr<const OperatorSpec> left_;
    std::shared_ptr<const OperatorSpec> right_;
    std::optional<Field> levy_kernel_;
    std::optional<double> alpha_effective_;
};

/// Symbol value sigma(xi) at an arbitrary frequency vector (size = spatial dim).
double symbol(const OperatorSpec& spec, const std::vector<double>& xi);

/// Symbol sampled at every grid frequency, row-major. For Convolution0Order the
/// kernel's grid must match.
std::vector<double> symbol_on_grid(const OperatorSpec& spec, const Grid& grid);

/// Spectral application u -> (-L)[u].
Field apply(const OperatorSpec& spec, const Field& u);

/// Quadratic form Q[f] = sum_xi sigma(xi) |f_hat(xi)|^2 (Parseval form).
double quadratic_form(const OperatorSpec& spec, const Field& f);

/// Built-in unit-mass kernels for Convolution0Order: "gaussian", "box",
/// "exponential"; `width` is the length scale.
Field builtin_kernel(const Grid& grid, const std::string& family, double width);

} // namespace nldiff
