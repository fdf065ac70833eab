#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nldiff {

/// Periodic torus discretization of [-L/2, L/2)^dim with n points per axis.
///
/// Storage is in FFT index order: along each axis, index i corresponds to the
/// signed coordinate i*h for i < n/2 and i*h - L for i >= n/2, so the origin
/// sits at index 0 and grid frequencies are 2*pi*k/L with k in [-n/2, n/2).
class Grid {
public:
    Grid(int dim, std::size_t n, double side);

    int dim() const { return dim_; }
    std::size_t n() const { return n_; }
    double side() const { return side_; }
    double spacing() const { return side_ / static_cast<double>(n_); }
    std::size_t size() const { return total_; }
    /// Cell volume h^dim, the Riemann-sum weight of one grid point.
    double cell_volume() const;

    /// Signed coordinate of axis index i, in [-L/2, L/2).
    double coordinate(std::size_t i) const;
    /// Angular frequency 2*pi*k/L of axis index i, with k in [-n/2, n/2).
    double frequency(std::size_t i) const;

    /// Decompose a flat row-major index into per-axis indices.
    std::array<std::size_t, 3> unravel(std::size_t flat) const;
    /// Euclidean distance from grid point `flat` to the origin on the torus.
    double radius(std::size_t flat) const;

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && side_ == o.side_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    std::string describe() const;

    /// Total-point cap shared by all grids (guards against accidental huge allocations).
    static std::size_t max_points();
    static void set_max_points(std::size_t cap);

private:
    int dim_;
    std::size_t n_;
    double side_;
    std::size_t total_;
};

/// Real scalar field sampled on a Grid, stored row-major in FFT index order.
class Field {
public:
    explicit Field(const Grid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}
    Field(const Grid& grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Clamp negative values to zero; returns the most negative value seen so
    /// callers can distinguish roundoff from genuine sign violations.
    double clamp_nonnegative();

    bool all_finite() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Complex spectral coefficients of a real Field (conjugate-symmetric).
class SpectralField {
public:
    explicit SpectralField(const Grid& grid)
        : grid_(grid), coeff_(grid.size(), {0.0, 0.0}) {}
    SpectralField(const Grid& grid, std::vector<std::complex<double>> coeff);

    const Grid& grid() const { return grid_; }
    const std::vector<std::complex<double>>& coefficients() const { return coeff_; }
    std::vector<std::complex<double>>& coefficients() { return coeff_; }

private:
    Grid grid_;
    std::vector<std::complex<double>> coeff_;
};

// Norms and pointwise operations. All integrals are plain Riemann sums with
// weight h^dim, accumulated in a fixed sequential order so results are
// bit-reproducible.

/// L^p norm, p in [1, inf]. Pass p = infinity (or lp_norm_inf) for the sup norm.
double lp_norm(const Field& u, double p);
double lp_norm_inf(const Field& u);
/// Riemann-sum integral of u (signed mass).
double integral(const Field& u);
/// L^2 inner product <u, v> = sum u v h^dim.
double inner_product(const Field& u, const Field& v);

/// Signed power sign(u)|u|^m; equals u^m for nonnegative u.
Field power(const Field& u, double m);

/// Circular convolution scaled by h^dim, approximating (u * v)(x) = int u(x-y)v(y) dy.
Field convolve(const Field& u, const Field& v);

/// Mass fraction of |u| outside the central box {|x_i| <= L/4 for all i}.
double boundary_mass_fraction(const Field& u);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

} // namespace nldiff
