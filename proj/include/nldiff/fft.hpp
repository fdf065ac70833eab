#pragma once

#include "nldiff/grid.hpp"

namespace nldiff {

// Discrete transform pair on the torus, chosen so that spectra approximate the
// continuum transforms with angular frequencies:
//
//   dft:  u_hat(xi_k) = h^dim * sum_j u(x_j) e^{-i x_j . xi_k}
//   idft: u(x_j)      = (1/L^dim) * sum_k u_hat(xi_k) e^{+i x_j . xi_k}
//
// With this pair idft(dft(u)) == u and Parseval reads
//   sum |u|^2 h^dim = (1/L^dim) sum |u_hat|^2.

SpectralField dft(const Field& u);
Field idft(const SpectralField& s);

/// Inverse transform of real spectral data given directly on grid frequencies
/// (e.g. a symbol-derived kernel); result is real by conjugate symmetry of the input.
Field idft_real_coefficients(const Grid& grid, const std::vector<double>& coeff);

/// Pointwise multiply the spectrum of u by a real multiplier and transform back.
Field apply_multiplier(const Field& u, const std::vector<double>& multiplier);

} // namespace nldiff
