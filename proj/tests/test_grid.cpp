#include "nldiff/fft.hpp"
#include "nldiff/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nldiff;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Field f(g);
    for (auto& v : f.values()) v = unif(rng);
    return f;
}

} // namespace

TEST_CASE("grid construction validates parameters") {
    CHECK_THROWS_AS(Grid(0, 16, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(4, 16, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1, 12, 1.0), std::invalid_argument); // not a power of two
    CHECK_THROWS_AS(Grid(1, 4, 1.0), std::invalid_argument);  // below minimum
    CHECK_THROWS_AS(Grid(1, 16, -1.0), std::invalid_argument);
    const Grid g(2, 16, 4.0);
    CHECK(g.size() == 256);
    CHECK(g.spacing() == doctest::Approx(0.25));
}

TEST_CASE("coordinates and frequencies follow the FFT-order convention") {
    const Grid g(1, 8, 8.0);
    CHECK(g.coordinate(0) == 0.0);
    CHECK(g.coordinate(3) == 3.0);
    CHECK(g.coordinate(4) == -4.0); // wraps to [-L/2, L/2)
    CHECK(g.coordinate(7) == -1.0);
    CHECK(g.frequency(1) == doctest::Approx(2.0 * M_PI / 8.0));
    CHECK(g.frequency(7) == doctest::Approx(-2.0 * M_PI / 8.0));
}

TEST_CASE("dft of zero is zero and of a delta column is flat") {
    const Grid g(1, 64, 8.0);
    Field z(g);
    const SpectralField sz = dft(z);
    for (const auto& c : sz.coefficients()) CHECK(std::abs(c) == 0.0);

    Field d(g);
    d[5] = 1.0;
    const SpectralField sd = dft(d);
    const double expected = g.cell_volume();
    for (const auto& c : sd.coefficients())
        CHECK(std::abs(c) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dft/idft roundtrip within 1e-10 relative") {
    for (int dim : {1, 2, 3}) {
        const Grid g(dim, dim == 3 ? 16 : 64, 5.0);
        const Field u = random_field(g, 42 + static_cast<std::uint64_t>(dim));
        const Field back = idft(dft(u));
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            err = std::max(err, std::abs(back[i] - u[i]));
        CHECK(err <= 1e-10 * lp_norm_inf(u));
    }
}

TEST_CASE("Parseval identity within 1e-9 relative") {
    const Grid g(2, 32, 3.0);
    const Field u = random_field(g, 9);
    double phys = 0.0;
    for (double v : u.values()) phys += v * v;
    phys *= g.cell_volume();
    const SpectralField s = dft(u);
    double spec = 0.0;
    for (const auto& c : s.coefficients()) spec += std::norm(c);
    spec /= std::pow(g.side(), g.dim());
    CHECK(std::abs(phys - spec) <= 1e-9 * phys);
}

TEST_CASE("lp norms: constants, interpolation, sup as large-p limit") {
    const Grid g(1, 64, 2.0);
    Field ones(g, std::vector<double>(g.size(), 1.0));
    CHECK(lp_norm(ones, 1.0) == doctest::Approx(2.0)); // |torus| = L = 2

    const Field u = random_field(g, 3);
    for (double p : {1.5, 2.0, 3.0, 7.0}) {
        const double lhs = std::pow(lp_norm(u, p), p);
        const double rhs = std::pow(lp_norm_inf(u), p - 1.0) * lp_norm(u, 1.0);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
    CHECK(lp_norm(u, 64.0) == doctest::Approx(lp_norm_inf(u)).epsilon(0.05));
    CHECK_THROWS_AS(lp_norm(u, 0.5), std::invalid_argument);
}

TEST_CASE("power is the signed power") {
    const Grid g(1, 8, 1.0);
    Field u(g);
    u[0] = 2.0;
    u[1] = -3.0;
    const Field u1 = power(u, 1.0);
    CHECK(u1[0] == 2.0);
    const Field u2 = power(u, 2.0);
    CHECK(u2[0] == doctest::Approx(4.0));
    CHECK(u2[1] == doctest::Approx(-9.0)); // odd extension
}

TEST_CASE("convolution against a delta and the direct sum, and commutativity") {
    const Grid g(1, 64, 4.0);
    const Field u = random_field(g, 11);
    Field delta(g);
    delta[0] = 1.0 / g.cell_volume();
    const Field conv = convolve(u, delta);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(conv[i] == doctest::Approx(u[i]).epsilon(1e-10));

    // two indicator blocks give a triangular hat; compare with the O(n^2) sum
    Field a(g), b(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        a[i] = std::abs(g.coordinate(i)) <= 0.5 ? 1.0 : 0.0;
        b[i] = std::abs(g.coordinate(i)) <= 0.25 ? 1.0 : 0.0;
    }
    const Field fast = convolve(a, b);
    Field slow(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            acc += a[(i + g.n() - j) % g.n()] * b[j];
        slow[i] = acc * g.cell_volume();
    }
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(fast[i] - slow[i]));
    CHECK(err <= 1e-8 * lp_norm_inf(slow));

    const Field uv = convolve(u, a);
    const Field vu = convolve(a, u);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(uv[i] == doctest::Approx(vu[i]).epsilon(1e-10));
}

TEST_CASE("boundary mass fraction sees tails") {
    const Grid g(1, 64, 8.0);
    Field center(g);
    center[0] = 1.0;
    CHECK(boundary_mass_fraction(center) == 0.0);
    Field edge(g);
    edge[g.n() / 2] = 1.0; // x = -L/2
    CHECK(boundary_mass_fraction(edge) == doctest::Approx(1.0));
}

TEST_CASE("clamp reports the most negative value") {
    const Grid g(1, 8, 1.0);
    Field u(g);
    u[2] = -1e-13;
    u[3] = 0.5;
    CHECK(u.clamp_nonnegative() == doctest::Approx(-1e-13));
    CHECK(u[2] == 0.0);
    CHECK(u[3] == 0.5);
}

TEST_CASE("lp norm is monotone under domain restriction") {
    const Grid g(1, 64, 8.0);
    const Field u = random_field(g, 17);
    Field masked = u;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.coordinate(i)) > 2.0) masked[i] = 0.0;
    for (double p : {1.0, 2.0, 5.0})
        CHECK(lp_norm(masked, p) <= lp_norm(u, p) * (1.0 + 1e-12));
    CHECK(lp_norm_inf(masked) <= lp_norm_inf(u));
}
