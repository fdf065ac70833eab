#include "nldiff/grid.hpp"
#include "nldiff/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nldiff {

namespace {
std::size_t g_max_points = std::size_t(1) << 26; // 67M points

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
} // namespace

Grid::Grid(int dim, std::size_t n, double side) : dim_(dim), n_(n), side_(side) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2, or 3");
    if (n < 8 || !is_power_of_two(n))
        throw std::invalid_argument("Grid: n must be a power of two >= 8");
    if (!(side > 0.0)) throw std::invalid_argument("Grid: side length must be positive");
    total_ = 1;
    for (int d = 0; d < dim; ++d) {
        if (total_ > g_max_points / n) throw std::invalid_argument("Grid: exceeds point cap");
        total_ *= n;
    }
}

double Grid::cell_volume() const {
    return std::pow(spacing(), dim_);
}

double Grid::coordinate(std::size_t i) const {
    const double x = static_cast<double>(i) * spacing();
    return (i < n_ / 2) ? x : x - side_;
}

double Grid::frequency(std::size_t i) const {
    const double k = (i < n_ / 2) ? static_cast<double>(i)
                                  : static_cast<double>(i) - static_cast<double>(n_);
    return 2.0 * M_PI * k / side_;
}

std::array<std::size_t, 3> Grid::unravel(std::size_t flat) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = flat % n_;
        flat /= n_;
    }
    return idx;
}

double Grid::radius(std::size_t flat) const {
    const auto idx = unravel(flat);
    double r2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
        const double x = coordinate(idx[static_cast<std::size_t>(d)]);
        r2 += x * x;
    }
    return std::sqrt(r2);
}

std::string Grid::describe() const {
    std::ostringstream os;
    os << "dim=" << dim_ << ",n=" << n_ << ",L=" << side_;
    return os.str();
}

std::size_t Grid::max_points() { return g_max_points; }
void Grid::set_max_points(std::size_t cap) { g_max_points = cap; }

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("Field: value count does not match grid");
}

double Field::clamp_nonnegative() {
    double lowest = 0.0;
    for (double& v : values_) {
        if (v < 0.0) {
            lowest = std::min(lowest, v);
            v = 0.0;
        }
    }
    return lowest;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

SpectralField::SpectralField(const Grid& grid, std::vector<std::complex<double>> coeff)
    : grid_(grid), coeff_(std::move(coeff)) {
    if (coeff_.size() != grid_.size())
        throw std::invalid_argument("SpectralField: coefficient count does not match grid");
}

double lp_norm(const Field& u, double p) {
    if (std::isinf(p)) return lp_norm_inf(u);
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double w = u.grid().cell_volume();
    double acc = 0.0;
    if (p == 1.0) {
        for (double v : u.values()) acc += std::abs(v);
        return acc * w;
    }
    if (p == 2.0) {
        for (double v : u.values()) acc += v * v;
        return std::sqrt(acc * w);
    }
    for (double v : u.values()) acc += std::pow(std::abs(v), p);
    return std::pow(acc * w, 1.0 / p);
}

double lp_norm_inf(const Field& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

double integral(const Field& u) {
    double acc = 0.0;
    for (double v : u.values()) acc += v;
    return acc * u.grid().cell_volume();
}

double inner_product(const Field& u, const Field& v) {
    if (u.grid() != v.grid()) throw std::invalid_argument("inner_product: grid mismatch");
    double acc = 0.0;
    const auto& a = u.values();
    const auto& b = v.values();
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc * u.grid().cell_volume();
}

Field power(const Field& u, double m) {
    Field out(u.grid());
    const auto& in = u.values();
    auto& o = out.values();
    if (m == 1.0) {
        o = in;
        return out;
    }
    if (m == 2.0) {
        for (std::size_t i = 0; i < in.size(); ++i) o[i] = in[i] * std::abs(in[i]);
        return out;
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double a = std::abs(in[i]);
        o[i] = (in[i] < 0.0 ? -1.0 : 1.0) * std::pow(a, m);
    }
    return out;
}

Field convolve(const Field& u, const Field& v) {
    if (u.grid() != v.grid()) throw std::invalid_argument("convolve: grid mismatch");
    SpectralField uh = dft(u);
    const SpectralField vh = dft(v);
    auto& c = uh.coefficients();
    const auto& d = vh.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= d[i];
    return idft(uh);
}

double boundary_mass_fraction(const Field& u) {
    const Grid& g = u.grid();
    const double quarter = g.side() / 4.0;
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto idx = g.unravel(i);
        bool central = true;
        for (int d = 0; d < g.dim(); ++d)
            if (std::abs(g.coordinate(idx[static_cast<std::size_t>(d)])) > quarter) {
                central = false;
                break;
            }
        const double a = std::abs(u[i]);
        total += a;
        if (central) inside += a;
    }
    if (total == 0.0) return 0.0;
    return (total - inside) / total;
}

Field operator+(const Field& a, const Field& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("Field+: grid mismatch");
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("Field-: grid mismatch");
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Field operator*(double s, const Field& a) {
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

} // namespace nldiff
