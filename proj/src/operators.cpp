#include "nldiff/operators.hpp"
#include "nldiff/fft.hpp"

#include <cmath>
#include <sstream>

namespace nldiff {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double norm2(const std::vector<double>& xi) {
    double s = 0.0;
    for (double v : xi) s += v * v;
    return s;
}

} // namespace

OperatorSpec OperatorSpec::fractional_laplacian(double alpha) {
    require(alpha > 0.0 && alpha <= 2.0, "fractional_laplacian: alpha must be in (0,2]");
    OperatorSpec s;
    s.kind_ = OperatorKind::FractionalLaplacian;
    s.alpha_ = alpha;
    s.alpha_effective_ = alpha;
    return s;
}

OperatorSpec OperatorSpec::laplacian() {
    OperatorSpec s;
    s.kind_ = OperatorKind::Laplacian;
    s.alpha_effective_ = 2.0;
    return s;
}

OperatorSpec OperatorSpec::anisotropic_fractional_sum(std::vector<double> alphas) {
    require(!alphas.empty(), "anisotropic_fractional_sum: need at least one alpha");
    for (double a : alphas)
        require(a > 0.0 && a < 2.0, "anisotropic_fractional_sum: each alpha in (0,2)");
    OperatorSpec s;
    s.kind_ = OperatorKind::AnisotropicFractionalSum;
    s.alphas_ = std::move(alphas);
    return s;
}

OperatorSpec OperatorSpec::relativistic_schrodinger(double alpha, double kappa) {
    require(alpha > 0.0 && alpha < 2.0, "relativistic_schrodinger: alpha in (0,2)");
    require(kappa > 0.0, "relativistic_schrodinger: kappa > 0");
    OperatorSpec s;
    s.kind_ = OperatorKind::RelativisticSchrodinger;
    s.alpha_ = alpha;
    s.kappa_ = kappa;
    s.alpha_effective_ = alpha;
    return s;
}

OperatorSpec OperatorSpec::bessel_resolvent(double alpha) {
    require(alpha > 0.0 && alpha < 2.0, "bessel_resolvent: alpha in (0,2)");
    OperatorSpec s;
    s.kind_ = OperatorKind::BesselResolvent;
    s.alpha_ = alpha;
    s.alpha_effective_ = alpha;
    return s;
}

OperatorSpec OperatorSpec::geometric_stable(double alpha) {
    require(alpha > 0.0 && alpha < 2.0, "geometric_stable: alpha in (0,2)");
    OperatorSpec s;
    s.kind_ = OperatorKind::GeometricStable;
    s.alpha_ = alpha;
    return s;
}

OperatorSpec OperatorSpec::convolution_zero_order(Field kernel) {
    const Grid& g = kernel.grid();
    double mn = 0.0;
    for (double v : kernel.values()) mn = std::min(mn, v);
    require(mn >= -1e-12, "convolution_zero_order: kernel must be nonnegative");
    // symmetry J(x) = J(-x): index i pairs with (n - i) mod n along each axis
    const std::size_t n = g.n();
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        auto idx = g.unravel(flat);
        std::size_t mirror = 0;
        for (int d = 0; d < g.dim(); ++d)
            mirror = mirror * n + (n - idx[static_cast<std::size_t>(d)]) % n;
        require(std::abs(kernel[flat] - kernel[mirror]) <=
                    1e-10 * (1.0 + std::abs(kernel[flat])),
                "convolution_zero_order: kernel must be even");
    }
    const double mass = integral(kernel);
    require(std::abs(mass - 1.0) <= 1e-8,
            "convolution_zero_order: kernel mass must be 1 within 1e-8");
    OperatorSpec s;
    s.kind_ = OperatorKind::Convolution0Order;
    s.levy_kernel_ = std::move(kernel);
    return s;
}

OperatorSpec OperatorSpec::identity() {
    OperatorSpec s;
    s.kind_ = OperatorKind::Identity;
    return s;
}

OperatorSpec OperatorSpec::shifted(double c, OperatorSpec base) {
    require(c >= 0.0, "shifted: c must be >= 0");
    OperatorSpec s;
    s.kind_ = OperatorKind::Shifted;
    s.shift_ = c;
    s.alpha_effective_ = base.alpha_effective_;
    s.left_ = std::make_shared<OperatorSpec>(std::move(base));
    return s;
}

OperatorSpec OperatorSpec::sum(OperatorSpec left, OperatorSpec right) {
    OperatorSpec s;
    s.kind_ = OperatorKind::Sum;
    s.left_ = std::make_shared<OperatorSpec>(std::move(left));
    s.right_ = std::make_shared<OperatorSpec>(std::move(right));
    return s;
}

bool OperatorSpec::conserves_mass() const {
    switch (kind_) {
        case OperatorKind::FractionalLaplacian:
        case OperatorKind::Laplacian:
        case OperatorKind::AnisotropicFractionalSum:
        case OperatorKind::RelativisticSchrodinger:
        case OperatorKind::GeometricStable:
        case OperatorKind::Convolution0Order:
            return true;
        case OperatorKind::BesselResolvent:
        case OperatorKind::Identity:
            return false;
        case OperatorKind::Shifted:
            return shift_ == 0.0 && left_->conserves_mass();
        case OperatorKind::Sum:
            return left_->conserves_mass() && right_->conserves_mass();
    }
    return false;
}

std::string OperatorSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case OperatorKind::FractionalLaplacian:
            os << "fractional_laplacian(alpha=" << alpha_ << ")";
            break;
        case OperatorKind::Laplacian: os << "laplacian"; break;
        case OperatorKind::AnisotropicFractionalSum: {
            os << "anisotropic_fractional_sum(";
            for (std::size_t i = 0; i < alphas_.size(); ++i)
                os << (i ? "," : "") << alphas_[i];
            os << ")";
            break;
        }
        case OperatorKind::RelativisticSchrodinger:
            os << "relativistic_schrodinger(alpha=" << alpha_ << ",kappa=" << kappa_ << ")";
            break;
        case OperatorKind::BesselResolvent:
            os << "bessel_resolvent(alpha=" << alpha_ << ")";
            break;
        case OperatorKind::GeometricStable:
            os << "geometric_stable(alpha=" << alpha_ << ")";
            break;
        case OperatorKind::Convolution0Order:
            os << "convolution_zero_order(" << levy_kernel_->grid().describe() << ")";
            break;
        case OperatorKind::Identity: os << "identity"; break;
        case OperatorKind::Shifted:
            os << "shifted(c=" << shift_ << "," << left_->describe() << ")";
            break;
        case OperatorKind::Sum:
            os << "sum(" << left_->describe() << "," << right_->describe() << ")";
            break;
    }
    return os.str();
}

double symbol(const OperatorSpec& spec, const std::vector<double>& xi) {
    switch (spec.kind()) {
        case OperatorKind::FractionalLaplacian:
            return std::pow(norm2(xi), spec.alpha() / 2.0);
        case OperatorKind::Laplacian:
            return norm2(xi);
        case OperatorKind::AnisotropicFractionalSum: {
            const auto& as = spec.alphas();
            if (as.size() != xi.size())
                throw std::invalid_argument("symbol: alphas do not match dimension");
            double s = 0.0;
            for (std::size_t d = 0; d < xi.size(); ++d)
                s += std::pow(std::abs(xi[d]), as[d]);
            return s;
        }
        case OperatorKind::RelativisticSchrodinger: {
            const double k = spec.kappa();
            return std::pow(k * k + norm2(xi), spec.alpha() / 2.0) -
                   std::pow(k, spec.alpha());
        }
        case OperatorKind::BesselResolvent:
            return std::pow(1.0 + norm2(xi), spec.alpha() / 2.0);
        case OperatorKind::GeometricStable:
            return std::log1p(std::pow(norm2(xi), spec.alpha() / 2.0));
        case OperatorKind::Convolution0Order: {
            // Jhat(xi) = h^dim sum J(x_j) cos(x_j . xi); J is even so this is real
            const Field& J = *spec.levy_kernel();
            const Grid& g = J.grid();
            if (static_cast<int>(xi.size()) != g.dim())
                throw std::invalid_argument("symbol: frequency dim mismatch");
            double acc = 0.0;
            for (std::size_t i = 0; i < J.size(); ++i) {
                const auto idx = g.unravel(i);
                double phase = 0.0;
                for (int d = 0; d < g.dim(); ++d)
                    phase += g.coordinate(idx[static_cast<std::size_t>(d)]) *
                             xi[static_cast<std::size_t>(d)];
                acc += J[i] * std::cos(phase);
            }
            return 1.0 - acc * g.cell_volume();
        }
        case OperatorKind::Identity:
            return 1.0;
        case OperatorKind::Shifted:
            return spec.shift() + symbol(spec.left(), xi);
        case OperatorKind::Sum:
            return symbol(spec.left(), xi) + symbol(spec.right(), xi);
    }
    throw std::logic_error("symbol: unhandled kind");
}

std::vector<double> symbol_on_grid(const OperatorSpec& spec, const Grid& grid) {
    std::vector<double> out(grid.size());
    if (spec.kind() == OperatorKind::Convolution0Order) {
        const Field& J = *spec.levy_kernel();
        if (J.grid() != grid)
            throw std::invalid_argument("symbol_on_grid: 0-order kernel lives on a different grid");
        const SpectralField Jh = dft(J);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = 1.0 - Jh.coefficients()[i].real();
        // clip roundoff so sigma >= 0 holds exactly on the grid
        for (double& v : out)
            if (v < 0.0 && v > -1e-12) v = 0.0;
        return out;
    }
    if (spec.kind() == OperatorKind::Shifted) {
        out = symbol_on_grid(spec.left(), grid);
        for (double& v : out) v += spec.shift();
        return out;
    }
    if (spec.kind() == OperatorKind::Sum) {
        out = symbol_on_grid(spec.left(), grid);
        const auto r = symbol_on_grid(spec.right(), grid);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
        return out;
    }
    std::vector<double> xi(static_cast<std::size_t>(grid.dim()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto idx = grid.unravel(i);
        for (int d = 0; d < grid.dim(); ++d)
            xi[static_cast<std::size_t>(d)] =
                grid.frequency(idx[static_cast<std::size_t>(d)]);
        out[i] = symbol(spec, xi);
    }
    return out;
}

Field apply(const OperatorSpec& spec, const Field& u) {
    if (spec.kind() == OperatorKind::Identity) return u;
    return apply_multiplier(u, symbol_on_grid(spec, u.grid()));
}

double quadratic_form(const OperatorSpec& spec, const Field& f) {
    const auto sig = symbol_on_grid(spec, f.grid());
    const SpectralField fh = dft(f);
    // Parseval: integral f (-L)f = (1/L^dim) sum sigma |f_hat|^2
    double acc = 0.0;
    const auto& c = fh.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) acc += sig[i] * std::norm(c[i]);
    return acc / std::pow(f.grid().side(), f.grid().dim());
}

Field builtin_kernel(const Grid& grid, const std::string& family, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("builtin_kernel: width must be > 0");
    Field J(grid);
    for (std::size_t i = 0; i < J.size(); ++i) {
        const double r = grid.radius(i);
        if (family == "gaussian") {
            J[i] = std::exp(-r * r / (2.0 * width * width));
        } else if (family == "box") {
            J[i] = (r <= width) ? 1.0 : 0.0;
        } else if (family == "exponential") {
            J[i] = std::exp(-r / width);
        } else {
            throw std::invalid_argument("builtin_kernel: unknown family '" + family + "'");
        }
    }
    const double mass = integral(J);
    if (mass <= 0.0) throw std::invalid_argument("builtin_kernel: degenerate kernel");
    for (auto& v : J.values()) v /= mass;
    return J;
}

} // namespace nldiff
