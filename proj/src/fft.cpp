#include "nldiff/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

namespace nldiff {

namespace {

// FFTW planner is not thread-safe; executions on distinct buffers are.
std::mutex g_planner_mutex;

struct PlanPair {
    fftw_plan forward{nullptr};
    fftw_plan backward{nullptr};
    fftw_complex* buf{nullptr};
    std::size_t size{0};

    PlanPair(int dim, std::size_t n, std::size_t total) : size(total) {
        buf = fftw_alloc_complex(total);
        int dims[3] = {static_cast<int>(n), static_cast<int>(n), static_cast<int>(n)};
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        forward = fftw_plan_dft(dim, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft(dim, dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~PlanPair() {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        fftw_free(buf);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

// One in-place c2c plan pair per (dim, n), created on demand and kept for the
// process lifetime. Guarded by a mutex so transforms are safe to call from
// multiple threads (executions are serialized per plan via the work buffer).
class Engine {
public:
    static Engine& instance() {
        static Engine e;
        return e;
    }

    void forward(const Grid& g, const double* re, const double* im,
                 std::complex<double>* out) {
        run(g, re, im, out, true);
    }
    void backward(const Grid& g, const std::complex<double>* in, double* re_out,
                  std::complex<double>* full_out) {
        std::lock_guard<std::mutex> lock(mutex_);
        PlanPair& p = plan(g);
        for (std::size_t i = 0; i < p.size; ++i) {
            p.buf[i][0] = in[i].real();
            p.buf[i][1] = in[i].imag();
        }
        fftw_execute(p.backward);
        if (re_out)
            for (std::size_t i = 0; i < p.size; ++i) re_out[i] = p.buf[i][0];
        if (full_out)
            for (std::size_t i = 0; i < p.size; ++i)
                full_out[i] = {p.buf[i][0], p.buf[i][1]};
    }

private:
    void run(const Grid& g, const double* re, const double* im,
             std::complex<double>* out, bool fwd) {
        std::lock_guard<std::mutex> lock(mutex_);
        PlanPair& p = plan(g);
        for (std::size_t i = 0; i < p.size; ++i) {
            p.buf[i][0] = re[i];
            p.buf[i][1] = im ? im[i] : 0.0;
        }
        fftw_execute(fwd ? p.forward : p.backward);
        for (std::size_t i = 0; i < p.size; ++i) out[i] = {p.buf[i][0], p.buf[i][1]};
    }

    PlanPair& plan(const Grid& g) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(g.dim()) << 56) | g.n();
        auto it = plans_.find(key);
        if (it == plans_.end()) {
            it = plans_
                     .emplace(key, std::make_unique<PlanPair>(g.dim(), g.n(), g.size()))
                     .first;
        }
        return *it->second;
    }

    std::mutex mutex_;
    std::map<std::uint64_t, std::unique_ptr<PlanPair>> plans_;
};

} // namespace

SpectralField dft(const Field& u) {
    SpectralField out(u.grid());
    Engine::instance().forward(u.grid(), u.values().data(), nullptr,
                               out.coefficients().data());
    const double w = u.grid().cell_volume();
    for (auto& c : out.coefficients()) c *= w;
    return out;
}

Field idft(const SpectralField& s) {
    Field out(s.grid());
    Engine::instance().backward(s.grid(), s.coefficients().data(),
                                out.values().data(), nullptr);
    const double w = 1.0 / std::pow(s.grid().side(), s.grid().dim());
    for (auto& v : out.values()) v *= w;
    return out;
}

Field idft_real_coefficients(const Grid& grid, const std::vector<double>& coeff) {
    if (coeff.size() != grid.size())
        throw std::invalid_argument("idft_real_coefficients: size mismatch");
    std::vector<std::complex<double>> c(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) c[i] = {coeff[i], 0.0};
    return idft(SpectralField(grid, std::move(c)));
}

Field apply_multiplier(const Field& u, const std::vector<double>& multiplier) {
    if (multiplier.size() != u.size())
        throw std::invalid_argument("apply_multiplier: size mismatch");
    SpectralField s = dft(u);
    auto& c = s.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= multiplier[i];
    return idft(s);
}

} // namespace nldiff
