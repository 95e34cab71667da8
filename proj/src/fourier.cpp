#include "weakslit/fourier.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>
#include <fmt/format.h>

#include "weakslit/errors.hpp"

namespace weakslit {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (size, direction) and live for the process.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void check_length(const SimGrid& grid, std::size_t n, const char* what) {
    if (n != grid.size()) {
        throw ShapeError(fmt::format("{}: {} samples on a grid of {}", what, n, grid.size()));
    }
}

// Centred transform. With x_j = (j - N/2) dx and p_k = (k - N/2) dp the kernel
// exp(-+i p_k x_j) equals (-1)^(j+k) exp(-+2 pi i j k / N) for N divisible by 4.
ComplexSamples centred_dft(std::span<const cplx> in, int sign, double scale) {
    const std::size_t n = in.size();
    ComplexSamples buf(n);
    for (std::size_t j = 0; j < n; ++j) buf[j] = (j & 1u) ? -in[j] : in[j];
    ComplexSamples out(n);
    fftw_execute_dft(plan_cache().get(n, sign), reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (std::size_t k = 0; k < n; ++k) out[k] *= (k & 1u) ? -scale : scale;
    return out;
}

}  // namespace

ComplexSamples to_momentum(const SimGrid& grid, std::span<const cplx> psi) {
    check_length(grid, psi.size(), "to_momentum");
    return centred_dft(psi, FFTW_FORWARD, grid.dx() / std::sqrt(kTwoPi));
}

ComplexSamples from_momentum(const SimGrid& grid, std::span<const cplx> psi_p) {
    check_length(grid, psi_p.size(), "from_momentum");
    return centred_dft(psi_p, FFTW_BACKWARD, grid.dp() / std::sqrt(kTwoPi));
}

double norm2_x(const SimGrid& grid, std::span<const cplx> psi) {
    check_length(grid, psi.size(), "norm2_x");
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s * grid.dx();
}

double norm2_p(const SimGrid& grid, std::span<const cplx> psi_p) {
    check_length(grid, psi_p.size(), "norm2_p");
    double s = 0.0;
    for (const auto& a : psi_p) s += std::norm(a);
    return s * grid.dp();
}

}  // namespace weakslit
