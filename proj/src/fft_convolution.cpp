#include "fft_convolution.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

namespace ffinv::detail {
namespace {
// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

LatticeConvolution::LatticeConvolution(const Grid& grid, const Wavenumber& k)
    : px_(2 * grid.nx()), py_(2 * grid.ny()) {
    const std::size_t total = static_cast<std::size_t>(px_) * py_;
    {
        std::lock_guard lock(planner_mutex());
        kernel_hat_ = fftw_alloc_complex(total);
        work_ = fftw_alloc_complex(total);
        forward_ = fftw_plan_dft_2d(py_, px_, work_, work_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_2d(py_, px_, work_, work_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    const double h = grid.h();
    const cplx self = green_cell_mean(k, h);
    for (int iy = 0; iy < py_; ++iy) {
        const int dy = iy < grid.ny() ? iy : iy - py_;
        for (int ix = 0; ix < px_; ++ix) {
            const int dx = ix < grid.nx() ? ix : ix - px_;
            cplx value{0.0, 0.0};
            if (iy == grid.ny() || ix == grid.nx()) {
                value = 0.0;  // offsets never reached by cell pairs
            } else if (dx == 0 && dy == 0) {
                value = self;
            } else {
                value = green(k, h * std::hypot(static_cast<double>(dx), static_cast<double>(dy)));
            }
            const std::size_t o = static_cast<std::size_t>(iy) * px_ + ix;
            work_[o][0] = value.real();
            work_[o][1] = value.imag();
        }
    }
    fftw_execute(forward_);
    std::memcpy(kernel_hat_, work_, sizeof(fftw_complex) * total);
    cell_index_.reserve(grid.size());
    for (const auto& c : grid.cells())
        cell_index_.push_back(static_cast<std::size_t>(c.iy) * px_ + c.ix);
}

LatticeConvolution::~LatticeConvolution() {
    std::lock_guard lock(planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
    if (kernel_hat_) fftw_free(kernel_hat_);
    if (work_) fftw_free(work_);
}

void LatticeConvolution::apply(const std::complex<double>* q, std::complex<double>* y) const {
    const std::size_t total = static_cast<std::size_t>(px_) * py_;
    std::memset(work_, 0, sizeof(fftw_complex) * total);
    for (std::size_t i = 0; i < cell_index_.size(); ++i) {
        work_[cell_index_[i]][0] = q[i].real();
        work_[cell_index_[i]][1] = q[i].imag();
    }
    fftw_execute(forward_);
    for (std::size_t o = 0; o < total; ++o) {
        const double ar = work_[o][0], ai = work_[o][1];
        const double br = kernel_hat_[o][0], bi = kernel_hat_[o][1];
        work_[o][0] = ar * br - ai * bi;
        work_[o][1] = ar * bi + ai * br;
    }
    fftw_execute(backward_);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < cell_index_.size(); ++i) {
        const auto& v = work_[cell_index_[i]];
        y[i] = {v[0] * scale, v[1] * scale};
    }
}

}  // namespace ffinv::detail
