#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

#include "ffinv/field_grid.hpp"
#include "ffinv/helmholtz_kernel.hpp"

namespace ffinv::detail {

/// Lattice convolution with the Green's function, y_i = sum_j G(x_i - x_j) q_j,
/// evaluated on the cells of a grid through a 2x zero-padded circulant
/// embedding of the block-Toeplitz kernel.
class LatticeConvolution {
public:
    LatticeConvolution(const Grid& grid, const Wavenumber& k);
    ~LatticeConvolution();
    LatticeConvolution(const LatticeConvolution&) = delete;
    LatticeConvolution& operator=(const LatticeConvolution&) = delete;

    /// q and y are indexed by grid cell.
    void apply(const std::complex<double>* q, std::complex<double>* y) const;

private:
    int px_ = 0;
    int py_ = 0;
    std::vector<std::size_t> cell_index_;  ///< padded-lattice offset of each cell
    fftw_complex* kernel_hat_ = nullptr;
    fftw_complex* work_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

}  // namespace ffinv::detail
