#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ffinv/field_grid.hpp"
#include "ffinv/helmholtz_kernel.hpp"

namespace ffinv {

/// Sampled contrast rho - 1 on the cells of a grid.
struct ContrastField {
    std::shared_ptr<const Grid> grid;
    std::vector<double> values;

    static ContrastField constant(std::shared_ptr<const Grid> grid, double value);
    static ContrastField from_function(std::shared_ptr<const Grid> grid,
                                       const std::function<double(Vec2)>& f);

    [[nodiscard]] bool is_trivial() const;
    [[nodiscard]] double min_rho() const;
    [[nodiscard]] double max_rho() const;
    /// Throws InvalidArgument on size mismatch, non-finite values or rho <= 0.
    void validate() const;
};

/// u_i = sum_n alpha_n e^{i k theta_n . x}; for k = i kappa this is
/// sum_n alpha_n e^{-kappa theta_n . x}.
struct IncidentField {
    Wavenumber k;
    std::vector<Direction> directions;
    std::vector<cplx> coefficients;

    static IncidentField plane_wave(const Wavenumber& k, const Direction& theta, cplx alpha = 1.0);

    [[nodiscard]] cplx evaluate(Vec2 x) const;
    void validate() const;
};

enum class SolverBackend {
    Auto,      ///< dense LU up to `dense_threshold` cells, FFT-GMRES above
    DenseLU,
    FftGmres,  ///< matrix-free GMRES, convolution by zero-padded 2D FFT
};

struct SolverOptions {
    SolverBackend backend = SolverBackend::Auto;
    double tolerance = 1e-12;  ///< relative residual ||(I - k^2 V)u - u_i|| / ||u_i||
    int max_iterations = 3000;
    int restart = 120;
    std::size_t dense_threshold = 1500;
};

struct SolveDiagnostics {
    double relative_residual = 0.0;
    int iterations = 0;
    SolverBackend backend = SolverBackend::Auto;
};

struct ScatteringSolution {
    std::shared_ptr<const Grid> grid;
    IncidentField incident;
    Wavenumber k;
    std::vector<cplx> u_total;
    std::vector<cplx> u_scattered;
    SolveDiagnostics diagnostics;
};

/// Dense matrix I - k^2 [G_k(x_i, x_j) w_j (rho_j - 1)], the self-cell entry
/// using the disk-averaged Green's function.
[[nodiscard]] Eigen::MatrixXcd assemble(const ContrastField& contrast, const Wavenumber& k);

/// Discretised Lippmann-Schwinger operator for one contrast and wavenumber;
/// factorises (dense) or plans the FFT convolution once and then solves for
/// any number of incident fields. Not thread-safe; use one per thread.
class ScatteringSolver {
public:
    ScatteringSolver(ContrastField contrast, const Wavenumber& k, SolverOptions options = {});
    ~ScatteringSolver();
    ScatteringSolver(ScatteringSolver&&) noexcept;
    ScatteringSolver& operator=(ScatteringSolver&&) noexcept;

    [[nodiscard]] const ContrastField& contrast() const { return contrast_; }
    [[nodiscard]] const Wavenumber& wavenumber() const { return k_; }
    [[nodiscard]] SolverBackend backend() const { return backend_; }

    /// Real wavenumber solve. Throws SolverError if the residual exceeds the tolerance.
    [[nodiscard]] ScatteringSolution solve(const IncidentField& incident) const;

    /// k = i kappa: the system is real and solved in real arithmetic; incident
    /// coefficients must be real. Imaginary parts of the result are exactly 0.
    [[nodiscard]] ScatteringSolution solve_modified(const IncidentField& incident) const;

    /// y = (I - k^2 V) x on the grid cells.
    void apply(const std::vector<cplx>& x, std::vector<cplx>& y) const;

private:
    struct Impl;
    ContrastField contrast_;
    Wavenumber k_;
    SolverOptions options_;
    SolverBackend backend_;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] ScatteringSolution solve_scattering(const ContrastField& contrast,
                                                  const IncidentField& incident,
                                                  const SolverOptions& options = {});

[[nodiscard]] ScatteringSolution solve_modified(const ContrastField& contrast,
                                                const IncidentField& incident,
                                                const SolverOptions& options = {});

[[nodiscard]] std::string to_string(SolverBackend backend);

}  // namespace ffinv
