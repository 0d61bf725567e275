#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "ffinv/ls_solver.hpp"

namespace ffinv {

struct FarFieldSample {
    Direction theta_s;
    cplx value;
};

/// A_mn(k) = u_s^inf(-theta_m, theta_n).
struct RelativeMatrix {
    Eigen::MatrixXcd entries;
    std::vector<Direction> directions;
    double k = 0.0;

    /// ||A - A^T||_F / ||A||_F (0 for the zero matrix).
    [[nodiscard]] double symmetry_defect() const;
};

/// u_s^inf(theta_s) = c_2 k^2 int_D (rho - 1) u e^{-i k theta_s . x} dx.
[[nodiscard]] cplx far_field(const ScatteringSolution& solution, const ContrastField& contrast,
                             const Direction& theta_s);

/// Far field at every direction of `angles_deg`.
[[nodiscard]] std::vector<FarFieldSample> far_field_pattern(const ScatteringSolution& solution,
                                                            const ContrastField& contrast,
                                                            const std::vector<double>& angles_deg);

/// `count` equispaced directions 0, 360/count, ... degrees.
[[nodiscard]] std::vector<double> uniform_angles_deg(int count);

/// One solve per incident direction, `threads` of them concurrently.
[[nodiscard]] RelativeMatrix relative_matrix(const ContrastField& contrast, double k,
                                             const std::vector<Direction>& directions,
                                             const SolverOptions& options = {}, int threads = 1);

struct OpticalTheoremReport {
    double lhs = 0.0;  ///< Im(c_2^{-1} u^inf(theta_i, theta_i))
    double rhs = 0.0;  ///< k int_{S^1} |u^inf(theta, theta_i)|^2 dtheta (trapezoid)
    double residual = 0.0;
    bool absolute = false;  ///< both sides ~ 0, `residual` is |lhs - rhs|
};

/// Relative (or, for vanishing scattering, absolute) defect of the forward
/// scattering identity.
[[nodiscard]] OpticalTheoremReport optical_theorem_residual(const ScatteringSolution& solution,
                                                            const ContrastField& contrast,
                                                            int angular_nodes = 256);
[[nodiscard]] OpticalTheoremReport optical_theorem_residual(const ContrastField& contrast, double k,
                                                            const Direction& theta_i,
                                                            int angular_nodes = 256,
                                                            const SolverOptions& options = {});

struct ForwardReport {
    cplx forward_amplitude;       ///< u^inf(theta_i, theta_i)
    double normalized_imag = 0.0; ///< Im(c_2^{-1} u^inf(theta_i, theta_i))
    double scattered_power = 0.0; ///< optical-theorem right-hand side
    bool trivial = false;         ///< no scattering at all
    /// Positive power forces a positive normalised forward imaginary part.
    bool obstruction_holds = false;
};

[[nodiscard]] ForwardReport forward_invisibility_check(const ScatteringSolution& solution,
                                                       const ContrastField& contrast,
                                                       int angular_nodes = 256);
[[nodiscard]] ForwardReport forward_invisibility_check(const ContrastField& contrast, double k,
                                                       const Direction& theta_i,
                                                       const SolverOptions& options = {});

/// CSV with columns angle_deg,re,im,abs; 17 significant digits.
void write_far_field_csv(std::ostream& os, const std::vector<FarFieldSample>& samples);

}  // namespace ffinv
