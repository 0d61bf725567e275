#pragma once

#include <complex>
#include <vector>

#include "ffinv/geometry.hpp"

namespace ffinv {

/// Homogeneous disk of radius R and constant rho centred at the origin.
struct MieCase {
    double radius = 0.5;
    double rho_in = 1.5;
    double k = 2.0;
    int order = 0;  ///< truncation M; 0 picks ceil(k sqrt(max(rho,1)) R) + 20

    [[nodiscard]] int effective_order() const;
};

/// Separation-of-variables coefficients: exterior u_s = sum_n i^n b_n H_n(kr) e^{in phi},
/// interior u = sum_n i^n c_n J_n(k sqrt(rho) r) e^{in phi}, phi measured from theta_i.
/// b_{-n} = b_n, c_{-n} = c_n; index 0..M.
struct MieCoefficients {
    std::vector<std::complex<double>> b;
    std::vector<std::complex<double>> c;
};

/// Throws InvalidArgument for M < k R + 15 or a tail above 1e-12.
[[nodiscard]] MieCoefficients mie_coefficients(const MieCase& mc);

/// Far-field amplitude in the u_s^inf convention (-4 i c_2 sum_n b_n e^{in(phi_s - phi_i)}).
[[nodiscard]] std::complex<double> mie_far_field(const MieCase& mc, const Direction& theta_i,
                                                 const Direction& theta_s);

/// Total field at |x| < R.
[[nodiscard]] std::complex<double> mie_interior_field(const MieCase& mc, const Direction& theta_i, Vec2 x);

/// Total field at |x| > R.
[[nodiscard]] std::complex<double> mie_exterior_field(const MieCase& mc, const Direction& theta_i, Vec2 x);

struct MieOpticalReport {
    double lhs = 0.0;  ///< Im(c_2^{-1} u^inf(theta_i, theta_i))
    double rhs = 0.0;  ///< k int |u^inf|^2, trapezoid rule on the series far field
    double residual = 0.0;
};

/// Series-level forward scattering identity; independent of any grid.
[[nodiscard]] MieOpticalReport mie_optical_theorem(const MieCase& mc, int angular_nodes = 512);

}  // namespace ffinv
