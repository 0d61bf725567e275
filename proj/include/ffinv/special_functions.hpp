#pragma once

#include <complex>
#include <string_view>
#include <vector>

/// Cylinder functions of integer order for real arguments.
///
/// J and Y use power series (evaluated in extended precision) below
/// `kHankelCrossover` and the Hankel asymptotic expansion above it. K uses the
/// power series for x < 1 and trapezoidal quadrature of
/// K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt otherwise. Absolute accuracy
/// is better than 1e-12 on (0, 500].
namespace ffinv::special {

inline constexpr double kHankelCrossover = 17.0;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

enum class BesselKind { J0, J1, Y0, Y1, K0, K1 };

[[nodiscard]] std::string_view to_string(BesselKind kind);

/// Dispatches on `kind`. J0/J1 accept x >= 0, the others need x > 0.
[[nodiscard]] double bessel(BesselKind kind, double x);

[[nodiscard]] double j0(double x);
[[nodiscard]] double j1(double x);
[[nodiscard]] double y0(double x);
[[nodiscard]] double y1(double x);
[[nodiscard]] double k0(double x);
[[nodiscard]] double k1(double x);

/// H_0^(1)(x) = J0 + i Y0 and H_1^(1)(x) = J1 + i Y1.
[[nodiscard]] std::complex<double> hankel1_0(double x);
[[nodiscard]] std::complex<double> hankel1_1(double x);

/// J_0(x) ... J_nmax(x) by normalised backward (Miller) recurrence.
[[nodiscard]] std::vector<double> jn_sequence(int nmax, double x);

/// Y_0(x) ... Y_nmax(x) by forward recurrence from Y0, Y1.
[[nodiscard]] std::vector<double> yn_sequence(int nmax, double x);

}  // namespace ffinv::special
