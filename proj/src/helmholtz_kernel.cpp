#include "ffinv/helmholtz_kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ffinv/special_functions.hpp"

namespace ffinv {

using std::numbers::pi;

Wavenumber Wavenumber::real(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw InvalidArgument("real wavenumber must be finite and > 0, got " + std::to_string(k));
    return Wavenumber(Tag::RealPositive, k);
}

Wavenumber Wavenumber::imaginary(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidArgument("kappa must be finite and > 0, got " + std::to_string(kappa));
    return Wavenumber(Tag::ImaginaryPositive, kappa);
}

cplx Wavenumber::value() const { return is_real() ? cplx{mag_, 0.0} : cplx{0.0, mag_}; }

cplx sqrt_upper(cplx z) {
    const double r = std::abs(z);
    double arg = std::arg(z);
    if (arg < 0.0) arg += 2.0 * pi;
    return std::polar(std::sqrt(r), arg / 2.0);
}

cplx farfield_constant(const Wavenumber& k) {
    return std::polar(1.0, pi / 4.0) / sqrt_upper(8.0 * pi * k.value());
}

cplx green(const Wavenumber& k, double r) {
    if (!(r > 0.0))
        throw InvalidArgument("green: r must be > 0 (self-interaction uses green_cell_mean)");
    if (k.is_real()) return cplx{0.0, 0.25} * special::hankel1_0(k.magnitude() * r);
    return {special::k0(k.magnitude() * r) / (2.0 * pi), 0.0};
}

cplx green_cell_mean(const Wavenumber& k, double h) {
    if (!(h > 0.0)) throw InvalidArgument("green_cell_mean: h must be > 0");
    const double a = h / std::sqrt(pi);
    const double m = k.magnitude();
    const double area = h * h;
    if (k.is_real()) {
        // int_{|y|<a} (i/4) H0(k|y|) dy = (i pi a / 2k) H1(ka) - 1/k^2
        const cplx integral = cplx{0.0, pi * a / (2.0 * m)} * special::hankel1_1(m * a) - 1.0 / (m * m);
        return integral / area;
    }
    // int_{|y|<a} K0(kappa|y|)/(2 pi) dy = (1 - kappa a K1(kappa a)) / kappa^2
    const double integral = (1.0 - m * a * special::k1(m * a)) / (m * m);
    return {integral / area, 0.0};
}

cplx farfield_kernel(const Wavenumber& k, Vec2 theta_s, Vec2 x) {
    if (!k.is_real()) throw InvalidArgument("farfield_kernel: real wavenumber required");
    if (std::abs(norm(theta_s) - 1.0) > kUnitTolerance)
        throw InvalidArgument("farfield_kernel: observation direction is not a unit vector");
    return std::polar(1.0, -k.magnitude() * dot(theta_s, x));
}

cplx farfield_kernel(const Wavenumber& k, const Direction& theta_s, Vec2 x) {
    return farfield_kernel(k, theta_s.vec(), x);
}

}  // namespace ffinv
