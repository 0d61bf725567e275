#pragma once

#include <complex>

#include "ffinv/geometry.hpp"

namespace ffinv {

using cplx = std::complex<double>;

/// Wavenumber restricted to the positive real axis or the positive imaginary
/// axis (k = i kappa).
class Wavenumber {
public:
    enum class Tag { RealPositive, ImaginaryPositive };

    static Wavenumber real(double k);
    static Wavenumber imaginary(double kappa);

    [[nodiscard]] Tag tag() const { return tag_; }
    [[nodiscard]] bool is_real() const { return tag_ == Tag::RealPositive; }
    [[nodiscard]] cplx value() const;
    /// |k|: k itself for real k, kappa for k = i kappa.
    [[nodiscard]] double magnitude() const { return mag_; }
    /// k^2, equal to -kappa^2 on the imaginary axis.
    [[nodiscard]] double squared() const { return is_real() ? mag_ * mag_ : -mag_ * mag_; }

private:
    Wavenumber(Tag tag, double mag) : tag_(tag), mag_(mag) {}
    Tag tag_;
    double mag_;
};

/// Principal square root with arg in [0, 2pi): Im sqrt(z) >= 0 for all z.
[[nodiscard]] cplx sqrt_upper(cplx z);

/// Far-field constant c_2 = e^{i pi/4} / sqrt(8 pi k). On the imaginary axis
/// this reduces to the real value 1/sqrt(8 pi kappa).
[[nodiscard]] cplx farfield_constant(const Wavenumber& k);

/// Outgoing fundamental solution of -Delta - k^2 in R^2: (i/4) H0(kr) for
/// real k, K0(kappa r)/(2 pi) for k = i kappa. Throws for r <= 0.
[[nodiscard]] cplx green(const Wavenumber& k, double r);

/// Mean of the Green's function over the disk of area h^2 centred at the
/// source point; replaces the singular self-interaction of a lattice cell.
[[nodiscard]] cplx green_cell_mean(const Wavenumber& k, double h);

/// e^{-i k theta_s . x} for real k.
[[nodiscard]] cplx farfield_kernel(const Wavenumber& k, Vec2 theta_s, Vec2 x);
[[nodiscard]] cplx farfield_kernel(const Wavenumber& k, const Direction& theta_s, Vec2 x);

}  // namespace ffinv
