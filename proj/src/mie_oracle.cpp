#include "ffinv/mie_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffinv/helmholtz_kernel.hpp"
#include "ffinv/special_functions.hpp"

namespace ffinv {
namespace {

using std::numbers::pi;
constexpr double kTailTolerance = 1e-12;

void validate(const MieCase& mc) {
    if (!(mc.radius > 0.0)) throw InvalidArgument("Mie case: radius must be > 0");
    if (!(mc.rho_in > 0.0)) throw InvalidArgument("Mie case: rho must be > 0");
    if (!(mc.k > 0.0)) throw InvalidArgument("Mie case: k must be > 0");
    if (mc.order != 0 && mc.order < mc.k * mc.radius + 15.0)
        throw InvalidArgument("Mie case: truncation order must satisfy M >= k R + 15");
}

std::complex<double> i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// sum_{n=-M}^{M} i^{n} a_n (radial)_n e^{i n phi} with a_{-n} = a_n and
// radial_{-n} = (-1)^n radial_n, i.e. the cos-series 2 sum_{n>=1} i^n a_n r_n cos(n phi).
}  // namespace

int MieCase::effective_order() const {
    if (order != 0) return order;
    return static_cast<int>(std::ceil(k * std::sqrt(std::max(rho_in, 1.0)) * radius)) + 20;
}

MieCoefficients mie_coefficients(const MieCase& mc) {
    validate(mc);
    const int m = mc.effective_order();
    const double k = mc.k;
    const double k1 = k * std::sqrt(mc.rho_in);
    const double r = mc.radius;

    // orders 0..m+1 for the derivative recurrence J_n' = J_{n-1} - (n/x) J_n, J_0' = -J_1
    const auto jk = special::jn_sequence(m + 1, k * r);
    const auto yk = special::yn_sequence(m + 1, k * r);
    const auto j1 = special::jn_sequence(m + 1, k1 * r);

    auto deriv = [](const std::vector<double>& f, int n, double x) {
        return n == 0 ? -f[1] : f[n - 1] - n / x * f[n];
    };

    MieCoefficients out;
    out.b.resize(static_cast<std::size_t>(m) + 1);
    out.c.resize(static_cast<std::size_t>(m) + 1);
    for (int n = 0; n <= m; ++n) {
        const std::complex<double> h{jk[n], yk[n]};
        const std::complex<double> hp{deriv(jk, n, k * r), deriv(yk, n, k * r)};
        const double jp = deriv(jk, n, k * r);
        const double jin = j1[n];
        const double jinp = deriv(j1, n, k1 * r);
        const std::complex<double> denom = k * jin * hp - k1 * jinp * h;
        out.b[n] = (k1 * jinp * jk[n] - k * jin * jp) / denom;
        // Wronskian J H' - J' H = 2i / (pi k r)
        out.c[n] = (2.0 * std::complex<double>{0.0, 1.0} / (pi * r)) / denom;
    }
    if (std::abs(out.b[m]) > kTailTolerance)
        throw InvalidArgument("Mie series has not converged at the requested truncation order");
    return out;
}

std::complex<double> mie_far_field(const MieCase& mc, const Direction& theta_i, const Direction& theta_s) {
    const auto coef = mie_coefficients(mc);
    const double phi = std::atan2(theta_s.vec().y, theta_s.vec().x) - std::atan2(theta_i.vec().y, theta_i.vec().x);
    std::complex<double> sum = coef.b[0];
    for (std::size_t n = 1; n < coef.b.size(); ++n) sum += 2.0 * coef.b[n] * std::cos(n * phi);
    const auto c2 = farfield_constant(Wavenumber::real(mc.k));
    return std::complex<double>{0.0, -4.0} * c2 * sum;
}

std::complex<double> mie_interior_field(const MieCase& mc, const Direction& theta_i, Vec2 x) {
    const double r = norm(x);
    if (!(r < mc.radius)) throw InvalidArgument("mie_interior_field: point is not inside the disk");
    const auto coef = mie_coefficients(mc);
    const int m = static_cast<int>(coef.c.size()) - 1;
    const double k1 = mc.k * std::sqrt(mc.rho_in);
    const auto jn = special::jn_sequence(m, k1 * r);
    const double phi = r == 0.0 ? 0.0 : std::atan2(x.y, x.x) - std::atan2(theta_i.vec().y, theta_i.vec().x);
    std::complex<double> sum = coef.c[0] * jn[0];
    for (int n = 1; n <= m; ++n) sum += 2.0 * i_pow(n) * coef.c[n] * jn[n] * std::cos(n * phi);
    return sum;
}

std::complex<double> mie_exterior_field(const MieCase& mc, const Direction& theta_i, Vec2 x) {
    const double r = norm(x);
    if (!(r > mc.radius)) throw InvalidArgument("mie_exterior_field: point is not outside the disk");
    const auto coef = mie_coefficients(mc);
    const int m = static_cast<int>(coef.b.size()) - 1;
    const auto jn = special::jn_sequence(m, mc.k * r);
    const auto yn = special::yn_sequence(m, mc.k * r);
    const double phi = std::atan2(x.y, x.x) - std::atan2(theta_i.vec().y, theta_i.vec().x);
    // incident part in closed form; its Jacobi-Anger series would need ~kr terms
    std::complex<double> sum = coef.b[0] * std::complex<double>{jn[0], yn[0]};
    for (int n = 1; n <= m; ++n)
        sum += 2.0 * i_pow(n) * coef.b[n] * std::complex<double>{jn[n], yn[n]} * std::cos(n * phi);
    return sum + std::polar(1.0, mc.k * dot(x, theta_i.vec()));
}

MieOpticalReport mie_optical_theorem(const MieCase& mc, int angular_nodes) {
    if (angular_nodes < 3) throw InvalidArgument("mie_optical_theorem: need at least 3 angular nodes");
    const auto k = Wavenumber::real(mc.k);
    const auto c2 = farfield_constant(k);
    const auto theta_i = Direction::from_degrees(0.0);
    MieOpticalReport rep;
    rep.lhs = (mie_far_field(mc, theta_i, theta_i) / c2).imag();
    const double step = 2.0 * std::numbers::pi / angular_nodes;
    double power = 0.0;
    for (int j = 0; j < angular_nodes; ++j)
        power += std::norm(mie_far_field(mc, theta_i, Direction::from_degrees(360.0 * j / angular_nodes)));
    rep.rhs = mc.k * power * step;
    const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    rep.residual = scale == 0.0 ? 0.0 : std::abs(rep.lhs - rep.rhs) / scale;
    return rep;
}

}  // namespace ffinv
