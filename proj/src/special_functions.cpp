#include "ffinv/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ffinv/errors.hpp"

namespace ffinv::special {
namespace {

using ld = long double;
constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr ld kGammaL = 0.577215664901532860606512090082402431L;
constexpr ld kSeriesEps = 1e-21L;
constexpr int kMaxTerms = 400;

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw InvalidArgument(std::string(name) + ": argument must be finite and > 0");
}

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw InvalidArgument(std::string(name) + ": argument must be finite and >= 0");
}

// sum_k (-t)^k / (k! (k+n)!) for n = 0, 1  (t = x^2/4)
ld j_series(int n, ld t) {
    ld term = (n == 0) ? 1.0L : 1.0L;  // k = 0: 1/(0! n!) = 1 for n in {0,1}
    ld sum = term;
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= -t / (static_cast<ld>(k) * static_cast<ld>(k + n));
        sum += term;
        if (std::abs(term) < kSeriesEps * std::abs(sum) && k > t) break;
    }
    return sum;
}

// Hankel asymptotic amplitudes P, Q for order nu.
void hankel_pq(int nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    const double z8 = 8.0 * x;
    double term = 1.0;
    p = 1.0;
    q = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * z8);
        const double mag = std::abs(term);
        if (mag > prev) break;  // asymptotic series starts diverging
        prev = mag;
        // a_k / x^k with alternating signs in P (even k) and Q (odd k)
        const int m = k / 2;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            p += sign * term;
        else
            q += sign * term;
        if (mag < 1e-18) break;
    }
}

double hankel_j(int nu, double x) {
    double p, q;
    hankel_pq(nu, x, p, q);
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double hankel_y(int nu, double x) {
    double p, q;
    hankel_pq(nu, x, p, q);
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

// K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt, trapezoid rule.
double k_integral(int n, double x) {
    // integrand width is ~1/sqrt(x); step must track it
    const double step = std::min(0.05, 0.5 / std::sqrt(x));
    const double tmax = std::acosh(std::max(1.0, 45.0 / x)) + 1.0;
    double sum = 0.5;
    for (double t = step; t <= tmax; t += step) {
        const double s = std::sinh(0.5 * t);
        sum += std::exp(-2.0 * x * s * s) * std::cosh(n * t);
    }
    return sum * step * std::exp(-x);
}

// Power series of K0, K1 for small x.
double k_series(int n, double x) {
    const ld xl = x;
    const ld t = xl * xl / 4.0L;
    const ld lg = std::log(xl / 2.0L);
    if (n == 0) {
        // K0 = -(ln(x/2)+g) I0 + sum_{k>=1} H_k t^k/(k!)^2
        ld term = 1.0L, i0 = 1.0L, rest = 0.0L, hk = 0.0L;
        for (int k = 1; k < kMaxTerms; ++k) {
            term *= t / (static_cast<ld>(k) * k);
            hk += 1.0L / k;
            i0 += term;
            rest += hk * term;
            if (term < kSeriesEps) break;
        }
        return static_cast<double>(-(lg + kGammaL) * i0 + rest);
    }
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_k [psi(k+1)+psi(k+2)] t^k/(k!(k+1)!)
    ld term = 1.0L, i1 = 1.0L, hk = 0.0L;
    ld rest = (-kGammaL + (-kGammaL + 1.0L));
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= t / (static_cast<ld>(k) * (k + 1));
        hk += 1.0L / k;
        const ld psi_sum = (-kGammaL + hk) + (-kGammaL + hk + 1.0L / (k + 1));
        i1 += term;
        rest += psi_sum * term;
        if (term < kSeriesEps) break;
    }
    const ld half = xl / 2.0L;
    return static_cast<double>(1.0L / xl + lg * half * i1 - 0.5L * half * rest);
}

}  // namespace

std::string_view to_string(BesselKind kind) {
    switch (kind) {
        case BesselKind::J0: return "J0";
        case BesselKind::J1: return "J1";
        case BesselKind::Y0: return "Y0";
        case BesselKind::Y1: return "Y1";
        case BesselKind::K0: return "K0";
        case BesselKind::K1: return "K1";
    }
    return "?";
}

double bessel(BesselKind kind, double x) {
    switch (kind) {
        case BesselKind::J0: return j0(x);
        case BesselKind::J1: return j1(x);
        case BesselKind::Y0: return y0(x);
        case BesselKind::Y1: return y1(x);
        case BesselKind::K0: return k0(x);
        case BesselKind::K1: return k1(x);
    }
    throw InvalidArgument("unknown Bessel kind");
}

double j0(double x) {
    require_nonnegative(x, "J0");
    if (x >= kHankelCrossover) return hankel_j(0, x);
    const ld xl = x;
    return static_cast<double>(j_series(0, xl * xl / 4.0L));
}

double j1(double x) {
    require_nonnegative(x, "J1");
    if (x >= kHankelCrossover) return hankel_j(1, x);
    const ld xl = x;
    return static_cast<double>(xl / 2.0L * j_series(1, xl * xl / 4.0L));
}

double y0(double x) {
    require_positive(x, "Y0");
    if (x >= kHankelCrossover) return hankel_y(0, x);
    const ld xl = x;
    const ld t = xl * xl / 4.0L;
    // Y0 = (2/pi)(ln(x/2)+g) J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k t^k/(k!)^2
    ld term = 1.0L, jsum = 1.0L, rest = 0.0L, hk = 0.0L;
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= -t / (static_cast<ld>(k) * k);
        hk += 1.0L / k;
        jsum += term;
        rest -= hk * term;
        if (std::abs(term) < kSeriesEps && k > t) break;
    }
    return static_cast<double>(2.0L / kPiL * ((std::log(xl / 2.0L) + kGammaL) * jsum + rest));
}

double y1(double x) {
    require_positive(x, "Y1");
    if (x >= kHankelCrossover) return hankel_y(1, x);
    const ld xl = x;
    const ld t = xl * xl / 4.0L;
    const ld half = xl / 2.0L;
    // Y1 = -2/(pi x) + (2/pi) ln(x/2) J1 - (1/pi)(x/2) sum_k [psi(k+1)+psi(k+2)] (-t)^k/(k!(k+1)!)
    ld term = 1.0L, jsum = 1.0L, hk = 0.0L;
    ld rest = -2.0L * kGammaL + 1.0L;
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= -t / (static_cast<ld>(k) * (k + 1));
        hk += 1.0L / k;
        const ld psi_sum = (-kGammaL + hk) + (-kGammaL + hk + 1.0L / (k + 1));
        jsum += term;
        rest += psi_sum * term;
        if (std::abs(term) < kSeriesEps && k > t) break;
    }
    const ld j1v = half * jsum;
    return static_cast<double>(-2.0L / (kPiL * xl) + 2.0L / kPiL * std::log(half) * j1v -
                               half / kPiL * rest);
}

double k0(double x) {
    require_positive(x, "K0");
    return x < 1.0 ? k_series(0, x) : k_integral(0, x);
}

double k1(double x) {
    require_positive(x, "K1");
    return x < 1.0 ? k_series(1, x) : k_integral(1, x);
}

std::complex<double> hankel1_0(double x) { return {j0(x), y0(x)}; }
std::complex<double> hankel1_1(double x) { return {j1(x), y1(x)}; }

std::vector<double> jn_sequence(int nmax, double x) {
    if (nmax < 0) throw InvalidArgument("jn_sequence: nmax must be >= 0");
    require_nonnegative(x, "jn_sequence");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double top = std::max<double>(nmax, x);
    int start = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
    start += start % 2;  // even start for the normalisation sum
    std::vector<ld> back(static_cast<std::size_t>(start) + 2, 0.0L);
    back[start + 1] = 0.0L;
    back[start] = 1e-30L;
    const ld xl = x;
    for (int n = start; n >= 1; --n) {
        back[n - 1] = 2.0L * n / xl * back[n] - back[n + 1];
        if (std::abs(back[n - 1]) > 1e300L) {
            for (int m = n - 1; m <= start; ++m) back[m] *= 1e-300L;
        }
    }
    // J0 + 2 sum_k J_2k = 1
    ld norm = back[0];
    for (int n = 2; n <= start; n += 2) norm += 2.0L * back[n];
    for (int n = 0; n <= nmax; ++n) out[n] = static_cast<double>(back[n] / norm);
    return out;
}

std::vector<double> yn_sequence(int nmax, double x) {
    if (nmax < 0) throw InvalidArgument("yn_sequence: nmax must be >= 0");
    require_positive(x, "yn_sequence");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
    out[0] = y0(x);
    if (nmax >= 1) out[1] = y1(x);
    for (int n = 1; n < nmax; ++n) out[n + 1] = 2.0 * n / x * out[n] - out[n - 1];
    return out;
}

}  // namespace ffinv::special
