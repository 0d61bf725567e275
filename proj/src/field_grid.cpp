#include "ffinv/field_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ffinv {
namespace {

constexpr double kMinWeightFraction = 1e-14;
constexpr int kIndicatorSubsamples = 8;

// int_{-r}^{X} of the length of {y in [-s(x), s(x)] : y <= Y}, s = sqrt(r^2-x^2),
// for the origin-centred disk. Inclusion-exclusion over Q gives rectangle overlaps.
double quadrant_area(double r, double X, double Y) {
    X = std::clamp(X, -r, r);
    if (Y <= -r) return 0.0;
    auto F = [r](double x) {  // antiderivative of s(x)
        x = std::clamp(x, -r, r);
        return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) + r * r * std::asin(x / r));
    };
    if (Y >= r) return 2.0 * (F(X) - F(-r));
    const double xc = std::sqrt(r * r - Y * Y);
    // |x| <= xc : Y + s(x) (Y inside the chord);  |x| > xc : 2 s(x) if Y >= 0 else 0
    auto outer = [&](double a, double b) {
        if (b <= a) return 0.0;
        return Y >= 0.0 ? 2.0 * (F(b) - F(a)) : 0.0;
    };
    auto inner = [&](double a, double b) {
        if (b <= a) return 0.0;
        return Y * (b - a) + (F(b) - F(a));
    };
    double area = outer(-r, std::min(X, -xc));
    area += inner(-xc, std::min(X, xc));
    area += outer(xc, X);
    return area;
}

}  // namespace

DomainSpec DomainSpec::disk(double radius, Vec2 center) {
    if (!(radius > 0.0)) throw InvalidArgument("disk radius must be > 0");
    DomainSpec d;
    d.kind = Kind::Disk;
    d.radius = radius;
    d.center = center;
    return d;
}

DomainSpec DomainSpec::rectangle(Vec2 lower, Vec2 upper) {
    if (!(upper.x > lower.x) || !(upper.y > lower.y))
        throw InvalidArgument("rectangle must have positive extent");
    DomainSpec d;
    d.kind = Kind::Rectangle;
    d.center = 0.5 * (lower + upper);
    d.half_widths = 0.5 * (upper - lower);
    return d;
}

DomainSpec DomainSpec::from_indicator(std::function<bool(Vec2)> inside, Vec2 box_lower, Vec2 box_upper) {
    if (!inside) throw InvalidArgument("indicator domain needs a callable");
    DomainSpec d = rectangle(box_lower, box_upper);
    d.kind = Kind::Indicator;
    d.indicator = std::move(inside);
    return d;
}

bool DomainSpec::contains(Vec2 p) const {
    switch (kind) {
        case Kind::Disk: {
            const Vec2 q = p - center;
            return dot(q, q) < radius * radius;
        }
        case Kind::Rectangle:
            return std::abs(p.x - center.x) < half_widths.x && std::abs(p.y - center.y) < half_widths.y;
        case Kind::Indicator: {
            const bool in_box = std::abs(p.x - center.x) <= half_widths.x &&
                                std::abs(p.y - center.y) <= half_widths.y;
            return in_box && indicator(p);
        }
    }
    return false;
}

Vec2 DomainSpec::box_lower() const {
    if (kind == Kind::Disk) return center - Vec2{radius, radius};
    return center - half_widths;
}

Vec2 DomainSpec::box_upper() const {
    if (kind == Kind::Disk) return center + Vec2{radius, radius};
    return center + half_widths;
}

double DomainSpec::exact_area() const {
    switch (kind) {
        case Kind::Disk: return std::numbers::pi * radius * radius;
        case Kind::Rectangle: return 4.0 * half_widths.x * half_widths.y;
        case Kind::Indicator: return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Disk:
            os << "disk(center=(" << center.x << "," << center.y << "), radius=" << radius << ")";
            break;
        case Kind::Rectangle:
            os << "rectangle([" << center.x - half_widths.x << "," << center.x + half_widths.x << "]x["
               << center.y - half_widths.y << "," << center.y + half_widths.y << "])";
            break;
        case Kind::Indicator:
            os << "indicator(box=[" << center.x - half_widths.x << "," << center.x + half_widths.x
               << "]x[" << center.y - half_widths.y << "," << center.y + half_widths.y << "])";
            break;
    }
    return os.str();
}

double disk_rectangle_overlap(Vec2 c, double r, double x0, double x1, double y0, double y1) {
    x0 -= c.x;
    x1 -= c.x;
    y0 -= c.y;
    y1 -= c.y;
    const double a = quadrant_area(r, x1, y1) - quadrant_area(r, x0, y1) - quadrant_area(r, x1, y0) +
                     quadrant_area(r, x0, y0);
    return std::max(0.0, a);
}

double Grid::total_weight() const {
    double s = 0.0;
    for (const auto& c : cells_) s += c.weight;
    return s;
}

Grid build_grid(const DomainSpec& domain, double h, RetentionRule rule) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("grid spacing h must be finite and > 0");
    const Vec2 lo = domain.box_lower();
    const Vec2 hi = domain.box_upper();
    // bounding-box diagonal overestimates a disk's diameter
    const double diameter = domain.kind == DomainSpec::Kind::Disk ? 2.0 * domain.radius : norm(hi - lo);
    if (!(h < diameter))
        throw InvalidArgument("grid spacing h must be smaller than the domain diameter");

    Grid g;
    g.h_ = h;
    g.domain_ = domain;
    g.rule_ = rule;
    g.origin_ = lo;
    // Tolerate round-off so that exact tilings (e.g. [0,1]^2 with h = 1/4) are not padded.
    g.nx_ = static_cast<int>(std::ceil((hi.x - lo.x) / h - 1e-9));
    g.ny_ = static_cast<int>(std::ceil((hi.y - lo.y) / h - 1e-9));
    const double cell_area = h * h;

    for (int iy = 0; iy < g.ny_; ++iy) {
        for (int ix = 0; ix < g.nx_; ++ix) {
            const double x0 = lo.x + ix * h;
            const double y0 = lo.y + iy * h;
            const Vec2 center{x0 + 0.5 * h, y0 + 0.5 * h};
            double weight = 0.0;
            if (rule == RetentionRule::Midpoint) {
                if (domain.contains(center)) weight = cell_area;
            } else {
                switch (domain.kind) {
                    case DomainSpec::Kind::Disk:
                        weight = disk_rectangle_overlap(domain.center, domain.radius, x0, x0 + h, y0, y0 + h);
                        break;
                    case DomainSpec::Kind::Rectangle: {
                        const double wx = std::min(x0 + h, hi.x) - std::max(x0, lo.x);
                        const double wy = std::min(y0 + h, hi.y) - std::max(y0, lo.y);
                        weight = std::max(0.0, wx) * std::max(0.0, wy);
                        break;
                    }
                    case DomainSpec::Kind::Indicator: {
                        int hits = 0;
                        for (int a = 0; a < kIndicatorSubsamples; ++a)
                            for (int b = 0; b < kIndicatorSubsamples; ++b) {
                                const Vec2 p{x0 + (a + 0.5) * h / kIndicatorSubsamples,
                                             y0 + (b + 0.5) * h / kIndicatorSubsamples};
                                hits += domain.contains(p) ? 1 : 0;
                            }
                        weight = cell_area * hits / (kIndicatorSubsamples * kIndicatorSubsamples);
                        break;
                    }
                }
            }
            if (weight > kMinWeightFraction * cell_area) g.cells_.push_back({center, weight, ix, iy});
        }
    }
    if (g.cells_.empty()) throw InvalidArgument("grid is empty: h too large or degenerate domain");
    return g;
}

std::complex<double> plane_wave_moment(const Grid& grid, Vec2 xi) {
    if (grid.size() == 0) throw InvalidArgument("plane_wave_moment: empty grid");
    return grid.integrate([&](Vec2 x) { return std::polar(1.0, dot(xi, x)); });
}

}  // namespace ffinv
