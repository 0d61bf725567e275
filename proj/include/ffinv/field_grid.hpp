#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ffinv/geometry.hpp"

namespace ffinv {

/// Inclusion support D.
struct DomainSpec {
    enum class Kind { Disk, Rectangle, Indicator };

    Kind kind = Kind::Disk;
    Vec2 center{0.0, 0.0};
    double radius = 1.0;          ///< disk
    Vec2 half_widths{1.0, 1.0};   ///< rectangle
    /// Indicator of D; required for Kind::Indicator, where `center` and
    /// `half_widths` give the bounding box.
    std::function<bool(Vec2)> indicator;

    static DomainSpec disk(double radius, Vec2 center = {0.0, 0.0});
    static DomainSpec rectangle(Vec2 lower, Vec2 upper);
    static DomainSpec from_indicator(std::function<bool(Vec2)> inside, Vec2 box_lower, Vec2 box_upper);

    [[nodiscard]] bool contains(Vec2 p) const;
    [[nodiscard]] Vec2 box_lower() const;
    [[nodiscard]] Vec2 box_upper() const;
    /// |D| for disks and rectangles; NaN for indicator domains.
    [[nodiscard]] double exact_area() const;
    [[nodiscard]] std::string describe() const;
};

/// How lattice cells cut by the boundary enter the quadrature.
enum class RetentionRule {
    /// Keep a cell iff its centre is in D, with weight h^2.
    Midpoint,
    /// Keep every cell meeting D, with weight |cell ∩ D|.
    CutCell,
};

struct GridCell {
    Vec2 center;
    double weight = 0.0;
    int ix = 0;  ///< lattice column
    int iy = 0;  ///< lattice row
};

/// Uniform lattice quadrature over D. Immutable after construction; cells are
/// enumerated row-major in (iy, ix).
class Grid {
public:
    [[nodiscard]] const std::vector<GridCell>& cells() const { return cells_; }
    [[nodiscard]] std::size_t size() const { return cells_.size(); }
    [[nodiscard]] double h() const { return h_; }
    [[nodiscard]] const DomainSpec& domain() const { return domain_; }
    [[nodiscard]] RetentionRule rule() const { return rule_; }
    /// Lattice extent; cell (ix, iy) is centred at origin + ((ix+1/2) h, (iy+1/2) h).
    [[nodiscard]] int nx() const { return nx_; }
    [[nodiscard]] int ny() const { return ny_; }
    [[nodiscard]] Vec2 origin() const { return origin_; }
    [[nodiscard]] double total_weight() const;

    /// Quadrature sum of f over D.
    template <class F>
    [[nodiscard]] auto integrate(F&& f) const {
        using R = decltype(f(Vec2{}));
        R sum{};
        for (const auto& c : cells_) sum += f(c.center) * c.weight;
        return sum;
    }

    friend Grid build_grid(const DomainSpec& domain, double h, RetentionRule rule);

private:
    Grid() = default;
    std::vector<GridCell> cells_;
    double h_ = 0.0;
    int nx_ = 0;
    int ny_ = 0;
    Vec2 origin_{};
    DomainSpec domain_;
    RetentionRule rule_ = RetentionRule::CutCell;
};

/// Lattice of side h aligned with the lower-left corner of D's bounding box.
/// Throws InvalidArgument on h <= 0, h not smaller than the domain diameter, or
/// an empty result.
[[nodiscard]] Grid build_grid(const DomainSpec& domain, double h,
                              RetentionRule rule = RetentionRule::CutCell);

/// Area of the disk (center c, radius r) intersected with [x0,x1] x [y0,y1].
[[nodiscard]] double disk_rectangle_overlap(Vec2 c, double r, double x0, double x1, double y0, double y1);

/// Quadrature of int_D e^{i xi.x} dx.
[[nodiscard]] std::complex<double> plane_wave_moment(const Grid& grid, Vec2 xi);

}  // namespace ffinv
