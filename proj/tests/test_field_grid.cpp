#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ffinv/field_grid.hpp"

using namespace ffinv;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(BuildGrid, DiskAreaCoarse) {
    const auto g = build_grid(DomainSpec::disk(1.0), 0.1);
    EXPECT_NEAR(g.total_weight(), kPi, 0.4);
}

TEST(BuildGrid, DiskAreaFine) {
    const auto g = build_grid(DomainSpec::disk(1.0), 0.02);
    EXPECT_LT(std::abs(g.total_weight() - kPi), 0.07);
}

TEST(BuildGrid, CutCellWeightsSumToExactArea) {
    for (double h : {0.3, 0.1, 0.037}) {
        const auto g = build_grid(DomainSpec::disk(0.7, {0.1, -0.2}), h);
        EXPECT_NEAR(g.total_weight(), kPi * 0.49, 1e-12) << "h = " << h;
    }
}

TEST(BuildGrid, MidpointRuleAreaConverges) {
    const auto g = build_grid(DomainSpec::disk(1.0), 0.02, RetentionRule::Midpoint);
    EXPECT_LT(std::abs(g.total_weight() - kPi), 0.07);
    for (const auto& c : g.cells()) {
        EXPECT_EQ(c.weight, 0.02 * 0.02);
        EXPECT_TRUE(g.domain().contains(c.center));
    }
}

TEST(BuildGrid, UnitSquareTilesExactly) {
    for (auto rule : {RetentionRule::Midpoint, RetentionRule::CutCell}) {
        const auto g = build_grid(DomainSpec::rectangle({0.0, 0.0}, {1.0, 1.0}), 0.25, rule);
        ASSERT_EQ(g.size(), 16u);
        for (const auto& c : g.cells()) EXPECT_DOUBLE_EQ(c.weight, 0.0625);
    }
}

TEST(BuildGrid, CellsInsideBoundingBox) {
    const auto d = DomainSpec::disk(1.0);
    const auto g = build_grid(d, 0.07);
    for (const auto& c : g.cells()) {
        EXPECT_GE(c.center.x, d.box_lower().x);
        EXPECT_LE(c.center.x, d.box_upper().x);
        EXPECT_GE(c.center.y, d.box_lower().y);
        EXPECT_LE(c.center.y, d.box_upper().y);
        EXPECT_GT(c.weight, 0.0);
        EXPECT_LE(c.weight, 0.07 * 0.07 * (1 + 1e-12));
    }
}

TEST(BuildGrid, Errors) {
    EXPECT_THROW((void)build_grid(DomainSpec::disk(1.0), 0.0), InvalidArgument);
    EXPECT_THROW((void)build_grid(DomainSpec::disk(1.0), -0.1), InvalidArgument);
    EXPECT_THROW((void)build_grid(DomainSpec::disk(1.0), 2.5), InvalidArgument);
    EXPECT_THROW((void)DomainSpec::disk(0.0), InvalidArgument);
    const auto nowhere = DomainSpec::from_indicator([](Vec2) { return false; }, {-1, -1}, {1, 1});
    EXPECT_THROW((void)build_grid(nowhere, 0.1), InvalidArgument);
}

TEST(BuildGrid, Deterministic) {
    const auto a = build_grid(DomainSpec::disk(1.0), 0.05);
    const auto b = build_grid(DomainSpec::disk(1.0), 0.05);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.cells()[i].center, b.cells()[i].center);
        EXPECT_EQ(a.cells()[i].weight, b.cells()[i].weight);
    }
}

TEST(BuildGrid, IndicatorEllipseArea) {
    const auto d = DomainSpec::from_indicator([](Vec2 p) { return p.x * p.x / 4.0 + p.y * p.y < 1.0; },
                                              {-2.0, -1.0}, {2.0, 1.0});
    const auto g = build_grid(d, 0.05);
    EXPECT_NEAR(g.total_weight(), 2.0 * kPi, 5e-3);
}

TEST(DiskOverlap, AgainstMonteCarloFreeCases) {
    // cell fully inside, fully outside, and half-plane cut through the centre
    EXPECT_NEAR(disk_rectangle_overlap({0, 0}, 1.0, -0.1, 0.1, -0.1, 0.1), 0.04, 1e-15);
    EXPECT_EQ(disk_rectangle_overlap({0, 0}, 1.0, 2.0, 3.0, 2.0, 3.0), 0.0);
    EXPECT_NEAR(disk_rectangle_overlap({0, 0}, 1.0, 0.0, 2.0, -2.0, 2.0), kPi / 2, 1e-14);
    EXPECT_NEAR(disk_rectangle_overlap({0, 0}, 1.0, 0.0, 2.0, 0.0, 2.0), kPi / 4, 1e-14);
    // circular segment beyond x = 0.5: r^2 acos(d) - d sqrt(1 - d^2)
    EXPECT_NEAR(disk_rectangle_overlap({0, 0}, 1.0, 0.5, 2.0, -2.0, 2.0),
                std::acos(0.5) - 0.5 * std::sqrt(0.75), 1e-14);
}

TEST(PlaneWaveMoment, ZeroFrequencyIsArea) {
    const auto g = build_grid(DomainSpec::disk(1.0), 0.05);
    const auto m = plane_wave_moment(g, {0.0, 0.0});
    EXPECT_NEAR(m.real(), kPi, 1e-12);
    EXPECT_NEAR(m.imag(), 0.0, 1e-14);
}

TEST(PlaneWaveMoment, MatchesDiskFourierTransform) {
    const auto g = build_grid(DomainSpec::disk(1.0), 0.01);
    for (double a : {0.7, 3.0, 5.6568542494923806}) {
        const double exact = 2.0 * kPi * std::cyl_bessel_j(1.0, a) / a;
        const auto m = plane_wave_moment(g, {a, 0.0});
        EXPECT_NEAR(m.real(), exact, 5e-4) << "a = " << a;
        EXPECT_NEAR(m.imag(), 0.0, 1e-12);
    }
}

TEST(PlaneWaveMoment, RotationalSymmetry) {
    const auto g = build_grid(DomainSpec::disk(1.0), 0.03);
    const auto a = plane_wave_moment(g, {2.5, 0.0});
    const auto b = plane_wave_moment(g, {0.0, 2.5});
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
}

TEST(PlaneWaveMoment, QuadratureConvergesUnderRefinement) {
    const double a = 3.0;
    const double exact = 2.0 * kPi * std::cyl_bessel_j(1.0, a) / a;
    double prev = 1.0;
    for (double h : {0.1, 0.05, 0.025}) {
        const double err = std::abs(plane_wave_moment(build_grid(DomainSpec::disk(1.0), h), {a, 0.0}).real() - exact);
        EXPECT_LT(err, prev);
        prev = err;
    }
}
