#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "ffinv/farfield_ops.hpp"
#include "ffinv/mie_oracle.hpp"

using namespace ffinv;

namespace {

std::shared_ptr<const Grid> disk_grid(double r, double h) {
    return std::make_shared<const Grid>(build_grid(DomainSpec::disk(r), h));
}

const MieCase kMie{0.5, 1.5, 2.0, 0};

}  // namespace

TEST(FarField, TrivialContrastIsZero) {
    const auto g = disk_grid(0.5, 0.05);
    const auto c = ContrastField::constant(g, 0.0);
    const auto sol = solve_scattering(c, IncidentField::plane_wave(Wavenumber::real(2.0), Direction{}));
    for (double a : uniform_angles_deg(12)) EXPECT_EQ(far_field(sol, c, Direction::from_degrees(a)), cplx(0.0));
    const auto a = relative_matrix(c, 2.0, {Direction::from_degrees(0), Direction::from_degrees(90)});
    EXPECT_EQ(a.entries.norm(), 0.0);
}

TEST(FarField, BornLimitMatchesMoment) {
    const auto g = disk_grid(1.0, 0.05);
    const double k = 3.0, eps = 1e-4;
    const auto ti = Direction::from_degrees(0.0), ts = Direction::from_degrees(135.0);
    const auto c = ContrastField::constant(g, eps);
    const auto sol = solve_scattering(c, IncidentField::plane_wave(Wavenumber::real(k), ti));
    const Vec2 xi = k * (ti.vec() - ts.vec());
    const cplx born = eps * farfield_constant(Wavenumber::real(k)) * k * k * plane_wave_moment(*g, xi);
    const cplx got = far_field(sol, c, ts);
    EXPECT_LT(std::abs(got - born), 50.0 * eps * eps);
    EXPECT_GT(std::abs(born), 100.0 * std::abs(got - born));
}

TEST(FarField, MatchesMieSeries) {
    const auto g = disk_grid(0.5, 0.02);
    const auto c = ContrastField::constant(g, 0.5);
    const auto ti = Direction::from_degrees(0.0);
    const auto sol = solve_scattering(c, IncidentField::plane_wave(Wavenumber::real(2.0), ti));
    double worst = 0.0;
    for (double a : uniform_angles_deg(360)) {
        const auto d = Direction::from_degrees(a);
        const cplx ref = mie_far_field(kMie, ti, d);
        worst = std::max(worst, std::abs(far_field(sol, c, d) - ref) / std::abs(ref));
    }
    EXPECT_LT(worst, 0.01);
}

TEST(RelativeMatrix, SingleDirectionIsBackscatter) {
    const auto g = disk_grid(0.5, 0.025);
    const auto d = Direction::from_degrees(30.0);
    const auto a = relative_matrix(ContrastField::constant(g, 0.5), 2.0, {d});
    const cplx ref = mie_far_field(kMie, d, d.opposite());
    EXPECT_LT(std::abs(a.entries(0, 0) - ref) / std::abs(ref), 0.01);
}

TEST(RelativeMatrix, Reciprocity) {
    const auto g = disk_grid(0.5, 0.025);
    const auto c = ContrastField::from_function(g, [](Vec2 x) { return 0.5 + x.x - 0.4 * x.y; });
    const std::vector<Direction> dirs{Direction::from_degrees(0), Direction::from_degrees(100),
                                      Direction::from_degrees(230)};
    const auto a = relative_matrix(c, 2.0, dirs);
    EXPECT_LT(a.symmetry_defect(), 1e-6);
    const auto b = relative_matrix(c, 2.0, dirs, {}, 3);
    EXPECT_LT((a.entries - b.entries).norm(), 1e-12 * a.entries.norm());
}

TEST(RelativeMatrix, GeneralReciprocity) {
    // u^inf(ts, ti) = u^inf(-ti, -ts) for an asymmetric contrast
    const auto g = disk_grid(0.5, 0.03);
    const auto c = ContrastField::from_function(g, [](Vec2 x) { return 0.4 + 0.8 * x.x * x.y + 0.3 * x.y; });
    const auto k = Wavenumber::real(2.5);
    const auto ti = Direction::from_degrees(20.0), ts = Direction::from_degrees(250.0);
    const ScatteringSolver solver(c, k);
    const cplx a = far_field(solver.solve(IncidentField::plane_wave(k, ti)), c, ts);
    const cplx b = far_field(solver.solve(IncidentField::plane_wave(k, ts.opposite())), c, ti.opposite());
    EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-8);
}

TEST(OpticalTheorem, TrivialIsAbsoluteZero) {
    const auto g = disk_grid(0.5, 0.1);
    const auto r = optical_theorem_residual(ContrastField::constant(g, 0.0), 2.0, Direction{});
    EXPECT_TRUE(r.absolute);
    EXPECT_EQ(r.residual, 0.0);
}

TEST(OpticalTheorem, MieCaseAndRefinement) {
    double prev = 1.0;
    for (double h : {0.05, 0.025, 0.0125}) {
        const auto g = disk_grid(0.5, h);
        const auto r = optical_theorem_residual(ContrastField::constant(g, 0.5), 2.0, Direction{});
        EXPECT_FALSE(r.absolute);
        EXPECT_LT(r.residual, 1e-3) << "h = " << h;
        EXPECT_LE(r.residual, prev * 1.0001) << "h = " << h;
        prev = r.residual;
    }
}

TEST(ForwardCheck, TrivialAndMie) {
    const auto g = disk_grid(0.5, 0.05);
    const auto zero = forward_invisibility_check(ContrastField::constant(g, 0.0), 2.0, Direction{});
    EXPECT_TRUE(zero.trivial);
    EXPECT_EQ(zero.forward_amplitude, cplx(0.0));
    EXPECT_EQ(zero.scattered_power, 0.0);
    const auto mie = forward_invisibility_check(ContrastField::constant(g, 0.5), 2.0, Direction{});
    EXPECT_FALSE(mie.trivial);
    EXPECT_GT(mie.normalized_imag, 0.0);
    EXPECT_TRUE(mie.obstruction_holds);
}

TEST(FarFieldCsv, Format) {
    std::ostringstream os;
    write_far_field_csv(os, {{Direction::from_degrees(90.0), {0.1, -0.2}}});
    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    EXPECT_EQ(header, "angle_deg,re,im,abs");
    EXPECT_EQ(row.substr(0, 3), "90,");
    EXPECT_NE(row.find("0.10000000000000001"), std::string::npos);
}

TEST(UniformAngles, Count) {
    const auto a = uniform_angles_deg(360);
    ASSERT_EQ(a.size(), 360u);
    EXPECT_EQ(a[0], 0.0);
    EXPECT_EQ(a[90], 90.0);
    EXPECT_THROW((void)uniform_angles_deg(0), InvalidArgument);
}
