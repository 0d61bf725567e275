#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ffinv/ls_solver.hpp"
#include "ffinv/mie_oracle.hpp"

using namespace ffinv;

namespace {

std::shared_ptr<const Grid> disk_grid(double r, double h) {
    return std::make_shared<const Grid>(build_grid(DomainSpec::disk(r), h));
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Assemble, TrivialContrastIsIdentity) {
    const auto g = disk_grid(0.5, 0.1);
    const auto a = assemble(ContrastField::constant(g, 0.0), Wavenumber::real(2.0));
    EXPECT_EQ((a - Eigen::MatrixXcd::Identity(a.rows(), a.cols())).norm(), 0.0);
}

TEST(Assemble, OffDiagonalDefinitionAndLinearity) {
    const auto g = disk_grid(0.5, 0.1);
    const auto k = Wavenumber::real(2.0);
    const auto mu = ContrastField::from_function(g, [](Vec2 x) { return 0.3 + x.x; });
    const auto a = assemble(mu, k);
    const auto& c = g->cells();
    for (int i : {0, 3, 7})
        for (int j : {1, 5, 11}) {
            if (i == j) continue;
            const cplx want = -green(k, norm(c[i].center - c[j].center)) * 4.0 * c[j].weight * mu.values[j];
            EXPECT_NEAR(std::abs(a(i, j) - want), 0.0, 1e-15 * std::abs(want));
        }
    auto mu2 = mu;
    for (auto& v : mu2.values) v *= 0.5;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    EXPECT_NEAR(((assemble(mu2, k) - id) - 0.5 * (a - id)).norm(), 0.0, 1e-14 * a.norm());
}

TEST(Assemble, RejectsBadContrast) {
    const auto g = disk_grid(0.5, 0.1);
    auto c = ContrastField::constant(g, 0.2);
    c.values[3] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW((void)assemble(c, Wavenumber::real(1.0)), InvalidArgument);
    c.values[3] = -1.0;  // rho = 0
    EXPECT_THROW((void)assemble(c, Wavenumber::real(1.0)), InvalidArgument);
}

TEST(Solve, TrivialContrastReturnsIncident) {
    const auto g = disk_grid(0.5, 0.05);
    const auto k = Wavenumber::real(3.0);
    for (auto backend : {SolverBackend::DenseLU, SolverBackend::FftGmres}) {
        SolverOptions o;
        o.backend = backend;
        const auto sol = solve_scattering(ContrastField::constant(g, 0.0),
                                          IncidentField::plane_wave(k, Direction::from_degrees(20.0)), o);
        for (std::size_t i = 0; i < g->size(); ++i) {
            EXPECT_NEAR(std::abs(sol.u_total[i] - sol.incident.evaluate(g->cells()[i].center)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(sol.u_scattered[i]), 0.0, 1e-14);
        }
    }
}

TEST(Solve, DenseAndFftBackendsAgree) {
    const auto g = disk_grid(0.5, 0.04);
    const auto c = ContrastField::from_function(g, [](Vec2 x) { return 0.5 + 0.3 * x.y; });
    const auto inc = IncidentField::plane_wave(Wavenumber::real(4.0), Direction::from_degrees(45.0));
    SolverOptions dense, fft;
    dense.backend = SolverBackend::DenseLU;
    fft.backend = SolverBackend::FftGmres;
    const auto a = solve_scattering(c, inc, dense);
    const auto b = solve_scattering(c, inc, fft);
    EXPECT_EQ(a.diagnostics.backend, SolverBackend::DenseLU);
    EXPECT_EQ(b.diagnostics.backend, SolverBackend::FftGmres);
    EXPECT_LT(max_abs_diff(a.u_total, b.u_total), 1e-10);
    EXPECT_LE(b.diagnostics.relative_residual, fft.tolerance);
}

TEST(Solve, TotalIsIncidentPlusScattered) {
    const auto g = disk_grid(0.5, 0.05);
    const auto sol = solve_scattering(ContrastField::constant(g, 0.5),
                                      IncidentField::plane_wave(Wavenumber::real(2.0), Direction::from_degrees(0.0)));
    for (std::size_t i = 0; i < g->size(); ++i)
        EXPECT_EQ(sol.u_total[i] - sol.incident.evaluate(g->cells()[i].center), sol.u_scattered[i]);
}

TEST(Solve, InteriorFieldMatchesMie) {
    const auto g = disk_grid(0.5, 0.02);
    const MieCase mc{0.5, 1.5, 2.0, 0};
    const auto theta = Direction::from_degrees(0.0);
    const auto sol = solve_scattering(ContrastField::constant(g, 0.5),
                                      IncidentField::plane_wave(Wavenumber::real(2.0), theta));
    double worst = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const Vec2 x = g->cells()[i].center;
        if (norm(x) > 0.45) continue;
        const cplx ref = mie_interior_field(mc, theta, x);
        worst = std::max(worst, std::abs(sol.u_total[i] - ref) / std::abs(ref));
    }
    EXPECT_LT(worst, 0.01);
}

TEST(Solve, BornLimit) {
    const auto g = disk_grid(0.5, 0.05);
    const auto k = Wavenumber::real(3.0);
    const auto inc = IncidentField::plane_wave(k, Direction::from_degrees(10.0));
    auto mu = [](Vec2 x) { return 1.0 + x.x - 2.0 * x.y * x.y; };
    // Born field: k^2 sum_j G(x_i - x_j) w_j mu_j u_i(x_j), same self-cell rule.
    const auto& cells = g->cells();
    const cplx self = green_cell_mean(k, g->h());
    std::vector<cplx> born(g->size(), 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const cplx gk = i == j ? self : green(k, norm(cells[i].center - cells[j].center));
            born[i] += 9.0 * gk * cells[j].weight * mu(cells[j].center) * inc.evaluate(cells[j].center);
        }
    double prev_ratio = 0.0;
    for (double eps : {1e-3, 1e-4}) {
        const auto c = ContrastField::from_function(g, [&](Vec2 x) { return eps * mu(x); });
        const auto sol = solve_scattering(c, inc);
        double err = 0.0, size = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            err = std::max(err, std::abs(sol.u_scattered[i] - eps * born[i]));
            size = std::max(size, std::abs(eps * born[i]));
        }
        EXPECT_LT(err, 10.0 * eps * eps * size / eps);
        if (prev_ratio > 0.0) EXPECT_NEAR(err / (eps * eps), prev_ratio, 0.05 * prev_ratio);
        prev_ratio = err / (eps * eps);
    }
}

TEST(Solve, LinearInIncidentCoefficients) {
    const auto g = disk_grid(0.5, 0.05);
    const auto k = Wavenumber::real(2.0);
    const ScatteringSolver solver(ContrastField::constant(g, 0.7), k);
    const auto d1 = Direction::from_degrees(0.0), d2 = Direction::from_degrees(70.0);
    const auto a = solver.solve(IncidentField::plane_wave(k, d1, {0.5, 1.0}));
    const auto b = solver.solve(IncidentField::plane_wave(k, d2, {-2.0, 0.0}));
    const auto ab = solver.solve(IncidentField{k, {d1, d2}, {{0.5, 1.0}, {-2.0, 0.0}}});
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(std::abs(ab.u_total[i] - a.u_total[i] - b.u_total[i]), 0.0, 1e-11);
}

TEST(Solve, ReportsFailureToConverge) {
    const auto g = disk_grid(1.0, 0.05);
    SolverOptions o;
    o.backend = SolverBackend::FftGmres;
    o.max_iterations = 3;
    o.restart = 3;
    try {
        (void)solve_scattering(ContrastField::constant(g, 0.5),
                               IncidentField::plane_wave(Wavenumber::real(4.0), Direction::from_degrees(0.0)), o);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_GT(e.residual(), o.tolerance);
        EXPECT_GT(e.iterations(), 0);
    }
}

TEST(Solve, RejectsImaginaryWavenumber) {
    const auto g = disk_grid(0.5, 0.1);
    const auto k = Wavenumber::imaginary(1.0);
    EXPECT_THROW((void)solve_scattering(ContrastField::constant(g, 0.5),
                                        IncidentField::plane_wave(k, Direction::from_degrees(0.0))),
                 InvalidArgument);
}

TEST(SolveModified, TrivialAndRealValued) {
    const auto g = disk_grid(1.0, 0.1);
    const auto k = Wavenumber::imaginary(2.0);
    const auto inc = IncidentField::plane_wave(k, Direction::from_degrees(30.0));
    const auto zero = solve_modified(ContrastField::constant(g, 0.0), inc);
    for (const auto& v : zero.u_scattered) EXPECT_EQ(v, cplx(0.0));
    for (auto backend : {SolverBackend::DenseLU, SolverBackend::FftGmres}) {
        SolverOptions o;
        o.backend = backend;
        const auto sol = solve_modified(ContrastField::constant(g, 0.5), inc, o);
        for (std::size_t i = 0; i < g->size(); ++i) {
            EXPECT_EQ(sol.u_total[i].imag(), 0.0);
            EXPECT_EQ(sol.u_scattered[i].imag(), 0.0);
        }
    }
    EXPECT_THROW((void)solve_modified(ContrastField::constant(g, 0.5), IncidentField::plane_wave(k, Direction{}, {0.0, 1.0})),
                 InvalidArgument);
}

TEST(SolveModified, AgreesWithNeumannSeries) {
    const auto g = disk_grid(1.0, 0.1);
    const auto k = Wavenumber::imaginary(2.0);
    const auto c = ContrastField::constant(g, 0.5);
    const auto inc = IncidentField::plane_wave(k, Direction::from_degrees(0.0));
    const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(g->size(), g->size()) - assemble(c, k).real();
    Eigen::VectorXd ui(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) ui(i) = inc.evaluate(g->cells()[i].center).real();
    Eigen::VectorXd u = ui;
    for (int it = 0; it < 200; ++it) u = ui + v * u;
    const auto sol = solve_modified(c, inc);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(sol.u_total[i].real(), u(i), 1e-10);
}
