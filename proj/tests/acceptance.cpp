// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "ffinv/cli_runner.hpp"
#include "ffinv/expression.hpp"
#include "ffinv/farfield_ops.hpp"
#include "ffinv/invisibility_designer.hpp"
#include "ffinv/mie_oracle.hpp"
#include "ffinv/nonscattering_scan.hpp"

using namespace ffinv;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

const MieCase kMie{0.5, 1.5, 2.0, 0};

std::shared_ptr<const Grid> disk(double r, double h) {
    return std::make_shared<const Grid>(build_grid(DomainSpec::disk(r), h));
}

DesignConfig reference_design(double eps) {
    DesignConfig c;
    c.incident_deg = 0.0;
    c.directions_deg = {90.0, 180.0, 225.0};
    c.k = 4.0;
    c.epsilon = eps;
    c.h = 0.02;
    return c;
}

const std::vector<double> kEpsilons{0.05, 0.1, 0.15, 0.2, 0.25};
// minima / maxima of rho after 10 iterations
const std::map<double, std::pair<double, double>> kReferenceRho{
    {0.05, {0.968809, 1.1291}},   {0.1, {0.9436, 1.25374}},   {0.15, {0.915802, 1.37484}},
    {0.2, {0.870935, 1.49338}},   {0.25, {0.818267, 1.61006}},
};

// Shared between criteria.
std::vector<DesignedContrast> g_ten_iterations;
std::vector<DesignedContrast> g_converged;
std::optional<DesignedContrast> g_symmetric;

double mie_error(double h, double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = ContrastField::constant(disk(0.5, h), kMie.rho_in - 1.0);
    const auto ti = Direction::from_degrees(0.0);
    const auto sol = solve_scattering(c, IncidentField::plane_wave(Wavenumber::real(kMie.k), ti));
    double worst = 0.0;
    for (double a : uniform_angles_deg(360)) {
        const auto d = Direction::from_degrees(a);
        const cplx ref = mie_far_field(kMie, ti, d);
        worst = std::max(worst, std::abs(far_field(sol, c, d) - ref) / std::abs(ref));
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return worst;
}

Outcome criterion1() {
    // interior wavelength 2 pi / (k sqrt(rho)) = 2.565; h = 0.02 is > 100 cells per wavelength
    double t1 = 0.0, t2 = 0.0;
    const double e1 = mie_error(0.02, t1);
    const double e2 = mie_error(0.01, t2);
    const double ratio = e2 / e1;
    const bool ok = e1 <= 0.01 && e2 <= 0.01 && ratio <= 0.65 && std::max(t1, t2) <= 120.0;
    return {ok, "max rel err " + fmt(e1) + " (h=0.02), " + fmt(e2) + " (h=0.01), ratio " + fmt(ratio, 3) +
                    ", slowest solve " + fmt(std::max(t1, t2), 3) + " s"};
}

Outcome criterion2() {
    const double series = mie_optical_theorem(kMie).residual;
    const auto grid = optical_theorem_residual(ContrastField::constant(disk(0.5, 0.01), 0.5), kMie.k,
                                               Direction::from_degrees(0.0));
    return {series <= 1e-10 && grid.residual <= 1e-3 && !grid.absolute,
            "grid residual " + fmt(grid.residual) + " (h=0.01), series residual " + fmt(series)};
}

Outcome criterion3() {
    const std::vector<Direction> dirs{Direction::from_degrees(0), Direction::from_degrees(100),
                                      Direction::from_degrees(230)};
    const auto a = relative_matrix(ContrastField::constant(disk(0.5, 0.02), 0.5), kMie.k, dirs);
    const double d = a.symmetry_defect();
    return {d <= 1e-6, "||A - A^T|| / ||A|| = " + fmt(d)};
}

Outcome criterion4() {
    const auto g = disk(1.0, 0.05);
    const std::vector<Direction> dirs{Direction::from_degrees(0), Direction::from_degrees(120),
                                      Direction::from_degrees(240)};
    bool ok = true;
    double worst = std::numeric_limits<double>::infinity();
    std::string failures;
    for (double rho : {1.5, 0.8})
        for (double kappa : {0.5, 1.0, 2.0, 4.0}) {
            const auto rep = imaginary_k_certificate(ContrastField::constant(g, rho - 1.0), dirs, kappa);
            const bool sign_ok = rep.expect_positive == (rho < 1.0);
            ok = ok && rep.passed && sign_ok;
            worst = std::min(worst, rep.margin);
            if (!rep.passed || !sign_ok) failures += " [" + rep.summary() + "]";
        }
    return {ok, "rho=1.5 negative, rho=0.8 positive definite at 4 kappas; smallest margin " + fmt(worst) + failures};
}

Outcome criterion5() {
    const auto it = std::find_if(g_converged.begin(), g_converged.end(),
                                 [](const DesignedContrast& d) { return d.config.epsilon == 0.15; });
    if (it == g_converged.end()) return {false, "epsilon = 0.15 design missing"};
    const auto& d = *it;
    const bool ok = d.converged && d.iterations <= 60 && d.drop_factor() >= 1e6;
    return {ok, std::to_string(d.iterations) + " iterations (reference run: 37), sum |u_inf| " +
                    fmt(d.initial_residual) + " -> " + fmt(d.final_residual) + " (drop " + fmt(d.drop_factor(), 3) +
                    ")"};
}

Outcome criterion6() {
    bool ok = g_ten_iterations.size() == kEpsilons.size();
    double worst = 0.0;
    std::string detail;
    for (const auto& d : g_ten_iterations) {
        const auto [pmin, pmax] = kReferenceRho.at(d.config.epsilon);
        const double gap_min = std::abs((1.0 - d.rho_min) - (1.0 - pmin)) / (1.0 - pmin);
        const double gap_max = std::abs((d.rho_max - 1.0) - (pmax - 1.0)) / (pmax - 1.0);
        worst = std::max({worst, gap_min, gap_max});
        ok = ok && gap_min <= 0.1 && gap_max <= 0.1;
        detail += " eps=" + fmt(d.config.epsilon, 2) + ":[" + fmt(d.rho_min, 6) + "," + fmt(d.rho_max, 6) + "]";
    }
    return {ok, "worst relative gap " + fmt(worst, 3) + ";" + detail};
}

Outcome criterion7() {
    std::vector<double> x, y;
    std::string detail;
    bool monotone = g_ten_iterations.size() == kEpsilons.size();
    for (std::size_t i = 0; i < g_ten_iterations.size(); ++i) {
        const double s = g_ten_iterations[i].log_residual_slope(10);
        x.push_back(std::log(g_ten_iterations[i].config.epsilon));
        y.push_back(s);
        if (i > 0) monotone = monotone && s > y[i - 1];
        monotone = monotone && s < 0.0;
        detail += " " + fmt(s, 3);
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double r2 = sxy * sxy / (sxx * syy);
    return {monotone && r2 > 0.9, "slopes per iteration (eps 0.05..0.25):" + detail + "; R^2 vs ln eps " + fmt(r2, 4) +
                                      ", fitted d(slope)/d(ln eps) " + fmt(sxy / sxx, 3)};
}

Outcome criterion8() {
    const auto cfg = reference_design(0.15);
    const auto grid = build_grid(cfg.domain, cfg.h);
    const auto basis = build_basis(cfg, grid);
    double ortho = 0.0;
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto m = basis.moments(grid, [&](Vec2 x) { return basis.basis_function(i, x); });
        ortho = std::max(ortho, (m - Eigen::VectorXd::Unit(basis.dimension(), i)).cwiseAbs().maxCoeff());
    }
    const Expression seed(cfg.seed);
    const auto mu0 = build_mu0(basis, grid, [&](Vec2 x) { return seed(x); }, cfg.seed);
    const double moments = basis.moments(grid, [&](Vec2 x) { return mu0(x); }).cwiseAbs().maxCoeff();
    const double l2 = std::sqrt(grid.integrate([&](Vec2 x) { return mu0(x) * mu0(x); }));
    return {ortho <= 1e-6 && moments <= 1e-6 && l2 > 0.0,
            "36 basis moments max defect " + fmt(ortho) + ", mu_0 moments " + fmt(moments) + ", ||mu_0|| " + fmt(l2)};
}

Outcome criterion9() {
    if (!g_symmetric) return {false, "symmetric design missing"};
    const auto& d = *g_symmetric;
    double worst = std::numeric_limits<double>::infinity();
    std::string detail;
    for (std::size_t i = 0; i < d.final_far_fields.size(); ++i) {
        const double drop = d.history.front().target_abs[i] / std::abs(d.final_far_fields[i]);
        worst = std::min(worst, drop);
        detail += " " + fmt(drop, 3);
    }
    const bool ok = d.converged && d.final_far_fields.size() == 3 && worst >= 1e5;
    return {ok, std::to_string(d.iterations) + " iterations; per-entry drops" + detail};
}

Outcome criterion10() {
    bool ok = true;
    int count = 0;
    double smallest = std::numeric_limits<double>::infinity();
    std::vector<const DesignedContrast*> designs;
    for (const auto& d : g_converged) designs.push_back(&d);
    if (g_symmetric) designs.push_back(&*g_symmetric);
    for (const auto* d : designs) {
        if (!d->converged) continue;
        const auto grid = std::make_shared<const Grid>(build_grid(d->config.domain, d->config.h));
        const auto c = ContrastField::from_function(grid, [&](Vec2 x) { return d->config.epsilon * d->mu(x); });
        std::vector<double> incidents;
        if (d->config.mode == DesignMode::SingleIncident)
            incidents.push_back(d->config.incident_deg);
        else
            incidents = d->config.directions_deg;
        for (double inc : incidents) {
            const auto rep = forward_invisibility_check(c, d->config.k, Direction::from_degrees(inc), d->config.solver);
            ok = ok && !rep.trivial && rep.normalized_imag > 0.0 && rep.obstruction_holds;
            smallest = std::min(smallest, rep.normalized_imag);
            ++count;
        }
    }
    ok = ok && count > 0;

    // CLI refusal of a forward target
    const auto dir = std::filesystem::temp_directory_path() / "ffinv_acceptance";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "forward.json";
    std::ofstream(cfg) << R"({"schema": "ffinv-config/1", "grid": {"h": 0.05},
        "design": {"incident_deg": 0, "directions_deg": [90, 0]}})";
    std::ostringstream out, err;
    RunOptions opts;
    opts.out_dir = (dir / "out").string();
    const int rc = run_command("design", cfg.string(), opts, out, err);
    std::filesystem::remove_all(dir);
    ok = ok && rc == kExitForwardTarget;
    return {ok, std::to_string(count) + " forward checks, min Im(c2^-1 u_inf(ti,ti)) " + fmt(smallest) +
                    "; forward target exit code " + std::to_string(rc)};
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        for (double eps : kEpsilons) {
            auto c = reference_design(eps);
            c.fixed_iterations = true;
            c.max_iterations = 10;
            g_ten_iterations.push_back(design(c));
            g_converged.push_back(design(reference_design(eps)));
        }
        DesignConfig sym;
        sym.mode = DesignMode::Symmetric;
        sym.directions_deg = {0.0, 90.0};
        sym.k = 3.0;
        sym.epsilon = 0.1;
        sym.h = 0.02;
        g_symmetric = design(sym);
    } catch (const std::exception& e) {
        std::cout << "design runs failed: " << e.what() << '\n';
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Mie oracle equivalence", criterion1},   {"Optical theorem", criterion2},
        {"Reciprocity", criterion3},              {"Sign certificates", criterion4},
        {"Design convergence", criterion5},       {"rho extremes", criterion6},
        {"Contraction scaling", criterion7},      {"Orthogonality suite", criterion8},
        {"Symmetric-mode design", criterion9},    {"Forward obstruction", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.passed ? 0 : 1;
        std::cout << (o.passed ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed in "
              << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3) << " s\n";
    return failed == 0 ? 0 : 1;
}
