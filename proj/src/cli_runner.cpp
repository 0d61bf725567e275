#include "ffinv/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ffinv/design_io.hpp"
#include "ffinv/expression.hpp"
#include "ffinv/mie_oracle.hpp"
#include "ffinv/nonscattering_scan.hpp"

namespace ffinv {

namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ForwardDirectionError*>(&e)) return kExitForwardTarget;
    if (dynamic_cast<const InadmissibleDirectionsError*>(&e)) return kExitInadmissible;
    if (dynamic_cast<const NonConvergenceError*>(&e)) return kExitNonConvergence;
    if (dynamic_cast<const SolverError*>(&e)) return kExitSolverFailure;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return kExitConfigError;
    return kExitFailure;
}

namespace {

fs::path output_dir(const RunConfig& config, const RunOptions& options) {
    fs::path dir = options.out_dir.empty() ? fs::path(config.output_directory) : fs::path(options.out_dir);
    if (!options.out_dir.empty() || dir.is_absolute()) {
    } else {
        dir = fs::path(config.base_directory) / dir;
    }
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    return f;
}

std::shared_ptr<const Grid> make_grid(const RunConfig& config) {
    return std::make_shared<const Grid>(build_grid(config.domain.to_spec(), config.h, config.retention));
}

ContrastField make_contrast(const RunConfig& config, std::shared_ptr<const Grid> grid) {
    const auto& c = config.contrast;
    if (c.type == "constant") return ContrastField::constant(std::move(grid), c.rho - 1.0);
    if (c.type == "expression") {
        const Expression rho(c.expression);
        return ContrastField::from_function(std::move(grid), [&](Vec2 x) { return rho(x) - 1.0; });
    }
    fs::path p(c.path);
    if (p.is_relative()) p = fs::path(config.base_directory) / p;
    const auto design = load_design(p.string());
    return ContrastField::from_function(std::move(grid), [&](Vec2 x) { return design.rho(x) - 1.0; });
}

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

void cmd_solve(const RunConfig& config, const RunOptions& options, std::ostream& log) {
    if (!config.solve) throw ConfigError("solve: config has no solve section");
    const auto& s = *config.solve;
    const fs::path dir = output_dir(config, options);
    const auto grid = make_grid(config);
    const auto contrast = make_contrast(config, grid);
    contrast.validate();
    const auto k = Wavenumber::real(s.k);
    const auto theta_i = Direction::from_degrees(s.incident_deg);
    const auto angles = uniform_angles_deg(s.far_field_angles);

    std::vector<FarFieldSample> pattern;
    std::vector<cplx> u_s(grid->size(), 0.0);
    if (contrast.is_trivial()) {
        for (double a : angles) pattern.push_back({Direction::from_degrees(a), 0.0});
        log << "contrast is trivial: scattered field vanishes\n";
    } else {
        const auto sol = solve_scattering(contrast, IncidentField::plane_wave(k, theta_i), config.solver);
        u_s = sol.u_scattered;
        pattern = far_field_pattern(sol, contrast, angles);
        const auto ot = optical_theorem_residual(sol, contrast);
        log << "cells " << grid->size() << ", backend " << to_string(sol.diagnostics.backend) << ", residual "
            << sol.diagnostics.relative_residual << ", iterations " << sol.diagnostics.iterations << '\n'
            << "optical theorem residual " << ot.residual << '\n';
    }
    {
        auto f = open_out(dir / "field.csv");
        f << std::setprecision(17) << "x,y,abs_us\n";
        for (std::size_t i = 0; i < grid->size(); ++i)
            f << grid->cells()[i].center.x << ',' << grid->cells()[i].center.y << ',' << std::abs(u_s[i]) << '\n';
    }
    {
        auto f = open_out(dir / "farfield.csv");
        write_far_field_csv(f, pattern);
    }
    if (s.compare_mie) {
        const auto& d = config.domain;
        if (config.contrast.type != "constant" || d.shape != "disk" || d.center.x != 0.0 || d.center.y != 0.0)
            throw ConfigError("solve.compare_mie needs a constant contrast on an origin-centred disk");
        const MieCase mc{d.radius, config.contrast.rho, s.k, 0};
        std::vector<FarFieldSample> ref;
        double peak = 0.0, err = 0.0;
        for (const auto& p : pattern) ref.push_back({p.theta_s, mie_far_field(mc, theta_i, p.theta_s)});
        for (std::size_t i = 0; i < ref.size(); ++i) {
            peak = std::max(peak, std::abs(ref[i].value));
            err = std::max(err, std::abs(ref[i].value - pattern[i].value));
        }
        auto f = open_out(dir / "farfield_mie.csv");
        write_far_field_csv(f, ref);
        log << "max far-field deviation from series, relative to peak: " << (peak > 0.0 ? err / peak : err) << '\n';
    }
    log << "wrote " << (dir / "field.csv").string() << ", " << (dir / "farfield.csv").string() << '\n';
}

void cmd_scan(const RunConfig& config, const RunOptions& options, std::ostream& log) {
    if (!config.scan) throw ConfigError("scan: config has no scan section");
    const auto& s = *config.scan;
    const fs::path dir = output_dir(config, options);
    const auto contrast = make_contrast(config, make_grid(config));
    contrast.validate();
    std::vector<Direction> dirs;
    for (double d : s.directions_deg) dirs.push_back(Direction::from_degrees(d));

    const auto cls = classify_contrast(contrast);
    log << "contrast class " << to_string(cls.kind) << " (1 - rho in [" << cls.min_one_minus_rho << ", "
        << cls.max_one_minus_rho << "])\n";
    const auto scan = det_scan(contrast, dirs, s.k_min, s.k_max, s.steps, config.solver, options.threads);
    {
        auto f = open_out(dir / "scan.csv");
        write_scan_csv(f, scan);
    }
    const auto flagged = scan.flagged_k();
    log << "scan: " << scan.samples.size() << " samples, threshold " << scan.threshold << ", " << flagged.size()
        << " candidate(s)";
    for (double k : flagged) log << ' ' << k;
    log << '\n';

    if (!s.kappas.empty()) {
        auto f = open_out(dir / "certificate.txt");
        for (double kappa : s.kappas) {
            std::string line;
            try {
                line = imaginary_k_certificate(contrast, dirs, kappa, config.solver).summary();
            } catch (const InvalidArgument& e) {
                line = "kappa=" + str(kappa) + " " + e.what();
            }
            f << line << '\n';
            log << line << '\n';
        }
    }
}

namespace {

void write_verification(const fs::path& dir, const VerificationReport& rep, std::ostream& log) {
    auto f = open_out(dir / "verification.txt");
    f << std::setprecision(17);
    f << "h " << rep.h << "\ndesign_residual " << rep.design_residual << "\n";
    for (std::size_t i = 0; i < rep.target_abs.size(); ++i) f << "target_" << i + 1 << " " << rep.target_abs[i] << "\n";
    for (std::size_t i = 0; i < rep.forward.size(); ++i)
        f << "forward_" << i + 1 << " normalized_imag " << rep.forward[i].normalized_imag << " power "
          << rep.forward[i].scattered_power << " obstruction " << (rep.forward[i].obstruction_holds ? "holds" : "FAILS")
          << "\n";
    auto ff = open_out(dir / "verify_farfield.csv");
    write_far_field_csv(ff, rep.pattern);
    log << "verification at h = " << rep.h << ": max target |u_inf| " << rep.max_target_abs() << '\n';
}

}  // namespace

void cmd_design(const RunConfig& config, const RunOptions& options, std::ostream& log) {
    if (!config.design) throw ConfigError("design: config has no design section");
    const fs::path dir = output_dir(config, options);
    DesignConfig dc = config.design_config();
    dc.threads = options.threads;
    dc.validate();

    if (!config.design->epsilon_sweep.empty()) {
        dc.fixed_iterations = true;
        dc.max_iterations = config.design->sweep_iterations;
        const auto results = design_sweep(dc, config.design->epsilon_sweep, options.threads);
        auto summary = open_out(dir / "sweep.csv");
        summary << std::setprecision(17) << "epsilon,log_slope,contraction_rate,rho_min,rho_max,tau_over_epsilon\n";
        for (const auto& r : results) {
            const std::string tag = str(r.config.epsilon);
            auto f = open_out(dir / ("residuals_eps_" + tag + ".csv"));
            write_history_csv(f, r);
            summary << r.config.epsilon << ',' << r.log_residual_slope(r.iterations) << ',' << r.contraction_rate()
                    << ',' << r.rho_min << ',' << r.rho_max << ',' << r.tau_over_epsilon << '\n';
            log << "epsilon " << r.config.epsilon << ": slope " << r.log_residual_slope(r.iterations) << ", rho in ["
                << r.rho_min << ", " << r.rho_max << "]\n";
        }
        return;
    }

    const auto designed = design(dc);
    for (const auto& w : designed.warnings) log << "warning: " << w << '\n';
    save_design((dir / "design.json").string(), designed);
    {
        auto f = open_out(dir / "history.csv");
        write_history_csv(f, designed);
    }
    log << "converged in " << designed.iterations << " iterations; sum |u_inf| " << designed.initial_residual
        << " -> " << designed.final_residual << "; rho in [" << designed.rho_min << ", " << designed.rho_max
        << "]\n";
    const double vh = config.design->verify_h > 0.0 ? config.design->verify_h : 0.5 * dc.h;
    write_verification(dir, verify_design(designed, vh), log);
}

std::vector<ValidationCheck> run_validation(const ValidateOptions& options) {
    std::vector<ValidationCheck> checks;
    auto add = [&](std::string name, double measured, double threshold, bool lower_is_better = true) {
        threshold = lower_is_better ? threshold * options.tolerance_scale : threshold / options.tolerance_scale;
        const bool ok = lower_is_better ? measured <= threshold : measured > threshold;
        checks.push_back({std::move(name), measured, threshold, ok});
    };

    const MieCase mc{0.5, 1.5, 2.0, 0};
    add("mie series optical theorem", mie_optical_theorem(mc).residual, 1e-10);

    const auto disk = std::make_shared<const Grid>(build_grid(DomainSpec::disk(0.5), 0.025));
    const auto c15 = ContrastField::constant(disk, 0.5);
    const auto k2 = Wavenumber::real(2.0);
    const auto theta_i = Direction::from_degrees(0.0);
    const auto sol = solve_scattering(c15, IncidentField::plane_wave(k2, theta_i));
    double peak = 0.0, err = 0.0;
    for (double a : uniform_angles_deg(360)) {
        const auto d = Direction::from_degrees(a);
        const cplx ref = mie_far_field(mc, theta_i, d);
        peak = std::max(peak, std::abs(ref));
        err = std::max(err, std::abs(far_field(sol, c15, d) - ref));
    }
    add("far field vs mie series (relative to peak)", err / peak, 1e-2);
    add("optical theorem (grid)", optical_theorem_residual(sol, c15).residual, 1e-3);

    std::vector<Direction> three{Direction::from_degrees(0.0), Direction::from_degrees(100.0),
                                 Direction::from_degrees(230.0)};
    add("reciprocity ||A - A^T|| / ||A||", relative_matrix(c15, 2.0, three, {}, options.threads).symmetry_defect(),
        1e-6);

    const auto b1 = std::make_shared<const Grid>(build_grid(DomainSpec::disk(1.0), 0.05));
    for (double rho : {1.5, 0.8}) {
        const auto rep = imaginary_k_certificate(ContrastField::constant(b1, rho - 1.0), three, 2.0);
        add(std::string("sign certificate rho=") + (rho > 1.0 ? "1.5" : "0.8") + " kappa=2 margin", rep.margin, 1e-10, false);
    }

    DesignConfig dc;
    dc.directions_deg = {90.0, 180.0, 225.0};
    const auto grid = build_grid(dc.domain, dc.h);
    const auto basis = build_basis(dc, grid);
    double ortho = 0.0;
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto m = basis.moments(grid, [&](Vec2 x) { return basis.basis_function(i, x); });
        ortho = std::max(ortho, (m - Eigen::VectorXd::Unit(basis.dimension(), i)).cwiseAbs().maxCoeff());
    }
    add("basis moment conditions", ortho, 1e-6);
    const Expression seed(dc.seed);
    const auto mu0 = build_mu0(basis, grid, [&](Vec2 x) { return seed(x); }, dc.seed);
    add("mu_0 moments", basis.moments(grid, [&](Vec2 x) { return mu0(x); }).cwiseAbs().maxCoeff(), 1e-6);
    add("||mu_0||_L2", std::sqrt(grid.integrate([&](Vec2 x) { return mu0(x) * mu0(x); })), 0.1, false);
    return checks;
}

bool cmd_validate(const ValidateOptions& options, std::ostream& log) {
    const auto checks = run_validation(options);
    bool ok = true;
    for (const auto& c : checks) {
        log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << std::setprecision(6) << c.measured
            << (c.passed ? "" : " (threshold " + str(c.threshold) + ")") << '\n';
        ok = ok && c.passed;
    }
    log << (ok ? "all checks passed" : "validation FAILED") << '\n';
    return ok;
}

int run_command(const std::string& command, const std::string& config_path, const RunOptions& options,
                std::ostream& out, std::ostream& err, const ValidateOptions& validate) {
    try {
        if (command == "validate") {
            ValidateOptions v = validate;
            v.threads = options.threads;
            return cmd_validate(v, out) ? kExitOk : kExitFailure;
        }
        if (config_path.empty()) throw ConfigError(command + ": --config is required");
        const RunConfig config = load_config(config_path);
        if (command == "solve")
            cmd_solve(config, options, out);
        else if (command == "scan")
            cmd_scan(config, options, out);
        else if (command == "design")
            cmd_design(config, options, out);
        else
            throw ConfigError("unknown command '" + command + "'");
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace ffinv
