#include "ffinv/farfield_ops.hpp"

#include <cmath>
#include <exception>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <thread>

namespace ffinv {
namespace {
constexpr double kTrivialScattering = 1e-300;
}

double RelativeMatrix::symmetry_defect() const {
    const double n = entries.norm();
    if (n == 0.0) return 0.0;
    return (entries - entries.transpose()).norm() / n;
}

cplx far_field(const ScatteringSolution& solution, const ContrastField& contrast, const Direction& theta_s) {
    if (!solution.k.is_real()) throw InvalidArgument("far_field: real wavenumber required");
    if (contrast.grid != solution.grid && contrast.grid->size() != solution.grid->size())
        throw InvalidArgument("far_field: contrast and solution live on different grids");
    const auto& cells = solution.grid->cells();
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (contrast.values[i] == 0.0) continue;
        sum += contrast.values[i] * cells[i].weight * solution.u_total[i] *
               farfield_kernel(solution.k, theta_s, cells[i].center);
    }
    return farfield_constant(solution.k) * solution.k.squared() * sum;
}

std::vector<FarFieldSample> far_field_pattern(const ScatteringSolution& solution, const ContrastField& contrast,
                                              const std::vector<double>& angles_deg) {
    std::vector<FarFieldSample> out;
    out.reserve(angles_deg.size());
    for (double a : angles_deg) {
        const auto d = Direction::from_degrees(a);
        out.push_back({d, far_field(solution, contrast, d)});
    }
    return out;
}

std::vector<double> uniform_angles_deg(int count) {
    if (count < 1) throw InvalidArgument("angle count must be >= 1");
    std::vector<double> a(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) a[i] = 360.0 * i / count;
    return a;
}

RelativeMatrix relative_matrix(const ContrastField& contrast, double k, const std::vector<Direction>& directions,
                               const SolverOptions& options, int threads) {
    if (directions.empty()) throw InvalidArgument("relative_matrix: at least one direction required");
    const auto wk = Wavenumber::real(k);
    const auto n = static_cast<Eigen::Index>(directions.size());
    RelativeMatrix a{Eigen::MatrixXcd::Zero(n, n), directions, k};
    if (contrast.is_trivial()) return a;

    auto column = [&](const ScatteringSolver& solver, Eigen::Index col) {
        const auto sol = solver.solve(IncidentField::plane_wave(wk, directions[col]));
        for (Eigen::Index row = 0; row < n; ++row)
            a.entries(row, col) = far_field(sol, contrast, directions[row].opposite());
    };

    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads == 1) {
        const ScatteringSolver solver(contrast, wk, options);
        for (Eigen::Index col = 0; col < n; ++col) column(solver, col);
        return a;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                const ScatteringSolver solver(contrast, wk, options);
                for (Eigen::Index col = t; col < n; col += threads) column(solver, col);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return a;
}

OpticalTheoremReport optical_theorem_residual(const ScatteringSolution& solution, const ContrastField& contrast,
                                              int angular_nodes) {
    if (angular_nodes < 3) throw InvalidArgument("optical theorem needs at least 3 angular nodes");
    if (solution.incident.directions.size() != 1)
        throw InvalidArgument("optical theorem needs a single plane-wave incident field");
    const Direction& theta_i = solution.incident.directions.front();
    const cplx alpha = solution.incident.coefficients.front();
    const double k = solution.k.magnitude();
    const cplx c2 = farfield_constant(solution.k);

    OpticalTheoremReport rep;
    rep.lhs = (far_field(solution, contrast, theta_i) / (c2 * alpha)).imag();
    const double step = 2.0 * std::numbers::pi / angular_nodes;
    double power = 0.0;
    for (int j = 0; j < angular_nodes; ++j) {
        const auto d = Direction::from_vector({std::cos(j * step), std::sin(j * step)});
        power += std::norm(far_field(solution, contrast, d));
    }
    rep.rhs = k * power * step / std::norm(alpha);
    const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    if (scale <= kTrivialScattering) {
        rep.absolute = true;
        rep.residual = std::abs(rep.lhs - rep.rhs);
    } else {
        rep.residual = std::abs(rep.lhs - rep.rhs) / scale;
    }
    return rep;
}

OpticalTheoremReport optical_theorem_residual(const ContrastField& contrast, double k, const Direction& theta_i,
                                              int angular_nodes, const SolverOptions& options) {
    const auto wk = Wavenumber::real(k);
    const auto sol = solve_scattering(contrast, IncidentField::plane_wave(wk, theta_i), options);
    return optical_theorem_residual(sol, contrast, angular_nodes);
}

ForwardReport forward_invisibility_check(const ScatteringSolution& solution, const ContrastField& contrast,
                                         int angular_nodes) {
    const auto ot = optical_theorem_residual(solution, contrast, angular_nodes);
    ForwardReport rep;
    rep.forward_amplitude = far_field(solution, contrast, solution.incident.directions.front());
    rep.normalized_imag = ot.lhs;
    rep.scattered_power = ot.rhs;
    rep.trivial = ot.absolute;
    rep.obstruction_holds = rep.trivial ? (rep.normalized_imag == 0.0 || ot.residual <= kTrivialScattering)
                                        : (rep.scattered_power > 0.0 && rep.normalized_imag > 0.0);
    return rep;
}

ForwardReport forward_invisibility_check(const ContrastField& contrast, double k, const Direction& theta_i,
                                         const SolverOptions& options) {
    const auto wk = Wavenumber::real(k);
    const auto sol = solve_scattering(contrast, IncidentField::plane_wave(wk, theta_i), options);
    return forward_invisibility_check(sol, contrast);
}

void write_far_field_csv(std::ostream& os, const std::vector<FarFieldSample>& samples) {
    const auto old = os.precision(17);
    os << "angle_deg,re,im,abs\n";
    for (const auto& s : samples)
        os << s.theta_s.degrees() << ',' << s.value.real() << ',' << s.value.imag() << ',' << std::abs(s.value)
           << '\n';
    os.precision(old);
}

}  // namespace ffinv
