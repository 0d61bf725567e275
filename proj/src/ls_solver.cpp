#include "ffinv/ls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft_convolution.hpp"
#include "ffinv/gmres.hpp"

namespace ffinv {

ContrastField ContrastField::constant(std::shared_ptr<const Grid> grid, double value) {
    if (!grid) throw InvalidArgument("contrast needs a grid");
    ContrastField c{grid, std::vector<double>(grid->size(), value)};
    return c;
}

ContrastField ContrastField::from_function(std::shared_ptr<const Grid> grid,
                                           const std::function<double(Vec2)>& f) {
    if (!grid) throw InvalidArgument("contrast needs a grid");
    ContrastField c{grid, {}};
    c.values.reserve(grid->size());
    for (const auto& cell : grid->cells()) c.values.push_back(f(cell.center));
    return c;
}

bool ContrastField::is_trivial() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

double ContrastField::min_rho() const { return 1.0 + *std::min_element(values.begin(), values.end()); }
double ContrastField::max_rho() const { return 1.0 + *std::max_element(values.begin(), values.end()); }

void ContrastField::validate() const {
    if (!grid) throw InvalidArgument("contrast has no grid");
    if (values.size() != grid->size())
        throw InvalidArgument("contrast size does not match the grid");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw InvalidArgument("contrast is not finite at cell " + std::to_string(i));
        if (!(1.0 + values[i] > 0.0)) {
            std::ostringstream os;
            os << "rho = " << 1.0 + values[i] << " <= 0 at cell " << i << " (x = "
               << grid->cells()[i].center.x << ", y = " << grid->cells()[i].center.y << ")";
            throw InvalidArgument(os.str());
        }
    }
}

IncidentField IncidentField::plane_wave(const Wavenumber& k, const Direction& theta, cplx alpha) {
    return IncidentField{k, {theta}, {alpha}};
}

cplx IncidentField::evaluate(Vec2 x) const {
    cplx sum{0.0, 0.0};
    const double m = k.magnitude();
    for (std::size_t n = 0; n < directions.size(); ++n) {
        const double phase = m * dot(directions[n].vec(), x);
        sum += coefficients[n] * (k.is_real() ? std::polar(1.0, phase) : cplx{std::exp(-phase), 0.0});
    }
    return sum;
}

void IncidentField::validate() const {
    if (directions.size() != coefficients.size())
        throw InvalidArgument("incident field: one coefficient per direction required");
    for (const auto& d : directions)
        if (std::abs(norm(d.vec()) - 1.0) > kUnitTolerance)
            throw InvalidArgument("incident field: direction is not a unit vector");
}

std::string to_string(SolverBackend backend) {
    switch (backend) {
        case SolverBackend::Auto: return "auto";
        case SolverBackend::DenseLU: return "dense-lu";
        case SolverBackend::FftGmres: return "fft-gmres";
    }
    return "?";
}

Eigen::MatrixXcd assemble(const ContrastField& contrast, const Wavenumber& k) {
    contrast.validate();
    const Grid& grid = *contrast.grid;
    const auto& cells = grid.cells();
    const auto m = static_cast<Eigen::Index>(cells.size());
    const double k2 = k.squared();
    const cplx self = green_cell_mean(k, grid.h());
    Eigen::MatrixXcd a(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double scale = k2 * cells[j].weight * contrast.values[j];
        for (Eigen::Index i = 0; i < m; ++i) {
            const cplx g = (i == j) ? self : green(k, norm(cells[i].center - cells[j].center));
            a(i, j) = (i == j ? 1.0 : 0.0) - scale * g;
        }
    }
    return a;
}

struct ScatteringSolver::Impl {
    std::unique_ptr<detail::LatticeConvolution> conv;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    Eigen::MatrixXcd dense;
    std::vector<cplx> source_scale;  ///< k^2 w_j (rho_j - 1)
};

ScatteringSolver::ScatteringSolver(ContrastField contrast, const Wavenumber& k, SolverOptions options)
    : contrast_(std::move(contrast)), k_(k), options_(options), impl_(std::make_unique<Impl>()) {
    contrast_.validate();
    const Grid& grid = *contrast_.grid;
    backend_ = options_.backend;
    if (backend_ == SolverBackend::Auto)
        backend_ = grid.size() <= options_.dense_threshold ? SolverBackend::DenseLU : SolverBackend::FftGmres;

    impl_->source_scale.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        impl_->source_scale[j] = k_.squared() * grid.cells()[j].weight * contrast_.values[j];

    if (backend_ == SolverBackend::DenseLU) {
        impl_->dense = assemble(contrast_, k_);
        impl_->lu.compute(impl_->dense);
    } else {
        impl_->conv = std::make_unique<detail::LatticeConvolution>(grid, k_);
    }
}

ScatteringSolver::~ScatteringSolver() = default;
ScatteringSolver::ScatteringSolver(ScatteringSolver&&) noexcept = default;
ScatteringSolver& ScatteringSolver::operator=(ScatteringSolver&&) noexcept = default;

void ScatteringSolver::apply(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    const std::size_t m = x.size();
    y.resize(m);
    if (backend_ == SolverBackend::DenseLU) {
        Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(m));
        Eigen::Map<Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(m));
        yv = impl_->dense * xv;
        return;
    }
    std::vector<cplx> q(m);
    for (std::size_t j = 0; j < m; ++j) q[j] = impl_->source_scale[j] * x[j];
    impl_->conv->apply(q.data(), y.data());
    for (std::size_t i = 0; i < m; ++i) y[i] = x[i] - y[i];
}

namespace {

std::vector<cplx> sample_incident(const Grid& grid, const IncidentField& incident) {
    std::vector<cplx> ui;
    ui.reserve(grid.size());
    for (const auto& c : grid.cells()) ui.push_back(incident.evaluate(c.center));
    return ui;
}

double relative_residual(const ScatteringSolver& solver, const std::vector<cplx>& u,
                         const std::vector<cplx>& rhs) {
    std::vector<cplx> au;
    solver.apply(u, au);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        num += std::norm(au[i] - rhs[i]);
        den += std::norm(rhs[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

[[noreturn]] void fail(const std::string& what, double residual, int iterations) {
    std::ostringstream os;
    os << what << " (relative residual " << residual << " after " << iterations << " iterations)";
    throw SolverError(os.str(), residual, iterations);
}

}  // namespace

ScatteringSolution ScatteringSolver::solve(const IncidentField& incident) const {
    if (!k_.is_real() || !incident.k.is_real())
        throw InvalidArgument("solve: real wavenumber required (use solve_modified for k = i kappa)");
    if (std::abs(incident.k.magnitude() - k_.magnitude()) > 0.0)
        throw InvalidArgument("solve: incident wavenumber differs from the operator's");
    incident.validate();
    const Grid& grid = *contrast_.grid;
    const auto m = static_cast<Eigen::Index>(grid.size());
    const std::vector<cplx> ui = sample_incident(grid, incident);

    std::vector<cplx> u(grid.size());
    SolveDiagnostics diag;
    diag.backend = backend_;
    Eigen::Map<const Eigen::VectorXcd> b(ui.data(), m);
    if (backend_ == SolverBackend::DenseLU) {
        Eigen::Map<Eigen::VectorXcd>(u.data(), m) = impl_->lu.solve(b);
        diag.iterations = 1;
    } else {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(m);
        std::vector<cplx> tmp_in(grid.size()), tmp_out;
        const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)> op =
            [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
                std::copy(in.data(), in.data() + m, tmp_in.begin());
                apply(tmp_in, tmp_out);
                out = Eigen::Map<const Eigen::VectorXcd>(tmp_out.data(), m);
            };
        const auto res = gmres<cplx>(op, b, x, options_.tolerance, options_.restart, options_.max_iterations);
        diag.iterations = res.iterations;
        std::copy(x.data(), x.data() + m, u.begin());
    }
    diag.relative_residual = relative_residual(*this, u, ui);
    if (!std::isfinite(diag.relative_residual) || diag.relative_residual > options_.tolerance)
        fail("Lippmann-Schwinger solve did not reach tolerance", diag.relative_residual, diag.iterations);

    ScatteringSolution sol{contrast_.grid, incident, k_, std::move(u), {}, diag};
    sol.u_scattered.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sol.u_scattered[i] = sol.u_total[i] - ui[i];
    return sol;
}

ScatteringSolution ScatteringSolver::solve_modified(const IncidentField& incident) const {
    if (k_.is_real() || incident.k.is_real())
        throw InvalidArgument("solve_modified: imaginary wavenumber k = i kappa required");
    if (incident.k.magnitude() != k_.magnitude())
        throw InvalidArgument("solve_modified: incident wavenumber differs from the operator's");
    incident.validate();
    for (const auto& a : incident.coefficients)
        if (a.imag() != 0.0) throw InvalidArgument("solve_modified: incident coefficients must be real");

    const Grid& grid = *contrast_.grid;
    const auto m = static_cast<Eigen::Index>(grid.size());
    const std::vector<cplx> uic = sample_incident(grid, incident);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) b(i) = uic[i].real();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    SolveDiagnostics diag;
    diag.backend = backend_;
    if (backend_ == SolverBackend::DenseLU) {
        const Eigen::MatrixXd a = impl_->dense.real();
        x = a.partialPivLu().solve(b);
        diag.iterations = 1;
    } else {
        std::vector<cplx> tmp_in(grid.size()), tmp_out;
        const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> op =
            [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
                for (Eigen::Index i = 0; i < m; ++i) tmp_in[i] = in(i);
                apply(tmp_in, tmp_out);
                out.resize(m);
                for (Eigen::Index i = 0; i < m; ++i) out(i) = tmp_out[i].real();
            };
        const auto res = gmres<double>(op, b, x, options_.tolerance, options_.restart, options_.max_iterations);
        diag.iterations = res.iterations;
    }
    std::vector<cplx> u(grid.size());
    for (Eigen::Index i = 0; i < m; ++i) u[i] = {x(i), 0.0};
    diag.relative_residual = relative_residual(*this, u, uic);
    if (!std::isfinite(diag.relative_residual) || diag.relative_residual > options_.tolerance)
        fail("modified Lippmann-Schwinger solve did not reach tolerance", diag.relative_residual,
             diag.iterations);

    ScatteringSolution sol{contrast_.grid, incident, k_, std::move(u), {}, diag};
    sol.u_scattered.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sol.u_scattered[i] = {x(i) - b(i), 0.0};
    return sol;
}

ScatteringSolution solve_scattering(const ContrastField& contrast, const IncidentField& incident,
                                    const SolverOptions& options) {
    return ScatteringSolver(contrast, incident.k, options).solve(incident);
}

ScatteringSolution solve_modified(const ContrastField& contrast, const IncidentField& incident,
                                  const SolverOptions& options) {
    return ScatteringSolver(contrast, incident.k, options).solve_modified(incident);
}

}  // namespace ffinv
