#include "ffinv/invisibility_designer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "ffinv/expression.hpp"

namespace ffinv {

std::string to_string(DesignMode mode) {
    return mode == DesignMode::SingleIncident ? "single-incident" : "symmetric";
}

DesignMode design_mode_from_string(const std::string& s) {
    if (s == "single-incident") return DesignMode::SingleIncident;
    if (s == "symmetric") return DesignMode::Symmetric;
    throw ConfigError("unknown design mode '" + s + "' (expected single-incident or symmetric)");
}

namespace {

std::string deg(double d) {
    std::ostringstream os;
    os << d << " deg";
    return os.str();
}

bool same(Vec2 a, Vec2 b) { return norm(a - b) < kDirectionTolerance; }

}  // namespace

void DesignConfig::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("design: k must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("design: epsilon must be positive");
    if (!(stop_tolerance > 0.0)) throw InvalidArgument("design: stop tolerance must be positive");
    if (max_iterations < 1) throw InvalidArgument("design: max_iterations must be >= 1");
    if (!(h > 0.0)) throw InvalidArgument("design: h must be positive");
    if (directions_deg.empty()) throw InvalidArgument("design: at least one direction required");

    std::vector<Vec2> dirs;
    for (double d : directions_deg) dirs.push_back(Direction::from_degrees(d).vec());
    if (mode == DesignMode::SingleIncident) {
        const Vec2 ti = Direction::from_degrees(incident_deg).vec();
        for (std::size_t n = 0; n < dirs.size(); ++n) {
            if (same(dirs[n], ti))
                throw ForwardDirectionError("target " + std::to_string(n + 1) + " (" + deg(directions_deg[n]) +
                                            ") is the incident direction " + deg(incident_deg) +
                                            ": a nontrivial real contrast always scatters forward");
            for (std::size_t m = 0; m < n; ++m)
                if (same(dirs[n], dirs[m]))
                    throw InadmissibleDirectionsError("targets " + std::to_string(m + 1) + " and " +
                                                      std::to_string(n + 1) + " coincide (" +
                                                      deg(directions_deg[n]) + ")");
        }
        return;
    }
    std::vector<Vec2> sums;
    for (std::size_t m = 0; m < dirs.size(); ++m)
        for (std::size_t n = m; n < dirs.size(); ++n) {
            const Vec2 s = dirs[m] + dirs[n];
            const std::string pair = "directions " + std::to_string(m + 1) + " (" + deg(directions_deg[m]) +
                                     ") and " + std::to_string(n + 1) + " (" + deg(directions_deg[n]) + ")";
            if (norm(s) < kDirectionTolerance)
                throw ForwardDirectionError(pair + " are opposite: the entry is a forward far field");
            for (const Vec2& t : sums)
                if (same(s, t)) throw InadmissibleDirectionsError(pair + ": direction sum repeats");
            sums.push_back(s);
        }
}

Eigen::VectorXd TrigBasis::dictionary(Vec2 x) const {
    const int p = pairs();
    Eigen::VectorXd phi(2 * p);
    for (int j = 0; j < p; ++j) {
        const double a = dot(frequencies[j], x);
        phi(j) = std::cos(a);
        phi(p + j) = std::sin(a);
    }
    return phi;
}

double TrigBasis::basis_function(int i, Vec2 x) const { return dual.col(i).dot(dictionary(x)); }

Eigen::VectorXd TrigBasis::moments(const Grid& grid, const std::function<double(Vec2)>& f) const {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dimension());
    for (const auto& c : grid.cells()) m += (c.weight * f(c.center)) * dictionary(c.center);
    return m;
}

TrigBasis build_basis(const DesignConfig& config, const Grid& grid) {
    config.validate();
    TrigBasis b;
    b.mode = config.mode;
    b.k = config.k;
    std::vector<Vec2> dirs;
    for (double d : config.directions_deg) dirs.push_back(Direction::from_degrees(d).vec());
    if (config.mode == DesignMode::SingleIncident) {
        const Vec2 ti = Direction::from_degrees(config.incident_deg).vec();
        for (std::size_t n = 0; n < dirs.size(); ++n) {
            b.frequencies.push_back(config.k * (ti - dirs[n]));
            b.labels.emplace_back(static_cast<int>(n), -1);
        }
    } else {
        for (std::size_t m = 0; m < dirs.size(); ++m)
            for (std::size_t n = m; n < dirs.size(); ++n) {
                b.frequencies.push_back(config.k * (dirs[m] + dirs[n]));
                b.labels.emplace_back(static_cast<int>(m), static_cast<int>(n));
            }
    }

    const int dim = b.dimension();
    b.gram = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& c : grid.cells()) {
        const Eigen::VectorXd phi = b.dictionary(c.center);
        b.gram.noalias() += c.weight * phi * phi.transpose();
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.gram);
    const auto& sv = svd.singularValues();
    b.condition = sv(dim - 1) > 0.0 ? sv(0) / sv(dim - 1) : std::numeric_limits<double>::infinity();
    if (!(b.condition <= kMaxGramCondition)) {
        std::ostringstream os;
        os << "Gram matrix of the trigonometric dictionary is numerically singular (condition " << b.condition
           << ")";
        throw InvalidArgument(os.str());
    }
    b.dual = b.gram.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
    return b;
}

double AnalyticContrast::operator()(Vec2 x) const {
    const int p = static_cast<int>(frequencies.size());
    double v = seed ? seed(x) : 0.0;
    for (int j = 0; j < p; ++j) {
        const double a = dot(frequencies[j], x);
        v += coefficients(j) * std::cos(a) + coefficients(p + j) * std::sin(a);
    }
    return v;
}

AnalyticContrast build_mu0(const TrigBasis& basis, const Grid& grid, std::function<double(Vec2)> seed,
                           std::string seed_text) {
    if (!seed) throw InvalidArgument("build_mu0: empty seed");
    AnalyticContrast mu0;
    mu0.frequencies = basis.frequencies;
    mu0.coefficients = -basis.dual * basis.moments(grid, seed);
    mu0.seed = std::move(seed);
    mu0.seed_text = std::move(seed_text);

    double seed_sq = 0.0, mu_sq = 0.0;
    for (const auto& c : grid.cells()) {
        const double s = mu0.seed(c.center);
        const double m = mu0(c.center);
        seed_sq += c.weight * s * s;
        mu_sq += c.weight * m * m;
    }
    if (!(seed_sq > 0.0) || std::sqrt(mu_sq / seed_sq) < kSpanTolerance)
        throw InvalidArgument("mu_0 would vanish: the seed lies in the span of the basis functions");
    return mu0;
}

DesignContext::DesignContext(DesignConfig config) : config_(std::move(config)) {
    config_.validate();
    grid_ = std::make_shared<const Grid>(build_grid(config_.domain, config_.h));
    basis_ = build_basis(config_, *grid_);
    const auto seed = std::make_shared<Expression>(config_.seed);
    auto fn = [seed](Vec2 x) { return (*seed)(x); };
    mu0_ = build_mu0(basis_, *grid_, fn, config_.seed);
    seed_moments_ = basis_.moments(*grid_, fn);
}

AnalyticContrast DesignContext::mu(const Eigen::VectorXd& tau) const {
    AnalyticContrast m = mu0_;
    m.coefficients = basis_.dual * (tau - seed_moments_);
    return m;
}

ContrastField DesignContext::contrast(const Eigen::VectorXd& tau) const {
    const auto m = mu(tau);
    const double eps = config_.epsilon;
    auto c = ContrastField::from_function(grid_, [&](Vec2 x) { return eps * m(x); });
    if (c.min_rho() <= 0.0) {
        std::ostringstream os;
        os << "design: rho = 1 + epsilon mu reaches " << c.min_rho() << " <= 0";
        throw InvalidArgument(os.str());
    }
    return c;
}

std::vector<Direction> DesignContext::incident_directions() const {
    std::vector<Direction> out;
    if (config_.mode == DesignMode::SingleIncident)
        out.push_back(Direction::from_degrees(config_.incident_deg));
    else
        for (double d : config_.directions_deg) out.push_back(Direction::from_degrees(d));
    return out;
}

std::vector<cplx> DesignContext::target_far_fields(const Eigen::VectorXd& tau) const {
    const ContrastField c = contrast(tau);
    const auto k = Wavenumber::real(config_.k);
    std::vector<Direction> dirs;
    for (double d : config_.directions_deg) dirs.push_back(Direction::from_degrees(d));

    if (config_.mode == DesignMode::SingleIncident) {
        if (c.is_trivial()) return std::vector<cplx>(dirs.size(), 0.0);
        const ScatteringSolver solver(c, k, config_.solver);
        const auto sol = solver.solve(IncidentField::plane_wave(k, Direction::from_degrees(config_.incident_deg)));
        std::vector<cplx> out;
        for (const auto& d : dirs) out.push_back(far_field(sol, c, d));
        return out;
    }
    const auto a = relative_matrix(c, config_.k, dirs, config_.solver, config_.threads);
    std::vector<cplx> out;
    for (const auto& [m, n] : basis_.labels) out.push_back(0.5 * (a.entries(m, n) + a.entries(n, m)));
    return out;
}

Eigen::VectorXd DesignContext::update(const Eigen::VectorXd& tau, const std::vector<cplx>& far) const {
    const auto k = Wavenumber::real(config_.k);
    const cplx scale = config_.epsilon * farfield_constant(k) * k.squared();
    const int p = basis_.pairs();
    Eigen::VectorXd next = tau;
    for (int j = 0; j < p; ++j) {
        const cplx z = far[j] / scale;
        next(j) -= z.real();
        next(p + j) -= z.imag();
    }
    return next;
}

DesignState fixed_point_step(const DesignState& state, const DesignContext& context) {
    DesignState next;
    next.iteration = state.iteration + 1;
    next.residuals = context.target_far_fields(state.tau);
    next.residual_sum = 0.0;
    for (const auto& r : next.residuals) next.residual_sum += std::abs(r);
    next.tau = context.update(state.tau, next.residuals);
    next.step = (next.tau - state.tau).lpNorm<1>();
    return next;
}

double DesignedContrast::contraction_rate() const {
    double log_sum = 0.0;
    int count = 0;
    for (double r : contraction_ratios)
        if (r > 0.0 && std::isfinite(r)) {
            log_sum += std::log(r);
            ++count;
        }
    return count == 0 ? 0.0 : std::exp(log_sum / count);
}

double DesignedContrast::log_residual_slope(int count) const {
    std::vector<double> js, ys;
    for (const auto& row : history) {
        if (static_cast<int>(js.size()) >= count) break;
        if (!(row.residual_sum > 0.0)) break;
        js.push_back(row.iteration);
        ys.push_back(std::log(row.residual_sum));
    }
    if (js.size() < 2) return 0.0;
    const double n = static_cast<double>(js.size());
    const double mj = std::accumulate(js.begin(), js.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < js.size(); ++i) {
        sxy += (js[i] - mj) * (ys[i] - my);
        sxx += (js[i] - mj) * (js[i] - mj);
    }
    return sxy / sxx;
}

std::pair<double, double> rho_extremes(const AnalyticContrast& mu, double epsilon, const DomainSpec& domain) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto visit = [&](Vec2 x) {
        const double v = mu(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    if (domain.kind == DomainSpec::Kind::Disk) {
        constexpr int radial = 201, angular = 720;
        visit(domain.center);
        for (int i = 1; i < radial; ++i) {
            const double r = domain.radius * i / (radial - 1);
            for (int j = 0; j < angular; ++j) {
                const double a = 2.0 * std::numbers::pi * j / angular;
                visit(domain.center + Vec2{r * std::cos(a), r * std::sin(a)});
            }
        }
    } else {
        const int n = domain.kind == DomainSpec::Kind::Rectangle ? 401 : 801;
        const Vec2 lower = domain.box_lower(), upper = domain.box_upper();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec2 x{lower.x + (upper.x - lower.x) * i / (n - 1), lower.y + (upper.y - lower.y) * j / (n - 1)};
                if (domain.kind == DomainSpec::Kind::Rectangle || domain.contains(x)) visit(x);
            }
    }
    return {1.0 + epsilon * lo, 1.0 + epsilon * hi};
}

namespace {

std::string trace(const std::vector<HistoryRow>& history, std::size_t last = 8) {
    std::ostringstream os;
    os.precision(6);
    const std::size_t start = history.size() > last ? history.size() - last : 0;
    for (std::size_t i = start; i < history.size(); ++i)
        os << "\n  j=" << history[i].iteration << " sum|u_inf|=" << history[i].residual_sum
           << " sum|dtau|=" << history[i].step;
    return os.str();
}

}  // namespace

DesignedContrast design(const DesignConfig& config) {
    const DesignContext context(config);
    const int dim = context.basis().dimension();

    DesignedContrast out;
    out.config = context.config();
    out.basis = context.basis();

    DesignState state;
    state.tau = Eigen::VectorXd::Zero(dim);
    double previous_step = 0.0;
    for (;;) {
        DesignState next = fixed_point_step(state, context);
        HistoryRow row;
        row.iteration = state.iteration;
        for (const auto& r : next.residuals) row.target_abs.push_back(std::abs(r));
        row.residual_sum = next.residual_sum;
        row.step = next.step;
        row.tau_norm = next.tau.norm();
        out.history.push_back(row);
        if (state.iteration == 0) out.initial_residual = next.residual_sum;
        if (state.iteration > 0 && previous_step > 0.0) out.contraction_ratios.push_back(next.step / previous_step);
        previous_step = next.step;
        state = std::move(next);

        if (!config.fixed_iterations && state.step <= config.stop_tolerance) {
            out.converged = true;
            break;
        }
        if (state.iteration >= config.max_iterations) break;
    }
    out.iterations = state.iteration;
    if (!out.converged && !config.fixed_iterations)
        throw NonConvergenceError("design did not converge within " + std::to_string(config.max_iterations) +
                                  " iterations (stop tolerance " + std::to_string(config.stop_tolerance) +
                                  "):" + trace(out.history));

    out.tau = state.tau;
    out.mu = context.mu(state.tau);
    out.final_far_fields = context.target_far_fields(state.tau);
    out.final_residual = 0.0;
    for (const auto& f : out.final_far_fields) out.final_residual += std::abs(f);
    std::tie(out.rho_min, out.rho_max) = rho_extremes(out.mu, config.epsilon, config.domain);
    out.tau_over_epsilon = out.tau.norm() / config.epsilon;

    const double gamma = 10.0 * config.epsilon * static_cast<double>(config.directions_deg.size());
    if (out.tau.norm() > gamma) {
        std::ostringstream os;
        os << "|tau| = " << out.tau.norm() << " exceeds 10 epsilon N = " << gamma
           << "; epsilon may be outside the contraction regime";
        out.warnings.push_back(os.str());
    }
    return out;
}

std::vector<DesignedContrast> design_sweep(const DesignConfig& base, const std::vector<double>& epsilons,
                                           int threads) {
    std::vector<DesignedContrast> out(epsilons.size());
    std::vector<std::exception_ptr> errors(epsilons.size());
    auto run = [&](std::size_t i) {
        try {
            DesignConfig c = base;
            c.epsilon = epsilons[i];
            c.threads = 1;
            out[i] = design(c);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    threads = std::max(1, std::min<int>(threads, static_cast<int>(epsilons.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < epsilons.size(); ++i) run(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < epsilons.size(); i += threads) run(i);
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

double VerificationReport::max_target_abs() const {
    return target_abs.empty() ? 0.0 : *std::max_element(target_abs.begin(), target_abs.end());
}

VerificationReport verify_design(const DesignedContrast& designed, double h) {
    const DesignConfig& cfg = designed.config;
    VerificationReport rep;
    rep.h = h;
    for (const auto& f : designed.final_far_fields) rep.design_residual = std::max(rep.design_residual, std::abs(f));

    const auto grid = std::make_shared<const Grid>(build_grid(cfg.domain, h));
    const double eps = cfg.epsilon;
    const auto contrast = ContrastField::from_function(grid, [&](Vec2 x) { return eps * designed.mu(x); });
    const auto k = Wavenumber::real(cfg.k);
    std::vector<Direction> dirs;
    for (double d : cfg.directions_deg) dirs.push_back(Direction::from_degrees(d));
    std::vector<Direction> incidents;
    if (cfg.mode == DesignMode::SingleIncident)
        incidents.push_back(Direction::from_degrees(cfg.incident_deg));
    else
        incidents = dirs;

    const auto angles = uniform_angles_deg(360);
    if (contrast.is_trivial()) {
        rep.target_abs.assign(designed.basis.labels.size(), 0.0);
        for (std::size_t i = 0; i < incidents.size(); ++i) {
            for (double a : angles) rep.pattern.push_back({Direction::from_degrees(a), 0.0});
            ForwardReport f;
            f.trivial = true;
            f.obstruction_holds = true;
            rep.forward.push_back(f);
        }
        return rep;
    }

    const ScatteringSolver solver(contrast, k, cfg.solver);
    std::vector<ScatteringSolution> sols;
    for (const auto& inc : incidents) {
        sols.push_back(solver.solve(IncidentField::plane_wave(k, inc)));
        const auto pat = far_field_pattern(sols.back(), contrast, angles);
        rep.pattern.insert(rep.pattern.end(), pat.begin(), pat.end());
        rep.forward.push_back(forward_invisibility_check(sols.back(), contrast));
    }
    if (cfg.mode == DesignMode::SingleIncident) {
        for (const auto& d : dirs) rep.target_abs.push_back(std::abs(far_field(sols[0], contrast, d)));
    } else {
        for (const auto& [m, n] : designed.basis.labels) {
            const cplx amn = far_field(sols[n], contrast, dirs[m].opposite());
            const cplx anm = far_field(sols[m], contrast, dirs[n].opposite());
            rep.target_abs.push_back(std::abs(0.5 * (amn + anm)));
        }
    }
    return rep;
}

}  // namespace ffinv
