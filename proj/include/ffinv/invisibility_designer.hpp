#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ffinv/farfield_ops.hpp"

namespace ffinv {

enum class DesignMode {
    SingleIncident,  ///< null u^inf(theta_n, theta_i) for one incident theta_i
    Symmetric,       ///< null A(k) = [u^inf(-theta_m, theta_n)] on one direction set
};

[[nodiscard]] std::string to_string(DesignMode mode);
[[nodiscard]] DesignMode design_mode_from_string(const std::string& s);

struct DesignConfig {
    DesignMode mode = DesignMode::SingleIncident;
    double incident_deg = 0.0;          ///< single-incident mode only
    std::vector<double> directions_deg; ///< targets (single) or the direction set (symmetric)
    double k = 4.0;
    double epsilon = 0.15;
    std::string seed = "1 + x + y";     ///< mu_0^# as an Expression
    double stop_tolerance = 1e-13;      ///< on sum |tau^{j+1} - tau^j|
    int max_iterations = 200;
    /// Run exactly max_iterations steps and skip the stop test (no
    /// NonConvergenceError). Used for contraction-rate studies.
    bool fixed_iterations = false;
    double h = 0.02;
    DomainSpec domain = DomainSpec::disk(1.0);
    SolverOptions solver = default_solver();
    int threads = 1;

    static SolverOptions default_solver() {
        SolverOptions o;
        o.tolerance = 1e-13;
        return o;
    }

    /// Throws ForwardDirectionError / InadmissibleDirectionsError on
    /// inadmissible directions, InvalidArgument on other bad values.
    void validate() const;
};

/// Directions closer than this (as unit-vector differences) count as equal.
inline constexpr double kDirectionTolerance = 1e-12;

/// Dual basis to the cos/sin dictionary {cos(xi_j . x), sin(xi_j . x)}_j,
/// xi_j = k (theta_i - theta_n) or k (theta_m + theta_n) for m <= n.
/// Dictionary index: j < P is cos(xi_j . x), P + j is sin(xi_j . x).
struct TrigBasis {
    DesignMode mode = DesignMode::SingleIncident;
    double k = 0.0;
    std::vector<Vec2> frequencies;            ///< xi_j, j < P
    std::vector<std::pair<int, int>> labels;  ///< (n, -1) single, (m, n) symmetric
    Eigen::MatrixXd gram;  ///< 2P x 2P cross-integrals of the dictionary over D
    Eigen::MatrixXd dual;  ///< gram^{-1}; column i holds the coefficients of basis function i
    double condition = 0.0;

    [[nodiscard]] int pairs() const { return static_cast<int>(frequencies.size()); }
    [[nodiscard]] int dimension() const { return 2 * pairs(); }
    [[nodiscard]] Eigen::VectorXd dictionary(Vec2 x) const;
    /// Basis function i: cos-type for i < P, sin-type for P <= i < 2P.
    [[nodiscard]] double basis_function(int i, Vec2 x) const;
    /// Quadrature moments int_D f phi_j for every dictionary function.
    [[nodiscard]] Eigen::VectorXd moments(const Grid& grid, const std::function<double(Vec2)>& f) const;
};

/// Gram matrices with a condition number above this are treated as singular.
inline constexpr double kMaxGramCondition = 1e12;

[[nodiscard]] TrigBasis build_basis(const DesignConfig& config, const Grid& grid);

/// mu(x) = seed(x) + sum_j coefficients_j phi_j(x) over the basis dictionary.
struct AnalyticContrast {
    std::function<double(Vec2)> seed;
    std::string seed_text;
    std::vector<Vec2> frequencies;
    Eigen::VectorXd coefficients;  ///< length 2P, same layout as the dictionary

    [[nodiscard]] double operator()(Vec2 x) const;
};

/// mu_0 = seed minus its projection onto the basis: coefficients -dual * moments(seed).
/// Throws InvalidArgument ("mu_0 would vanish") if the seed lies in the span.
[[nodiscard]] AnalyticContrast build_mu0(const TrigBasis& basis, const Grid& grid,
                                         std::function<double(Vec2)> seed, std::string seed_text = "");

/// Span test threshold on ||mu_0|| / ||seed|| in L2(D).
inline constexpr double kSpanTolerance = 1e-8;

struct DesignState {
    int iteration = 0;
    Eigen::VectorXd tau;  ///< 2P
    /// Target far fields for the parameter of this iteration: u^inf(theta_n, theta_i)
    /// (single) or the averaged A entries of each pair (symmetric).
    std::vector<cplx> residuals;
    double residual_sum = 0.0;  ///< sum |residuals|
    double step = 0.0;          ///< sum |tau^{j+1} - tau^j| of the step that produced this state
};

struct HistoryRow {
    int iteration = 0;
    std::vector<double> target_abs;  ///< |u^inf| per target before the update
    double residual_sum = 0.0;
    double step = 0.0;  ///< sum |tau^{j+1} - tau^j|
    double tau_norm = 0.0;
};

/// Everything needed for one step at fixed (basis, mu_0, grid).
class DesignContext {
public:
    DesignContext(DesignConfig config);

    [[nodiscard]] const DesignConfig& config() const { return config_; }
    [[nodiscard]] const TrigBasis& basis() const { return basis_; }
    [[nodiscard]] const AnalyticContrast& mu0() const { return mu0_; }
    [[nodiscard]] std::shared_ptr<const Grid> grid() const { return grid_; }
    [[nodiscard]] const Eigen::VectorXd& seed_moments() const { return seed_moments_; }

    /// mu for a given tau: coefficients dual * (tau - seed_moments).
    [[nodiscard]] AnalyticContrast mu(const Eigen::VectorXd& tau) const;
    /// Cell values of rho - 1 = epsilon mu on the design grid; throws
    /// InvalidArgument if rho <= 0 somewhere.
    [[nodiscard]] ContrastField contrast(const Eigen::VectorXd& tau) const;
    /// Target far fields for the parameter rho = 1 + epsilon mu(tau).
    [[nodiscard]] std::vector<cplx> target_far_fields(const Eigen::VectorXd& tau) const;
    /// tau - [Re; Im](far fields / (epsilon c_2 k^2)).
    [[nodiscard]] Eigen::VectorXd update(const Eigen::VectorXd& tau, const std::vector<cplx>& far) const;

    /// Incident directions and, per incident, the receiver directions of each target.
    [[nodiscard]] std::vector<Direction> incident_directions() const;

private:
    DesignConfig config_;
    std::shared_ptr<const Grid> grid_;
    TrigBasis basis_;
    AnalyticContrast mu0_;
    Eigen::VectorXd seed_moments_;
};

/// One iteration of the fixed-point map from `state`; the returned state has
/// tau^{j+1}, the far fields at tau^j and the step size.
[[nodiscard]] DesignState fixed_point_step(const DesignState& state, const DesignContext& context);

struct DesignedContrast {
    DesignConfig config;
    TrigBasis basis;
    AnalyticContrast mu;        ///< final mu
    Eigen::VectorXd tau;
    int iterations = 0;         ///< fixed-point steps taken
    bool converged = false;
    std::vector<HistoryRow> history;
    std::vector<cplx> final_far_fields;  ///< targets, evaluated at the final tau
    double initial_residual = 0.0;       ///< sum |u^inf| at tau^0
    double final_residual = 0.0;         ///< sum |final_far_fields|
    double rho_min = 0.0;                ///< over the closed domain, from the analytic mu
    double rho_max = 0.0;
    double tau_over_epsilon = 0.0;       ///< |tau|_2 / epsilon
    std::vector<double> contraction_ratios;  ///< step_j / step_{j-1}
    std::vector<std::string> warnings;

    /// Geometric-mean contraction ratio over the recorded steps.
    [[nodiscard]] double contraction_rate() const;
    /// Least-squares slope of ln(residual_sum) against j over the first `count` rows.
    [[nodiscard]] double log_residual_slope(int count = 10) const;
    [[nodiscard]] double drop_factor() const { return initial_residual / final_residual; }
};

/// Runs the fixed-point iteration. Throws NonConvergenceError with the
/// residual trace if the stop test fails within max_iterations (unless
/// fixed_iterations is set).
[[nodiscard]] DesignedContrast design(const DesignConfig& config);

/// Independent designs at several epsilon, `threads` at a time.
[[nodiscard]] std::vector<DesignedContrast> design_sweep(const DesignConfig& base,
                                                         const std::vector<double>& epsilons, int threads = 1);

/// Extremes of 1 + epsilon mu over the closed domain (fine polar/lattice sampling).
[[nodiscard]] std::pair<double, double> rho_extremes(const AnalyticContrast& mu, double epsilon,
                                                     const DomainSpec& domain);

struct VerificationReport {
    double h = 0.0;
    std::vector<double> target_abs;
    double design_residual = 0.0;  ///< max target |u^inf| on the design grid
    std::vector<FarFieldSample> pattern;  ///< 360 angles, for each incident direction in turn
    std::vector<ForwardReport> forward;   ///< one per incident direction
    [[nodiscard]] double max_target_abs() const;
};

/// Re-solves the analytic design on a fresh grid of side `h` (e.g. half the
/// design h) and reports target magnitudes, far-field patterns and the
/// forward check.
[[nodiscard]] VerificationReport verify_design(const DesignedContrast& designed, double h);

}  // namespace ffinv
