#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ffinv/farfield_ops.hpp"

namespace ffinv {

/// Sign classification of rho - 1 (the coefficient A is the identity here).
struct ContrastClass {
    enum class Kind {
        Assumption1,  ///< 1 - rho >= 0 everywhere, > 0 somewhere
        Assumption2,  ///< rho - 1 >= 0 everywhere, > 0 somewhere
        Neither,
    };
    Kind kind = Kind::Neither;
    double min_one_minus_rho = 0.0;  ///< inf over cells of 1 - rho
    double max_one_minus_rho = 0.0;  ///< sup over cells of 1 - rho
};

[[nodiscard]] ContrastClass classify_contrast(const ContrastField& contrast);
[[nodiscard]] std::string to_string(ContrastClass::Kind kind);

struct ScanSample {
    double k = 0.0;
    double abs_det = 0.0;
    double condition = 0.0;  ///< sigma_max / sigma_min of A(k)
    bool valid = true;       ///< false when the solve failed at this k
    bool flagged = false;    ///< candidate non-scattering wavenumber
};

struct ScanResult {
    std::vector<ScanSample> samples;
    double threshold = 0.0;  ///< flagging threshold on |det A|
    [[nodiscard]] std::vector<double> flagged_k() const;
};

/// Candidates are local minima of |det A(k)| below 1e-3 x median |det A|.
inline constexpr double kScanThresholdFactor = 1e-3;

/// |det A(k)| on `steps` equispaced k in [k_min, k_max]. Failed samples are
/// marked invalid and the scan continues. Trivial contrast is refused.
[[nodiscard]] ScanResult det_scan(const ContrastField& contrast, const std::vector<Direction>& directions,
                                  double k_min, double k_max, int steps, const SolverOptions& options = {},
                                  int threads = 1);

/// A(i kappa) via the volume pairing c_2 k^2 int (rho - 1) u(., theta_n) e^{-kappa theta_m . x}, k^2 = -kappa^2.
[[nodiscard]] Eigen::MatrixXd imaginary_relative_matrix(const ContrastField& contrast,
                                                        const std::vector<Direction>& directions, double kappa,
                                                        const SolverOptions& options = {});

struct CertificateReport {
    double kappa = 0.0;
    ContrastClass classification;
    Eigen::MatrixXd normalized;   ///< c_2^{-1} A(i kappa)
    Eigen::VectorXd eigenvalues;  ///< of the symmetrised normalized matrix, ascending
    double symmetry_defect = 0.0;
    double margin = 0.0;  ///< min |lambda| / ||normalized||_2 over eigenvalues with the expected sign
    bool expect_positive = false;
    bool passed = false;
    [[nodiscard]] std::string summary() const;
};

/// Sign certificate for injectivity of A(i kappa): positive definite under
/// Assumption 1, negative definite under Assumption 2. Throws InvalidArgument
/// ("certificate inapplicable") for Neither and for trivial contrast.
[[nodiscard]] CertificateReport imaginary_k_certificate(const ContrastField& contrast,
                                                        const std::vector<Direction>& directions, double kappa,
                                                        const SolverOptions& options = {},
                                                        double margin_tolerance = 1e-10);

/// CSV with columns k,abs_det,flagged.
void write_scan_csv(std::ostream& os, const ScanResult& scan);

}  // namespace ffinv
