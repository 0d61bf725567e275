#include "ffinv/nonscattering_scan.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace ffinv {

std::string to_string(ContrastClass::Kind kind) {
    switch (kind) {
        case ContrastClass::Kind::Assumption1: return "assumption1";
        case ContrastClass::Kind::Assumption2: return "assumption2";
        case ContrastClass::Kind::Neither: return "neither";
    }
    return "?";
}

ContrastClass classify_contrast(const ContrastField& contrast) {
    ContrastClass cls;
    if (contrast.values.empty()) return cls;
    const auto [lo, hi] = std::minmax_element(contrast.values.begin(), contrast.values.end());
    // 1 - rho = -(rho - 1)
    cls.min_one_minus_rho = -*hi;
    cls.max_one_minus_rho = -*lo;
    if (cls.min_one_minus_rho >= 0.0 && cls.max_one_minus_rho > 0.0)
        cls.kind = ContrastClass::Kind::Assumption1;
    else if (cls.max_one_minus_rho <= 0.0 && cls.min_one_minus_rho < 0.0)
        cls.kind = ContrastClass::Kind::Assumption2;
    return cls;
}

std::vector<double> ScanResult::flagged_k() const {
    std::vector<double> out;
    for (const auto& s : samples)
        if (s.flagged) out.push_back(s.k);
    return out;
}

ScanResult det_scan(const ContrastField& contrast, const std::vector<Direction>& directions, double k_min,
                    double k_max, int steps, const SolverOptions& options, int threads) {
    if (!(k_min > 0.0) || !(k_max > k_min)) throw InvalidArgument("det_scan: need 0 < k_min < k_max");
    if (steps < 2) throw InvalidArgument("det_scan: need at least 2 steps");
    if (contrast.is_trivial())
        throw InvalidArgument("det_scan: trivial contrast, A(k) vanishes identically");

    ScanResult scan;
    scan.samples.resize(static_cast<std::size_t>(steps));
    auto sample = [&](int i) {
        ScanSample& s = scan.samples[i];
        s.k = k_min + (k_max - k_min) * i / (steps - 1);
        try {
            const auto a = relative_matrix(contrast, s.k, directions, options);
            s.abs_det = std::abs(a.entries.determinant());
            const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.entries);
            const auto& sv = svd.singularValues();
            s.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                   : std::numeric_limits<double>::infinity();
            s.valid = std::isfinite(s.abs_det);
        } catch (const SolverError&) {
            s.valid = false;
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int i = 0; i < steps; ++i) sample(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int i = t; i < steps; i += threads) sample(i);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<double> dets;
    for (const auto& s : scan.samples)
        if (s.valid) dets.push_back(s.abs_det);
    if (dets.empty()) return scan;
    std::nth_element(dets.begin(), dets.begin() + dets.size() / 2, dets.end());
    scan.threshold = kScanThresholdFactor * dets[dets.size() / 2];
    for (int i = 0; i < steps; ++i) {
        auto& s = scan.samples[i];
        if (!s.valid || s.abs_det >= scan.threshold) continue;
        const bool left = i == 0 || !scan.samples[i - 1].valid || scan.samples[i - 1].abs_det >= s.abs_det;
        const bool right =
            i == steps - 1 || !scan.samples[i + 1].valid || scan.samples[i + 1].abs_det >= s.abs_det;
        s.flagged = left && right;
    }
    return scan;
}

Eigen::MatrixXd imaginary_relative_matrix(const ContrastField& contrast, const std::vector<Direction>& directions,
                                          double kappa, const SolverOptions& options) {
    if (directions.empty()) throw InvalidArgument("imaginary_relative_matrix: no directions");
    const auto k = Wavenumber::imaginary(kappa);
    const auto n = static_cast<Eigen::Index>(directions.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    if (contrast.is_trivial()) return a;
    const auto& cells = contrast.grid->cells();
    const double c2 = farfield_constant(k).real();
    const ScatteringSolver solver(contrast, k, options);
    for (Eigen::Index col = 0; col < n; ++col) {
        const auto sol = solver.solve_modified(IncidentField::plane_wave(k, directions[col]));
        for (Eigen::Index row = 0; row < n; ++row) {
            double sum = 0.0;
            const Vec2 t = directions[row].vec();
            for (std::size_t i = 0; i < cells.size(); ++i)
                sum += contrast.values[i] * cells[i].weight * sol.u_total[i].real() *
                       std::exp(-kappa * dot(t, cells[i].center));
            a(row, col) = c2 * k.squared() * sum;
        }
    }
    return a;
}

std::string CertificateReport::summary() const {
    std::ostringstream os;
    os << "kappa=" << kappa << " class=" << to_string(classification.kind) << " "
       << (expect_positive ? "positive" : "negative") << " definite: " << (passed ? "pass" : "FAIL")
       << " (margin " << margin << ", symmetry defect " << symmetry_defect << ")";
    return os.str();
}

CertificateReport imaginary_k_certificate(const ContrastField& contrast, const std::vector<Direction>& directions,
                                          double kappa, const SolverOptions& options, double margin_tolerance) {
    if (contrast.is_trivial())
        throw InvalidArgument("certificate inapplicable: trivial contrast gives A(i kappa) = 0");
    CertificateReport rep;
    rep.kappa = kappa;
    rep.classification = classify_contrast(contrast);
    if (rep.classification.kind == ContrastClass::Kind::Neither)
        throw InvalidArgument("certificate inapplicable: rho - 1 changes sign");
    rep.expect_positive = rep.classification.kind == ContrastClass::Kind::Assumption1;

    const double c2 = farfield_constant(Wavenumber::imaginary(kappa)).real();
    rep.normalized = imaginary_relative_matrix(contrast, directions, kappa, options) / c2;
    const double nrm = rep.normalized.norm();
    rep.symmetry_defect = nrm == 0.0 ? 0.0 : (rep.normalized - rep.normalized.transpose()).norm() / nrm;
    const Eigen::MatrixXd sym = 0.5 * (rep.normalized + rep.normalized.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    rep.eigenvalues = es.eigenvalues();
    const double spectral = rep.eigenvalues.cwiseAbs().maxCoeff();
    const double signed_min = rep.expect_positive ? rep.eigenvalues.minCoeff() : -rep.eigenvalues.maxCoeff();
    rep.margin = spectral == 0.0 ? 0.0 : signed_min / spectral;
    rep.passed = rep.margin > margin_tolerance;
    return rep;
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
    const auto old = os.precision(17);
    os << "k,abs_det,flagged\n";
    for (const auto& s : scan.samples)
        os << s.k << ',' << (s.valid ? s.abs_det : std::nan("")) << ',' << (s.flagged ? 1 : 0) << '\n';
    os.precision(old);
}

}  // namespace ffinv
