#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ffinv {

struct GmresResult {
    double relative_residual = 0.0;  ///< true residual ||b - A x|| / ||b||
    int iterations = 0;              ///< Krylov steps over all restart cycles
    bool converged = false;
};

/// Restarted GMRES(m) with modified Gram-Schmidt and Givens rotations.
/// `apply(x, y)` must compute y = A x. `x` holds the initial guess on entry.
template <class Scalar>
GmresResult gmres(const std::function<void(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&,
                                            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& apply,
                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, double tol, int restart, int max_iterations) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Eigen::numext::conj;

    GmresResult result;
    const Eigen::Index n = b.size();
    const double bnorm = b.norm();
    if (x.size() != n) x = Vec::Zero(n);
    if (bnorm == 0.0) {
        x.setZero();
        result.converged = true;
        return result;
    }
    const int m = std::max(1, std::min<int>(restart, static_cast<int>(n)));

    Vec r(n), w(n);
    Mat V(n, m + 1);
    Mat H = Mat::Zero(m + 1, m);
    std::vector<double> cs(m);
    std::vector<Scalar> sn(m);
    Vec g(m + 1);
    double last_residual = std::numeric_limits<double>::infinity();

    while (true) {
        apply(x, r);
        r = b - r;
        const double beta = r.norm();
        result.relative_residual = beta / bnorm;
        if (result.relative_residual <= tol) {
            result.converged = true;
            return result;
        }
        // no progress over a full cycle: attainable accuracy reached
        if (result.iterations >= max_iterations || !(beta < 0.999 * last_residual)) return result;
        last_residual = beta;

        V.col(0) = r / beta;
        g.setZero();
        g(0) = beta;
        H.setZero();
        int j = 0;
        for (; j < m && result.iterations < max_iterations; ++j) {
            apply(V.col(j), w);
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(w);  // conjugates V.col(i)
                w -= H(i, j) * V.col(i);
            }
            const double hn = w.norm();
            H(j + 1, j) = hn;
            if (hn > 0.0) V.col(j + 1) = w / hn;
            for (int i = 0; i < j; ++i) {
                const Scalar t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -conj(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const Scalar a = H(j, j);
            const double an = std::abs(a);
            const double denom = std::hypot(an, hn);
            if (an == 0.0) {
                cs[j] = 0.0;
                sn[j] = 1.0;
            } else {
                cs[j] = an / denom;
                sn[j] = (a / an) * hn / denom;
            }
            H(j, j) = cs[j] * a + sn[j] * H(j + 1, j);
            H(j + 1, j) = 0.0;
            g(j + 1) = -conj(sn[j]) * g(j);
            g(j) = cs[j] * g(j);
            ++result.iterations;
            if (std::abs(g(j + 1)) <= 0.5 * tol * bnorm || hn == 0.0) {
                ++j;
                break;
            }
        }
        const Vec y = H.topLeftCorner(j, j).template triangularView<Eigen::Upper>().solve(g.head(j));
        x += V.leftCols(j) * y;
    }
}

}  // namespace ffinv
