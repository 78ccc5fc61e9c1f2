#include "hirdiff/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "hirdiff/errors.hpp"

namespace hirdiff {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EMat> as_eigen(const Mat& m) {
    return Eigen::Map<const EMat>(m.data(), static_cast<Eigen::Index>(m.rows()),
                                  static_cast<Eigen::Index>(m.cols()));
}

Mat from_eigen(const Eigen::Ref<const EMat>& e) {
    Mat m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    Eigen::Map<EMat>(m.data(), e.rows(), e.cols()) = e;
    return m;
}

} // namespace

ThinSvd truncated_svd(const Mat& m, std::size_t k) {
    if (k == 0 || k > std::min(m.rows(), m.cols()))
        throw ValueError("truncated_svd: rank " + std::to_string(k) + " outside [1, " +
                         std::to_string(std::min(m.rows(), m.cols())) + "]");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd u = svd.matrixU().leftCols(static_cast<Eigen::Index>(k));
    Eigen::MatrixXd v = svd.matrixV().leftCols(static_cast<Eigen::Index>(k));
    ThinSvd out;
    out.s.resize(k);
    for (std::size_t i = 0; i < k; ++i) out.s[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
    // Deterministic sign: largest-magnitude entry of each v column positive.
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        v.col(j).cwiseAbs().maxCoeff(&imax);
        if (v(imax, j) < 0.0) {
            v.col(j) = -v.col(j);
            u.col(j) = -u.col(j);
        }
    }
    out.u = from_eigen(u);
    out.v = from_eigen(v);
    return out;
}

namespace {

struct RhoPick {
    double rho = 0.0;
    Eigen::Index i = 0; // row of R11 (selected column i)
    Eigen::Index j = 0; // rejected column j (offset past k)
};

// Largest interchange gain for the current factorization; R is the
// upper-trapezoidal factor of the permuted matrix, partitioned at column k.
RhoPick max_rho(const Eigen::MatrixXd& r, Eigen::Index k) {
    const Eigen::Index rows = r.rows(), n = r.cols();
    const auto r11 = r.topLeftCorner(k, k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd w = r11.solve(r.topRightCorner(k, n - k)); // R11^{-1} R12
    Eigen::MatrixXd r11inv = r11.solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::VectorXd invrow = r11inv.rowwise().norm(); // 1/omega_i
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(n - k);
    if (rows > k) gamma = r.bottomRightCorner(rows - k, n - k).colwise().norm();
    RhoPick best;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < n - k; ++j) {
            const double rho = std::sqrt(w(i, j) * w(i, j) +
                                         gamma(j) * gamma(j) * invrow(i) * invrow(i));
            if (rho > best.rho) best = {rho, i, j};
        }
    return best;
}

double diag_det_abs(const Eigen::MatrixXd& r, Eigen::Index k) {
    double d = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) d *= std::abs(r(i, i));
    return d;
}

} // namespace

RrqrResult rrqr_select(const Mat& m, double f) {
    if (f < 1.0) throw ValueError("rrqr_select: f must be >= 1, got " + std::to_string(f));
    const Eigen::Index k = static_cast<Eigen::Index>(m.rows());
    const Eigen::Index n = static_cast<Eigen::Index>(m.cols());
    if (k == 0 || n < k)
        throw ShapeError("rrqr_select: need rows <= cols with rows >= 1, got " +
                         std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
    const EMat a = as_eigen(m);

    // Column-pivoted QR seeds the selection with an independent column set
    // and certifies full row rank.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(a);
    {
        const Eigen::MatrixXd qr = pivoted.matrixQR();
        const double dmax = std::abs(qr(0, 0));
        for (Eigen::Index i = 0; i < k; ++i)
            if (std::abs(qr(i, i)) <= dmax * 1e-12)
                throw NumericalError("rrqr_select: rank deficient, pivot " + std::to_string(i) +
                                     " is " + std::to_string(std::abs(qr(i, i))) + " vs leading " +
                                     std::to_string(dmax));
    }
    std::vector<Eigen::Index> perm(n);
    for (Eigen::Index j = 0; j < n; ++j) perm[j] = pivoted.colsPermutation().indices()(j);

    RrqrResult out;
    const std::size_t max_iters = 64 + 16 * static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
    Eigen::MatrixXd permuted(k, n);
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_iters)
            throw NumericalError("rrqr_select: interchange loop failed to terminate");
        for (Eigen::Index j = 0; j < n; ++j) permuted.col(j) = a.col(perm[j]);
        const Eigen::MatrixXd r =
            Eigen::HouseholderQR<Eigen::MatrixXd>(permuted).matrixQR().triangularView<Eigen::Upper>();
        out.det_history.push_back(diag_det_abs(r, k));
        const RhoPick pick = max_rho(r, k);
        // Run interchanges to convergence rather than stopping at gain f:
        // the terminal selection then dominates at every level >= 1, and the
        // 1e-12 slack keeps rounding noise from cycling the loop.
        if (pick.rho <= 1.0 + 1e-12) {
            out.det_abs = out.det_history.back();
            break;
        }
        std::swap(perm[pick.i], perm[k + pick.j]);
        ++out.interchange_count;
    }
    out.selected.resize(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) out.selected[static_cast<std::size_t>(i)] = static_cast<std::size_t>(perm[i]);
    std::sort(out.selected.begin(), out.selected.end());
    return out;
}

double det_abs(const Mat& m) {
    if (m.rows() != m.cols())
        throw ShapeError("det_abs: matrix is " + std::to_string(m.rows()) + " x " +
                         std::to_string(m.cols()));
    if (m.rows() == 0) return 1.0;
    return std::abs(Eigen::PartialPivLU<Eigen::MatrixXd>(as_eigen(m)).determinant());
}

Mat solve_square(const Mat& a, const Mat& b) {
    if (a.rows() != a.cols())
        throw ShapeError("solve_square: coefficient matrix is " + std::to_string(a.rows()) +
                         " x " + std::to_string(a.cols()));
    if (b.rows() != a.rows())
        throw ShapeError("solve_square: rhs has " + std::to_string(b.rows()) + " rows, expected " +
                         std::to_string(a.rows()));
    const EMat ae = as_eigen(a);
    double row_norm_product = 1.0;
    for (Eigen::Index i = 0; i < ae.rows(); ++i) row_norm_product *= ae.row(i).norm();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(ae);
    const double det = std::abs(lu.determinant());
    // det / prod(row norms) is a scale-free conditioning measure in [0, 1].
    if (!(det >= 1e-12 * row_norm_product))
        throw NumericalError("solve_square: numerically singular, |det|/prod(row norms) = " +
                             std::to_string(row_norm_product > 0.0 ? det / row_norm_product : 0.0));
    return from_eigen(lu.solve(as_eigen(b)));
}

} // namespace hirdiff
