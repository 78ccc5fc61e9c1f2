#pragma once

// Hand-rolled reference computations for the tests. These deliberately avoid
// the library's linear algebra path (and its backing library) so that
// implementation and check can only agree by being correct.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hirdiff/tensor.hpp"

namespace oracles {

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
// descending. Plain O(n^3)-per-sweep textbook form; fine at test sizes.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> s, std::size_t n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += s[p * n + q] * s[p * n + q];
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (s[q * n + q] - s[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double snr = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = s[i * n + p];
                    const double aiq = s[i * n + q];
                    s[i * n + p] = c * aip - snr * aiq;
                    s[i * n + q] = snr * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = s[p * n + i];
                    const double aqi = s[q * n + i];
                    s[p * n + i] = c * api - snr * aqi;
                    s[q * n + i] = snr * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = s[i * n + i];
    std::sort(eig.rbegin(), eig.rend());
    return eig;
}

// Singular values of an m x n row-major matrix via the Gram matrix of the
// smaller side, descending.
inline std::vector<double> singular_values(const hirdiff::Mat& a) {
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t d = std::min(m, n);
    std::vector<double> gram(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            if (n <= m) // A^T A
                for (std::size_t r = 0; r < m; ++r) s += a(r, i) * a(r, j);
            else // A A^T
                for (std::size_t c = 0; c < n; ++c) s += a(i, c) * a(j, c);
            gram[i * d + j] = s;
        }
    std::vector<double> eig = jacobi_eigenvalues(std::move(gram), d);
    for (double& v : eig) v = std::sqrt(std::max(0.0, v));
    return eig;
}

// |det| by cofactor expansion along the first row; exponential, for n <= 5.
inline double det_recursive(const std::vector<double>& a, std::size_t n) {
    if (n == 1) return a[0];
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> minor((n - 1) * (n - 1));
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t mc = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == c) continue;
                minor[(i - 1) * (n - 1) + mc++] = a[i * n + j];
            }
        }
        const double cof = det_recursive(minor, n - 1);
        det += (c % 2 == 0 ? 1.0 : -1.0) * a[c] * cof;
    }
    return det;
}

inline double det_abs_oracle(const hirdiff::Mat& a) {
    std::vector<double> v(a.data(), a.data() + a.rows() * a.cols());
    return std::abs(det_recursive(v, a.rows()));
}

// |det| of the k x k matrix formed by columns `cols` of the k x n matrix a.
inline double column_det(const hirdiff::Mat& a, const std::vector<std::size_t>& cols) {
    const std::size_t k = a.rows();
    std::vector<double> sub(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i * k + j] = a(i, cols[j]);
    return std::abs(det_recursive(sub, k));
}

// Exhaustive max |det| over all k-column subsets of a k x n matrix.
inline double best_subset_det(const hirdiff::Mat& a) {
    const std::size_t k = a.rows(), n = a.cols();
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    double best = 0.0;
    for (;;) {
        best = std::max(best, column_det(a, idx));
        // next combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

// Largest principal angle (radians) between the column spans of two B x k
// orthonormal-column matrices: acos of the smallest singular value of
// V1^T V2.
inline double largest_principal_angle(const hirdiff::Mat& v1, const hirdiff::Mat& v2) {
    const std::size_t k = v1.cols();
    hirdiff::Mat m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t b = 0; b < v1.rows(); ++b) s += v1(b, i) * v2(b, j);
            m(i, j) = s;
        }
    const std::vector<double> sv = singular_values(m);
    return std::acos(std::clamp(sv.back(), 0.0, 1.0));
}

// Gram-Schmidt orthonormal basis of the columns of a (full column rank).
inline hirdiff::Mat orthonormal_columns(const hirdiff::Mat& a) {
    hirdiff::Mat q = a;
    for (std::size_t j = 0; j < q.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < j; ++p) {
                double dot = 0.0;
                for (std::size_t i = 0; i < q.rows(); ++i) dot += q(i, p) * q(i, j);
                for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) -= dot * q(i, p);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) norm += q(i, j) * q(i, j);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) /= norm;
    }
    return q;
}

} // namespace oracles
