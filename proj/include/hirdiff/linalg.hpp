#pragma once

#include <cstddef>
#include <vector>

#include "hirdiff/tensor.hpp"

namespace hirdiff {

/// Thin singular value decomposition m = u * diag(s) * v^T truncated to the
/// requested rank. u and v have orthonormal columns; s is non-increasing and
/// non-negative.
struct ThinSvd {
    Mat u;                 // rows(m) x k
    std::vector<double> s; // k values
    Mat v;                 // cols(m) x k
};

/// Result of rank-revealing column selection.
struct RrqrResult {
    std::vector<std::size_t> selected; // k column indices, ascending
    double det_abs = 0.0;              // |det| of the selected k x k block
    std::size_t interchange_count = 0;
    std::vector<double> det_history;   // |det| after initial QR and each interchange
};

/// Best rank-k approximation factors of m (Eckart-Young optimal). Column
/// signs are fixed so each v column's largest-magnitude entry is positive,
/// with u flipped to match, making the decomposition deterministic.
/// k must satisfy 1 <= k <= min(rows, cols).
ThinSvd truncated_svd(const Mat& m, std::size_t k);

/// Strong rank-revealing column selection after Gu-Eisenstat: starting from
/// a QR factorization of m, greedily interchanges a selected column with a
/// rejected one while some interchange grows |det(R11)|, stopping once no
/// swap gains more than 1 + 1e-12 (the slack absorbs rounding noise and
/// prevents cycling). Returns the selected k = rows(m) columns. For the
/// wide full-row-rank inputs used here R22 is empty, so the interchange
/// gain for pair (i, j) is |(R11^{-1} R12)_{i,j}|; at exit no entry of that
/// matrix exceeds 1 + 1e-12, hence none exceeds any accepted f >= 1, so f
/// names the dominance level the result certifies. |det| strictly increases
/// with every interchange. Requires rows <= cols, full row rank, f >= 1.
RrqrResult rrqr_select(const Mat& m, double f);

/// |det| of a square matrix via partially pivoted LU.
double det_abs(const Mat& m);

/// Solves a * x = b for square a (b may have many columns). Rejects a as
/// numerically singular when |det(a)| < 1e-12 times the product of row
/// norms; the error message carries that condition estimate.
Mat solve_square(const Mat& a, const Mat& b);

} // namespace hirdiff
