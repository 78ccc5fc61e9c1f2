#pragma once

#include <cstddef>
#include <vector>

#include "hirdiff/linalg.hpp"
#include "hirdiff/tensor.hpp"

namespace hirdiff {

/// Spectral subspace estimate for a B-band cube: the coefficient matrix e
/// maps the k selected band planes back to the full spectrum,
/// y ~ extract_bands(y, band_indices) x_3 e. Rows of e at band_indices are
/// exactly the k x k identity rows. det_vs and max_abs_e are conditioning
/// diagnostics; selections with max_abs_e above 5 amplify noise and should
/// be treated as suspect.
struct SubspaceEstimate {
    Mat e;                                 // B x k
    std::vector<std::size_t> band_indices; // k ascending indices
    Mat v;                                 // B x k, orthonormal columns
    double det_vs = 0.0;                   // |det| of v's selected rows, in (0, 1]
    double max_abs_e = 0.0;
};

/// Threshold on max_abs_e above which a selection is flagged as
/// noise-amplifying.
inline constexpr double kMaxAbsEWarning = 5.0;

/// Estimates the coefficient matrix from the observed cube: v spans the
/// rank-k spectral subspace of the mode-3 unfolding (truncated SVD of its
/// transpose), band_indices come from rrqr_select on v^T with threshold f,
/// and e = v * vs^{-1} where vs stacks the selected rows of v.
SubspaceEstimate estimate_coefficients(const Cube& y, std::size_t k, double f);

/// Least-squares alternative: given the bands, fits e by minimizing
/// ||y - extract_bands(y, band_indices) x_3 e||_F via normal equations.
/// Unlike the SVD route this fits the noise in the selected bands too.
Mat estimate_coefficients_least_squares(const Cube& y,
                                        const std::vector<std::size_t>& band_indices);

/// mode3_multiply(a, e), optionally clamping the result to [lo, hi].
Cube reconstruct(const Cube& a, const Mat& e);
Cube reconstruct_clamped(const Cube& a, const Mat& e, double lo, double hi);

} // namespace hirdiff
