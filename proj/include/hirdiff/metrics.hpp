#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "hirdiff/tensor.hpp"

namespace hirdiff {

// Mean over bands of 10*log10(1 / MSE_band) for signals on a [0, 1] scale.
// A numerically exact band (MSE below 1e-10) contributes the 100 dB cap
// instead of an unbounded value.
double psnr(const Cube& reference, const Cube& test);

// Mean over bands of the mean local structural similarity index, computed
// with an 11x11 Gaussian window (std 1.5) over valid (fully interior) window
// positions, with the usual stabilizers C1 = (0.01)^2, C2 = (0.03)^2 for a
// dynamic range of 1. Throws ShapeError if the spatial extent is smaller
// than the window.
double ssim(const Cube& reference, const Cube& test);

struct ScoreRow {
    std::string dataset;
    std::string task;
    std::string params;
    double psnr = 0.0;
    double ssim = 0.0;
    double seconds = 0.0;
};

// Writes "dataset,task,params,psnr,ssim,seconds" with a header the first
// time the stream is used (caller tracks that via `with_header`).
void write_score_csv(std::ostream& out, const ScoreRow& row, bool with_header);

} // namespace hirdiff
