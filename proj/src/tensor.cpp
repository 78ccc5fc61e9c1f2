#include "hirdiff/tensor.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <unordered_set>

#include "hirdiff/errors.hpp"
#include "hirdiff/kernels.hpp"

namespace hirdiff {

Cube::Cube(std::size_t h, std::size_t w, std::size_t b)
    : h_(h), w_(w), b_(b), data_(h * w * b, 0.0) {}

Cube::Cube(std::size_t h, std::size_t w, std::size_t b, std::vector<double> data)
    : h_(h), w_(w), b_(b), data_(std::move(data)) {
    if (data_.size() != h * w * b)
        throw ShapeError("Cube: payload has " + std::to_string(data_.size()) +
                         " samples, shape wants " + std::to_string(h * w * b));
}

bool Cube::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Mat::Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw ShapeError("Mat: payload has " + std::to_string(data_.size()) +
                         " entries, shape wants " + std::to_string(rows * cols));
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
    Mat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Cube mode3_multiply(const Cube& x, const Mat& e) {
    if (e.cols() != x.bands())
        throw ShapeError("mode3_multiply: e has " + std::to_string(e.cols()) +
                         " columns, cube has " + std::to_string(x.bands()) + " bands");
    Cube out(x.h(), x.w(), e.rows());
    kernels::mode3(out.data(), x.data(), e.data(), x.h() * x.w(), x.bands(), e.rows());
    return out;
}

Mat unfold3(const Cube& x) {
    // Layout-compatible: one memcpy.
    Mat m(x.bands(), x.h() * x.w());
    std::memcpy(m.data(), x.data(), x.size() * sizeof(double));
    return m;
}

Cube fold3(const Mat& m, std::size_t h, std::size_t w) {
    if (m.cols() != h * w)
        throw ShapeError("fold3: matrix has " + std::to_string(m.cols()) +
                         " columns, spatial shape wants " + std::to_string(h * w));
    Cube x(h, w, m.rows());
    std::memcpy(x.data(), m.data(), m.size() * sizeof(double));
    return x;
}

double frobenius_norm(const Cube& x) {
    return std::sqrt(kernels::sumsq(x.data(), x.size()));
}

double frobenius_norm(const Mat& m) {
    return std::sqrt(kernels::sumsq(m.data(), m.size()));
}

Cube extract_bands(const Cube& x, const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw ValueError("extract_bands: empty index list");
    std::unordered_set<std::size_t> seen;
    for (std::size_t idx : indices) {
        if (idx >= x.bands())
            throw ValueError("extract_bands: index " + std::to_string(idx) + " out of range [0, " +
                             std::to_string(x.bands()) + ")");
        if (!seen.insert(idx).second)
            throw ValueError("extract_bands: duplicate index " + std::to_string(idx));
    }
    Cube out(x.h(), x.w(), indices.size());
    const std::size_t hw = x.h() * x.w();
    for (std::size_t k = 0; k < indices.size(); ++k)
        std::memcpy(out.plane(k), x.plane(indices[k]), hw * sizeof(double));
    return out;
}

} // namespace hirdiff
