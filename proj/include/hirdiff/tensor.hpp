#pragma once

#include <cstddef>
#include <vector>

namespace hirdiff {

/// Dense H x W x B image cube. Storage is band-major planes, row-major
/// within a plane, so band b occupies the contiguous range
/// [b*h*w, (b+1)*h*w) and the mode-3 unfolding is the same buffer viewed
/// as a B x (H*W) row-major matrix. Arithmetic is double precision.
class Cube {
public:
    Cube() = default;
    Cube(std::size_t h, std::size_t w, std::size_t b);
    Cube(std::size_t h, std::size_t w, std::size_t b, std::vector<double> data);

    std::size_t h() const { return h_; }
    std::size_t w() const { return w_; }
    std::size_t bands() const { return b_; }
    std::size_t size() const { return data_.size(); }

    double operator()(std::size_t m, std::size_t n, std::size_t band) const {
        return data_[(band * h_ + m) * w_ + n];
    }
    double& operator()(std::size_t m, std::size_t n, std::size_t band) {
        return data_[(band * h_ + m) * w_ + n];
    }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }
    const double* plane(std::size_t band) const { return data_.data() + band * h_ * w_; }
    double* plane(std::size_t band) { return data_.data() + band * h_ * w_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const Cube& o) const { return h_ == o.h_ && w_ == o.w_ && b_ == o.b_; }

    /// True when every sample is finite.
    bool all_finite() const;

private:
    std::size_t h_ = 0, w_ = 0, b_ = 0;
    std::vector<double> data_;
};

/// Dense row-major matrix of doubles.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols);
    Mat(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    static Mat identity(std::size_t n);
    Mat transposed() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// a * b for row-major matrices; inner dimensions must agree.
Mat matmul(const Mat& a, const Mat& b);

/// Mode-3 product: out(m,n,j) = sum_i x(m,n,i) * e(j,i).
/// e has shape (out bands) x (x bands); mismatched inner dimension is a
/// shape error.
Cube mode3_multiply(const Cube& x, const Mat& e);

/// Mode-3 unfolding: row b of the result is band b of x scanned row-major.
/// The storage order makes this a straight copy of the underlying buffer;
/// fold3(unfold3(x), h, w) reproduces x bitwise.
Mat unfold3(const Cube& x);

/// Inverse of unfold3 for the given spatial shape.
Cube fold3(const Mat& m, std::size_t h, std::size_t w);

/// Frobenius norm over all samples.
double frobenius_norm(const Cube& x);
double frobenius_norm(const Mat& m);

/// Copies the listed bands (in order) into a new cube. Indices must be
/// in range and pairwise distinct.
Cube extract_bands(const Cube& x, const std::vector<std::size_t>& indices);

} // namespace hirdiff
