#pragma once

#include <cstddef>

namespace hirdiff::kernels {

/// Thread cap for the parallel kernels. Resolution order: explicit
/// set_thread_cap, then the HIRDIFF_THREADS environment variable, then the
/// OpenMP default. Always >= 1.
int thread_cap();

/// Overrides the cap; 0 restores the environment/OpenMP default.
void set_thread_cap(int n);

// Every kernel below has a serial reference and an OpenMP variant. The
// parallel variants assign each output element to exactly one writer or
// reduce over fixed-size blocks combined in index order, so results are
// bit-identical to the serial reference for any thread count. The unsuffixed
// name dispatches on thread_cap().

/// Mode-3 contraction over band-major planes:
/// out plane b = sum_i e[b*bi + i] * x plane i; planes are hw doubles.
void mode3_serial(double* out, const double* x, const double* e,
                  std::size_t hw, std::size_t bi, std::size_t bo);
void mode3_parallel(double* out, const double* x, const double* e,
                    std::size_t hw, std::size_t bi, std::size_t bo);
void mode3(double* out, const double* x, const double* e,
           std::size_t hw, std::size_t bi, std::size_t bo);

/// Sum of squares reduced over fixed 4096-element blocks.
double sumsq_serial(const double* p, std::size_t n);
double sumsq_parallel(const double* p, std::size_t n);
double sumsq(const double* p, std::size_t n);

/// Dot product with the same fixed-block reduction.
double dot_serial(const double* a, const double* b, std::size_t n);
double dot_parallel(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

/// out = alpha*x + beta*y, elementwise.
void axpby_serial(double* out, double alpha, const double* x,
                  double beta, const double* y, std::size_t n);
void axpby_parallel(double* out, double alpha, const double* x,
                    double beta, const double* y, std::size_t n);
void axpby(double* out, double alpha, const double* x,
           double beta, const double* y, std::size_t n);

/// Per-band 2-D correlation with an odd square kernel and symmetric
/// reflection at the borders (index -1 maps to 0, index h maps to h-1).
void conv_cube_serial(double* out, const double* in, std::size_t h, std::size_t w,
                      std::size_t b, const double* kern, std::size_t ks);
void conv_cube_parallel(double* out, const double* in, std::size_t h, std::size_t w,
                        std::size_t b, const double* kern, std::size_t ks);
void conv_cube(double* out, const double* in, std::size_t h, std::size_t w,
               std::size_t b, const double* kern, std::size_t ks);

/// Exact transpose of conv_cube (scatter with the same reflection map).
void conv_adjoint_cube_serial(double* out, const double* in, std::size_t h, std::size_t w,
                              std::size_t b, const double* kern, std::size_t ks);
void conv_adjoint_cube_parallel(double* out, const double* in, std::size_t h, std::size_t w,
                                std::size_t b, const double* kern, std::size_t ks);
void conv_adjoint_cube(double* out, const double* in, std::size_t h, std::size_t w,
                       std::size_t b, const double* kern, std::size_t ks);

/// Stride decimation per band: out is (h/s) x (w/s) x b.
void decimate_cube(double* out, const double* in, std::size_t h, std::size_t w,
                   std::size_t b, std::size_t s);

/// Zero-insertion upsampling per band (adjoint of decimate_cube).
void upsample_zero_cube(double* out, const double* in, std::size_t h, std::size_t w,
                        std::size_t b, std::size_t s);

/// Anisotropic Charbonnier total variation over spatial forward differences,
/// summed across bands: sum sqrt(d^2 + delta^2) - delta.
double tv_value_serial(const double* x, std::size_t h, std::size_t w,
                       std::size_t b, double delta);
double tv_value_parallel(const double* x, std::size_t h, std::size_t w,
                         std::size_t b, double delta);
double tv_value(const double* x, std::size_t h, std::size_t w,
                std::size_t b, double delta);

/// Gradient of tv_value with respect to x (gather form, one writer per cell).
void tv_grad_serial(double* g, const double* x, std::size_t h, std::size_t w,
                    std::size_t b, double delta);
void tv_grad_parallel(double* g, const double* x, std::size_t h, std::size_t w,
                      std::size_t b, double delta);
void tv_grad(double* g, const double* x, std::size_t h, std::size_t w,
             std::size_t b, double delta);

} // namespace hirdiff::kernels
