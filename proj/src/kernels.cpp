#include "hirdiff/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hirdiff::kernels {

namespace {

constexpr std::size_t kBlock = 4096; // reduction block, fixed so partial order never depends on thread count

std::atomic<int> g_cap{0};

int default_cap() {
    if (const char* env = std::getenv("HIRDIFF_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<int>(n);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline std::size_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return static_cast<std::size_t>(i);
}

inline double block_sumsq(const double* p, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i] * p[i];
    return s;
}

inline double block_dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

inline void conv_plane(double* out, const double* in, std::size_t h, std::size_t w,
                       const double* kern, std::size_t ks) {
    const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(ks) / 2;
    for (std::size_t m = 0; m < h; ++m) {
        for (std::size_t n = 0; n < w; ++n) {
            double acc = 0.0;
            for (std::size_t u = 0; u < ks; ++u) {
                const std::size_t r = reflect(static_cast<std::ptrdiff_t>(m) + static_cast<std::ptrdiff_t>(u) - c,
                                              static_cast<std::ptrdiff_t>(h));
                for (std::size_t v = 0; v < ks; ++v) {
                    const std::size_t q = reflect(static_cast<std::ptrdiff_t>(n) + static_cast<std::ptrdiff_t>(v) - c,
                                                  static_cast<std::ptrdiff_t>(w));
                    acc += kern[u * ks + v] * in[r * w + q];
                }
            }
            out[m * w + n] = acc;
        }
    }
}

// Scatter transpose of conv_plane; out must be zero-filled by the caller.
inline void conv_adjoint_plane(double* out, const double* in, std::size_t h, std::size_t w,
                               const double* kern, std::size_t ks) {
    const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(ks) / 2;
    for (std::size_t m = 0; m < h; ++m) {
        for (std::size_t n = 0; n < w; ++n) {
            const double y = in[m * w + n];
            for (std::size_t u = 0; u < ks; ++u) {
                const std::size_t r = reflect(static_cast<std::ptrdiff_t>(m) + static_cast<std::ptrdiff_t>(u) - c,
                                              static_cast<std::ptrdiff_t>(h));
                for (std::size_t v = 0; v < ks; ++v) {
                    const std::size_t q = reflect(static_cast<std::ptrdiff_t>(n) + static_cast<std::ptrdiff_t>(v) - c,
                                                  static_cast<std::ptrdiff_t>(w));
                    out[r * w + q] += kern[u * ks + v] * y;
                }
            }
        }
    }
}

inline double tv_plane(const double* x, std::size_t h, std::size_t w, double delta) {
    double s = 0.0;
    for (std::size_t m = 0; m < h; ++m) {
        for (std::size_t n = 0; n < w; ++n) {
            if (m + 1 < h) {
                const double d = x[(m + 1) * w + n] - x[m * w + n];
                s += std::sqrt(d * d + delta * delta) - delta;
            }
            if (n + 1 < w) {
                const double d = x[m * w + n + 1] - x[m * w + n];
                s += std::sqrt(d * d + delta * delta) - delta;
            }
        }
    }
    return s;
}

inline void tv_grad_plane(double* g, const double* x, std::size_t h, std::size_t w, double delta) {
    for (std::size_t m = 0; m < h; ++m) {
        for (std::size_t n = 0; n < w; ++n) {
            double acc = 0.0;
            const double v = x[m * w + n];
            if (m + 1 < h) {
                const double d = x[(m + 1) * w + n] - v;
                acc -= d / std::sqrt(d * d + delta * delta);
            }
            if (m > 0) {
                const double d = v - x[(m - 1) * w + n];
                acc += d / std::sqrt(d * d + delta * delta);
            }
            if (n + 1 < w) {
                const double d = x[m * w + n + 1] - v;
                acc -= d / std::sqrt(d * d + delta * delta);
            }
            if (n > 0) {
                const double d = v - x[m * w + n - 1];
                acc += d / std::sqrt(d * d + delta * delta);
            }
            g[m * w + n] = acc;
        }
    }
}

} // namespace

int thread_cap() {
    const int c = g_cap.load(std::memory_order_relaxed);
    return c > 0 ? c : default_cap();
}

void set_thread_cap(int n) {
    g_cap.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

void mode3_serial(double* out, const double* x, const double* e,
                  std::size_t hw, std::size_t bi, std::size_t bo) {
    for (std::size_t b = 0; b < bo; ++b) {
        double* plane = out + b * hw;
        const double* row = e + b * bi;
        for (std::size_t p = 0; p < hw; ++p) {
            double acc = 0.0;
            for (std::size_t i = 0; i < bi; ++i) acc += row[i] * x[i * hw + p];
            plane[p] = acc;
        }
    }
}

void mode3_parallel(double* out, const double* x, const double* e,
                    std::size_t hw, std::size_t bi, std::size_t bo) {
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(bo * hw);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t b = static_cast<std::size_t>(idx) / hw;
        const std::size_t p = static_cast<std::size_t>(idx) % hw;
        const double* row = e + b * bi;
        double acc = 0.0;
        for (std::size_t i = 0; i < bi; ++i) acc += row[i] * x[i * hw + p];
        out[idx] = acc;
    }
}

void mode3(double* out, const double* x, const double* e,
           std::size_t hw, std::size_t bi, std::size_t bo) {
    if (thread_cap() > 1)
        mode3_parallel(out, x, e, hw, bi, bo);
    else
        mode3_serial(out, x, e, hw, bi, bo);
}

double sumsq_serial(const double* p, std::size_t n) {
    double total = 0.0;
    for (std::size_t off = 0; off < n; off += kBlock)
        total += block_sumsq(p + off, std::min(kBlock, n - off));
    return total;
}

double sumsq_parallel(const double* p, std::size_t n) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(nblocks); ++blk) {
        const std::size_t off = static_cast<std::size_t>(blk) * kBlock;
        partial[blk] = block_sumsq(p + off, std::min(kBlock, n - off));
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double sumsq(const double* p, std::size_t n) {
    return thread_cap() > 1 ? sumsq_parallel(p, n) : sumsq_serial(p, n);
}

double dot_serial(const double* a, const double* b, std::size_t n) {
    double total = 0.0;
    for (std::size_t off = 0; off < n; off += kBlock)
        total += block_dot(a + off, b + off, std::min(kBlock, n - off));
    return total;
}

double dot_parallel(const double* a, const double* b, std::size_t n) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(nblocks); ++blk) {
        const std::size_t off = static_cast<std::size_t>(blk) * kBlock;
        partial[blk] = block_dot(a + off, b + off, std::min(kBlock, n - off));
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double dot(const double* a, const double* b, std::size_t n) {
    return thread_cap() > 1 ? dot_parallel(a, b, n) : dot_serial(a, b, n);
}

void axpby_serial(double* out, double alpha, const double* x,
                  double beta, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void axpby_parallel(double* out, double alpha, const double* x,
                    double beta, const double* y, std::size_t n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[i] = alpha * x[i] + beta * y[i];
}

void axpby(double* out, double alpha, const double* x,
           double beta, const double* y, std::size_t n) {
    if (thread_cap() > 1)
        axpby_parallel(out, alpha, x, beta, y, n);
    else
        axpby_serial(out, alpha, x, beta, y, n);
}

void conv_cube_serial(double* out, const double* in, std::size_t h, std::size_t w,
                      std::size_t b, const double* kern, std::size_t ks) {
    for (std::size_t i = 0; i < b; ++i)
        conv_plane(out + i * h * w, in + i * h * w, h, w, kern, ks);
}

void conv_cube_parallel(double* out, const double* in, std::size_t h, std::size_t w,
                        std::size_t b, const double* kern, std::size_t ks) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(b); ++i)
        conv_plane(out + i * h * w, in + i * h * w, h, w, kern, ks);
}

void conv_cube(double* out, const double* in, std::size_t h, std::size_t w,
               std::size_t b, const double* kern, std::size_t ks) {
    if (thread_cap() > 1 && b > 1)
        conv_cube_parallel(out, in, h, w, b, kern, ks);
    else
        conv_cube_serial(out, in, h, w, b, kern, ks);
}

void conv_adjoint_cube_serial(double* out, const double* in, std::size_t h, std::size_t w,
                              std::size_t b, const double* kern, std::size_t ks) {
    for (std::size_t i = 0; i < b * h * w; ++i) out[i] = 0.0;
    for (std::size_t i = 0; i < b; ++i)
        conv_adjoint_plane(out + i * h * w, in + i * h * w, h, w, kern, ks);
}

void conv_adjoint_cube_parallel(double* out, const double* in, std::size_t h, std::size_t w,
                                std::size_t b, const double* kern, std::size_t ks) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(b); ++i) {
        double* plane = out + i * h * w;
        for (std::size_t p = 0; p < h * w; ++p) plane[p] = 0.0;
        conv_adjoint_plane(plane, in + i * h * w, h, w, kern, ks);
    }
}

void conv_adjoint_cube(double* out, const double* in, std::size_t h, std::size_t w,
                       std::size_t b, const double* kern, std::size_t ks) {
    if (thread_cap() > 1 && b > 1)
        conv_adjoint_cube_parallel(out, in, h, w, b, kern, ks);
    else
        conv_adjoint_cube_serial(out, in, h, w, b, kern, ks);
}

void decimate_cube(double* out, const double* in, std::size_t h, std::size_t w,
                   std::size_t b, std::size_t s) {
    const std::size_t oh = h / s, ow = w / s;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(b * oh * ow); ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx);
        const std::size_t band = i / (oh * ow);
        const std::size_t m = (i / ow) % oh;
        const std::size_t n = i % ow;
        out[i] = in[(band * h + m * s) * w + n * s];
    }
}

void upsample_zero_cube(double* out, const double* in, std::size_t h, std::size_t w,
                        std::size_t b, std::size_t s) {
    const std::size_t oh = h / s, ow = w / s;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(b * h * w); ++idx)
        out[idx] = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(b * oh * ow); ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx);
        const std::size_t band = i / (oh * ow);
        const std::size_t m = (i / ow) % oh;
        const std::size_t n = i % ow;
        out[(band * h + m * s) * w + n * s] = in[i];
    }
}

double tv_value_serial(const double* x, std::size_t h, std::size_t w,
                       std::size_t b, double delta) {
    double total = 0.0;
    for (std::size_t i = 0; i < b; ++i) total += tv_plane(x + i * h * w, h, w, delta);
    return total;
}

double tv_value_parallel(const double* x, std::size_t h, std::size_t w,
                         std::size_t b, double delta) {
    std::vector<double> partial(b, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(b); ++i)
        partial[i] = tv_plane(x + i * h * w, h, w, delta);
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double tv_value(const double* x, std::size_t h, std::size_t w,
                std::size_t b, double delta) {
    return (thread_cap() > 1 && b > 1) ? tv_value_parallel(x, h, w, b, delta)
                                       : tv_value_serial(x, h, w, b, delta);
}

void tv_grad_serial(double* g, const double* x, std::size_t h, std::size_t w,
                    std::size_t b, double delta) {
    for (std::size_t i = 0; i < b; ++i)
        tv_grad_plane(g + i * h * w, x + i * h * w, h, w, delta);
}

void tv_grad_parallel(double* g, const double* x, std::size_t h, std::size_t w,
                      std::size_t b, double delta) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(b); ++i)
        tv_grad_plane(g + i * h * w, x + i * h * w, h, w, delta);
}

void tv_grad(double* g, const double* x, std::size_t h, std::size_t w,
             std::size_t b, double delta) {
    if (thread_cap() > 1 && b > 1)
        tv_grad_parallel(g, x, h, w, b, delta);
    else
        tv_grad_serial(g, x, h, w, b, delta);
}

} // namespace hirdiff::kernels
