#include "hirdiff/metrics.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "hirdiff/errors.hpp"

namespace hirdiff {

namespace {

constexpr double kPsnrCap = 100.0;
constexpr double kMseFloor = 1e-10;

void require_same_shape(const Cube& a, const Cube& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch, " + std::to_string(a.h()) + "x" +
                         std::to_string(a.w()) + "x" + std::to_string(a.bands()) + " vs " +
                         std::to_string(b.h()) + "x" + std::to_string(b.w()) + "x" +
                         std::to_string(b.bands()));
}

} // namespace

double psnr(const Cube& reference, const Cube& test) {
    require_same_shape(reference, test, "psnr");
    const std::size_t hw = reference.h() * reference.w();
    double total = 0.0;
    for (std::size_t b = 0; b < reference.bands(); ++b) {
        const double* r = reference.plane(b);
        const double* t = test.plane(b);
        double mse = 0.0;
        for (std::size_t i = 0; i < hw; ++i) {
            const double d = r[i] - t[i];
            mse += d * d;
        }
        mse /= static_cast<double>(hw);
        const double db = mse < kMseFloor ? kPsnrCap : 10.0 * std::log10(1.0 / mse);
        total += std::min(db, kPsnrCap);
    }
    return total / static_cast<double>(reference.bands());
}

namespace {

constexpr std::size_t kWin = 11;
constexpr double kWinStd = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::vector<double> ssim_window() {
    std::vector<double> w(kWin * kWin);
    const double c = (kWin - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < kWin; ++i)
        for (std::size_t j = 0; j < kWin; ++j) {
            const double di = static_cast<double>(i) - c;
            const double dj = static_cast<double>(j) - c;
            w[i * kWin + j] = std::exp(-(di * di + dj * dj) / (2.0 * kWinStd * kWinStd));
            sum += w[i * kWin + j];
        }
    for (double& v : w) v /= sum;
    return w;
}

double ssim_band(const double* r, const double* t, std::size_t h, std::size_t w,
                 const std::vector<double>& win) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m + kWin <= h; ++m) {
        for (std::size_t n = 0; n + kWin <= w; ++n) {
            double mu_r = 0.0, mu_t = 0.0, rr = 0.0, tt = 0.0, rt = 0.0;
            for (std::size_t i = 0; i < kWin; ++i) {
                const double* rp = r + (m + i) * w + n;
                const double* tp = t + (m + i) * w + n;
                const double* wp = win.data() + i * kWin;
                for (std::size_t j = 0; j < kWin; ++j) {
                    mu_r += wp[j] * rp[j];
                    mu_t += wp[j] * tp[j];
                    rr += wp[j] * rp[j] * rp[j];
                    tt += wp[j] * tp[j] * tp[j];
                    rt += wp[j] * rp[j] * tp[j];
                }
            }
            const double var_r = rr - mu_r * mu_r;
            const double var_t = tt - mu_t * mu_t;
            const double cov = rt - mu_r * mu_t;
            const double num = (2.0 * mu_r * mu_t + kC1) * (2.0 * cov + kC2);
            const double den = (mu_r * mu_r + mu_t * mu_t + kC1) * (var_r + var_t + kC2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

} // namespace

double ssim(const Cube& reference, const Cube& test) {
    require_same_shape(reference, test, "ssim");
    if (reference.h() < kWin || reference.w() < kWin)
        throw ShapeError("ssim: image " + std::to_string(reference.h()) + "x" +
                         std::to_string(reference.w()) + " is smaller than the " +
                         std::to_string(kWin) + "x" + std::to_string(kWin) + " window");
    const std::vector<double> win = ssim_window();
    double total = 0.0;
    for (std::size_t b = 0; b < reference.bands(); ++b)
        total += ssim_band(reference.plane(b), test.plane(b), reference.h(), reference.w(), win);
    return total / static_cast<double>(reference.bands());
}

void write_score_csv(std::ostream& out, const ScoreRow& row, bool with_header) {
    if (with_header) out << "dataset,task,params,psnr,ssim,seconds\n";
    out << row.dataset << ',' << row.task << ',' << row.params << ',' << row.psnr << ','
        << row.ssim << ',' << row.seconds << '\n';
}

} // namespace hirdiff
