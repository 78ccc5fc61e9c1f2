// Command line front end: synthesis, degradation, restoration, band
// diagnostics, scoring, and schedule dumps over HIR1 cube files.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hirdiff/degradation.hpp"
#include "hirdiff/errors.hpp"
#include "hirdiff/external_denoiser.hpp"
#include "hirdiff/guidance.hpp"
#include "hirdiff/io.hpp"
#include "hirdiff/metrics.hpp"
#include "hirdiff/rng.hpp"
#include "hirdiff/sampler.hpp"
#include "hirdiff/schedule.hpp"
#include "hirdiff/subspace.hpp"
#include "hirdiff/synth.hpp"
#include "hirdiff/tensor.hpp"

namespace {

using namespace hirdiff;

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string stem(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

std::string basename(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

void print_config(const RunConfig& cfg) {
    std::cout << "resolved config:\n" << cfg.to_json() << std::flush;
}

void print_table(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    for (const auto& [k, v] : rows)
        std::cout << "  " << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
    std::cout << std::flush;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::string index_list(const std::vector<std::size_t>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s;
}

StrengthRule parse_strength(const std::string& text) {
    StrengthRule rule;
    std::string kind = text;
    if (const std::size_t star = text.find('*'); star != std::string::npos) {
        kind = text.substr(0, star);
        try {
            rule.scale = std::stod(text.substr(star + 1));
        } catch (const std::exception&) {
            throw ValueError("strength scale '" + text.substr(star + 1) + "' is not a number");
        }
    }
    if (kind == "constant")
        rule.kind = StrengthRule::Kind::Constant;
    else if (kind == "sqrt1m")
        rule.kind = StrengthRule::Kind::SqrtOneMinusAlphaBar;
    else
        throw ValueError("strength must be constant or sqrt1m (optionally *<scale>), got '" +
                         text + "'");
    return rule;
}

NoiseSchedule make_schedule(const RunConfig& cfg) {
    if (cfg.schedule == "exponential")
        return exponential_schedule(cfg.t_steps, cfg.sched_k, cfg.sched_floor);
    if (cfg.schedule == "linear") return linear_schedule(cfg.t_steps);
    return cosine_schedule(cfg.t_steps);
}

DegradationOp make_op(const RunConfig& cfg, const Cube& reference_dims) {
    if (cfg.task == "sr")
        return DegradationOp::blur_downsample(gaussian_kernel(9, static_cast<double>(cfg.scale)),
                                              cfg.scale, cfg.sigma255);
    if (cfg.task == "inpaint")
        return DegradationOp::masked(random_mask(reference_dims.h(), reference_dims.w(),
                                                 reference_dims.bands(), cfg.mask_rate,
                                                 substream(cfg.seed, "mask")),
                                     cfg.sigma255);
    return DegradationOp::identity(cfg.sigma255);
}

GuidanceConfig make_guidance(const RunConfig& cfg, bool lambda_given, bool beta_given) {
    GuidanceConfig g = cfg.task == "sr"        ? sr_preset()
                       : cfg.task == "inpaint" ? inpaint_preset()
                                               : denoise_preset();
    if (lambda_given) g.lambda = cfg.lambda;
    if (beta_given) g.beta = cfg.beta;
    g.tv_delta = cfg.tv_delta;
    g.strength = parse_strength(cfg.strength);
    return g;
}

std::shared_ptr<Denoiser> make_denoiser(const RunConfig& cfg, const Cube& y) {
    const std::string& spec = cfg.denoiser;
    if (spec.rfind("oracle:", 0) == 0) {
        const Cube clean = load_cube(spec.substr(7));
        const SubspaceEstimate est = estimate_coefficients(y, cfg.rank, cfg.rrqr_f);
        return std::make_shared<OracleDenoiser>(extract_bands(clean, est.band_indices));
    }
    if (spec.rfind("smooth:", 0) == 0) {
        double std_dev = 0.0;
        try {
            std_dev = std::stod(spec.substr(7));
        } catch (const std::exception&) {
            throw ValueError("denoiser '" + spec + "': smoothing std is not a number");
        }
        return std::make_shared<SmoothingDenoiser>(std_dev);
    }
    if (spec.rfind("exec:", 0) == 0) return std::make_shared<ExternalDenoiser>(spec.substr(5));
    throw ValueError("denoiser must be oracle:<clean-cube>, smooth:<std>, or exec:<command>, "
                     "got '" + spec + "'");
}

std::string params_string(const RunConfig& cfg) {
    std::ostringstream os;
    os << "T=" << cfg.t_steps << ";schedule=" << cfg.schedule << ";rank=" << cfg.rank
       << ";lambda=" << cfg.lambda << ";beta=" << cfg.beta << ";seed=" << cfg.seed;
    return os.str();
}

void write_loss_csv(const std::string& path, const NoiseSchedule& sched,
                    const std::vector<double>& loss) {
    std::ostringstream os;
    os << "step,t,alpha_bar,loss\n";
    for (std::size_t i = 0; i < loss.size(); ++i) {
        const std::size_t t = sched.steps() - i;
        os << i + 1 << ',' << t << ',' << std::setprecision(17) << sched.alpha_bar(t) << ','
           << loss[i] << '\n';
    }
    const std::string text = os.str();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
}

int run_synth(const RunConfig& cfg, std::size_t h, std::size_t w, std::size_t b,
              const std::string& output) {
    print_config(cfg);
    const SynthCube s = synth_cube(h, w, b, cfg.rank, cfg.seed);
    save_cube(output, s.x);
    save_cube(stem(output) + ".a.hir", s.a);
    save_matrix(stem(output) + ".e.hir", s.e);
    print_table({{"cube", output},
                 {"reduced image", stem(output) + ".a.hir"},
                 {"coefficients", stem(output) + ".e.hir"},
                 {"shape", std::to_string(h) + "x" + std::to_string(w) + "x" + std::to_string(b) +
                               " rank " + std::to_string(cfg.rank)}});
    return 0;
}

int run_degrade(const RunConfig& cfg, const std::string& input, const std::string& output) {
    print_config(cfg);
    const Cube x = load_cube(input);
    const DegradationOp op = make_op(cfg, x);
    const Cube y = add_gaussian_noise(op.apply(x), cfg.sigma255, substream(cfg.seed, "noise"));
    save_cube(output, y);
    save_config(output + ".json", cfg);
    std::vector<std::pair<std::string, std::string>> rows{
        {"degraded", output},
        {"provenance", output + ".json"},
        {"shape", std::to_string(y.h()) + "x" + std::to_string(y.w()) + "x" +
                      std::to_string(y.bands())}};
    if (cfg.task == "inpaint") {
        save_cube(stem(output) + ".mask.hir", op.mask());
        rows.push_back({"mask", stem(output) + ".mask.hir"});
    }
    print_table(rows);
    return 0;
}

int run_restore(RunConfig cfg, bool lambda_given, bool beta_given, const std::string& input,
                const std::string& output, const std::string& reference) {
    const GuidanceConfig guidance = make_guidance(cfg, lambda_given, beta_given);
    cfg.lambda = guidance.lambda;
    cfg.beta = guidance.beta;
    print_config(cfg);
    Timer timer;
    const Cube y = load_cube(input);
    const DegradationOp op = make_op(cfg, y);

    SamplerConfig sc{make_schedule(cfg), guidance,  cfg.rank,     cfg.rrqr_f, cfg.seed,
                     make_denoiser(cfg, y),         cfg.clamp_x0, -1.0,       3.0};
    const RestorationResult res = run_restoration(y, op, sc);

    save_cube(output, res.x0);
    save_cube(stem(output) + ".a0.hir", res.a0);
    save_matrix(stem(output) + ".e.hir", res.e);
    write_loss_csv(stem(output) + ".loss.csv", sc.schedule, res.per_step_loss);

    std::vector<std::pair<std::string, std::string>> rows{
        {"restored", output},
        {"reduced image", stem(output) + ".a0.hir"},
        {"coefficients", stem(output) + ".e.hir"},
        {"loss trace", stem(output) + ".loss.csv"},
        {"bands", index_list(res.band_indices)}};

    if (!reference.empty()) {
        const Cube ref = load_cube(reference);
        ScoreRow row{basename(input), cfg.task, params_string(cfg), psnr(ref, res.x0),
                     ssim(ref, res.x0), 0.0};
        std::ofstream csv(stem(output) + ".score.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot open '" + stem(output) + ".score.csv' for writing");
        write_score_csv(csv, row, true);
        rows.push_back({"psnr", fmt(row.psnr) + " dB"});
        rows.push_back({"ssim", fmt(row.ssim)});
        rows.push_back({"score", stem(output) + ".score.csv"});
        row.seconds = timer.seconds();
        rows.push_back({"seconds", fmt(row.seconds)});
        print_table(rows);
        write_score_csv(std::cout, row, true);
    } else {
        rows.push_back({"seconds", fmt(timer.seconds())});
        print_table(rows);
    }
    return 0;
}

int run_select_bands(const RunConfig& cfg, const std::string& input) {
    print_config(cfg);
    const Cube y = load_cube(input);
    const SubspaceEstimate est = estimate_coefficients(y, cfg.rank, cfg.rrqr_f);
    print_table({{"bands", index_list(est.band_indices)},
                 {"det_vs", fmt(est.det_vs)},
                 {"max|E|", fmt(est.max_abs_e)}});
    if (est.max_abs_e > kMaxAbsEWarning)
        std::cout << "warning: max|E| above " << kMaxAbsEWarning
                  << ", selection amplifies noise\n";
    return 0;
}

int run_estimate_coef(const RunConfig& cfg, const std::string& input, const std::string& output) {
    print_config(cfg);
    const Cube y = load_cube(input);
    const SubspaceEstimate est = estimate_coefficients(y, cfg.rank, cfg.rrqr_f);
    save_matrix(output, est.e);
    print_table({{"coefficients", output},
                 {"bands", index_list(est.band_indices)},
                 {"det_vs", fmt(est.det_vs)},
                 {"max|E|", fmt(est.max_abs_e)}});
    return 0;
}

int run_score(const RunConfig& cfg, const std::string& input, const std::string& reference,
              const std::string& output) {
    print_config(cfg);
    const Cube test = load_cube(input);
    const Cube ref = load_cube(reference);
    ScoreRow row{basename(input), cfg.task, params_string(cfg), psnr(ref, test),
                 ssim(ref, test), 0.0};
    if (!output.empty()) {
        std::ofstream csv(output, std::ios::trunc);
        if (!csv) throw IoError("cannot open '" + output + "' for writing");
        write_score_csv(csv, row, true);
    }
    print_table({{"psnr", fmt(row.psnr) + " dB"}, {"ssim", fmt(row.ssim)}});
    write_score_csv(std::cout, row, true);
    return 0;
}

int run_schedule_dump(const RunConfig& cfg, const std::string& output) {
    print_config(cfg);
    const NoiseSchedule sched = make_schedule(cfg);
    std::ostringstream os;
    os << "t,alpha_bar\n";
    for (std::size_t t = 1; t <= sched.steps(); ++t)
        os << t << ',' << std::setprecision(17) << sched.alpha_bar(t) << '\n';
    if (!output.empty()) {
        std::ofstream out(output, std::ios::trunc);
        if (!out) throw IoError("cannot open '" + output + "' for writing");
        out << os.str();
    }
    std::cout << os.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspectral image restoration toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    // A config file provides the base values; explicit flags override it.
    bool config_loaded = false;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = hirdiff::load_config(argv[i + 1]);
                config_loaded = true;
            } catch (const hirdiff::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }

    std::string input, output, reference, config_path;
    std::size_t height = 64, width = 64, bands = 16;

    auto add_common = [&](CLI::App* sub, bool with_sampler) {
        sub->add_option("--config", config_path, "JSON config file (flags override it)");
        sub->add_option("--task", cfg.task, "denoise | sr | inpaint");
        sub->add_option("--sigma255", cfg.sigma255, "noise std in [0,255] units");
        sub->add_option("--scale", cfg.scale, "super-resolution factor");
        sub->add_option("--mask-rate", cfg.mask_rate, "fraction of masked samples");
        sub->add_option("--rank", cfg.rank, "spectral subspace rank");
        sub->add_option("--rrqr-f", cfg.rrqr_f, "band selection dominance threshold (>= 1)");
        sub->add_option("--seed", cfg.seed, "seed for all stochastic stages");
        if (with_sampler) {
            sub->add_option("--steps", cfg.t_steps, "number of reverse steps T");
            sub->add_option("--schedule", cfg.schedule, "exponential | linear | cosine");
            sub->add_option("--sched-k", cfg.sched_k, "exponential decay rate");
            sub->add_option("--sched-floor", cfg.sched_floor, "exponential terminal alpha_bar");
            sub->add_option("--lambda", cfg.lambda, "fidelity weight (default: task preset)");
            sub->add_option("--beta", cfg.beta, "total variation weight");
            sub->add_option("--tv-delta", cfg.tv_delta, "Charbonnier smoothing width");
            sub->add_option("--strength", cfg.strength,
                            "guidance strength rule: constant | sqrt1m, optional *<scale>");
            sub->add_option("--denoiser", cfg.denoiser,
                            "oracle:<clean-cube> | smooth:<std> | exec:<command>");
            sub->add_flag("--clamp-x0", cfg.clamp_x0, "clamp per-step x0 estimates to [-1,3]");
        }
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a rank-k cube with its true factors");
    synth->add_option("--height", height, "spatial height")->capture_default_str();
    synth->add_option("--width", width, "spatial width")->capture_default_str();
    synth->add_option("--bands", bands, "spectral band count")->capture_default_str();
    synth->add_option("--output", output, "output cube path")->required();
    add_common(synth, false);

    CLI::App* degrade = app.add_subcommand("degrade", "apply a degradation operator plus noise");
    degrade->add_option("--input", input, "clean cube path")->required();
    degrade->add_option("--output", output, "degraded cube path")->required();
    add_common(degrade, false);

    CLI::App* restore = app.add_subcommand("restore", "run the guided diffusion restoration");
    restore->add_option("--input", input, "degraded cube path")->required();
    restore->add_option("--output", output, "restored cube path")->required();
    restore->add_option("--reference", reference, "clean cube for scoring");
    add_common(restore, true);

    CLI::App* select = app.add_subcommand("select-bands", "print the band selection diagnostics");
    select->add_option("--input", input, "cube path")->required();
    add_common(select, false);

    CLI::App* estimate = app.add_subcommand("estimate-coef", "estimate the coefficient matrix");
    estimate->add_option("--input", input, "cube path")->required();
    estimate->add_option("--output", output, "coefficient matrix path")->required();
    add_common(estimate, false);

    CLI::App* score = app.add_subcommand("score", "PSNR/SSIM between a cube and a reference");
    score->add_option("--input", input, "cube under test")->required();
    score->add_option("--reference", reference, "reference cube")->required();
    score->add_option("--output", output, "optional CSV output path");
    add_common(score, false);

    CLI::App* sched = app.add_subcommand("schedule-dump", "emit t,alpha_bar rows for a schedule");
    sched->add_option("--output", output, "optional CSV output path");
    add_common(sched, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(cfg, height, width, bands, output);
        if (degrade->parsed()) return run_degrade(cfg, input, output);
        if (restore->parsed())
            return run_restore(cfg, restore->count("--lambda") > 0 || config_loaded,
                               restore->count("--beta") > 0 || config_loaded, input, output,
                               reference);
        if (select->parsed()) return run_select_bands(cfg, input);
        if (estimate->parsed()) return run_estimate_coef(cfg, input, output);
        if (score->parsed()) return run_score(cfg, input, reference, output);
        if (sched->parsed()) return run_schedule_dump(cfg, output);
    } catch (const hirdiff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
