#pragma once

#include <cstdint>
#include <string>

#include "hirdiff/tensor.hpp"

namespace hirdiff {

// On-disk cube format: magic "HIR1", then u32 little-endian H, W, B, then
// H*W*B little-endian 32-bit floats in band-major plane order (the in-memory
// layout). Values are stored at 32-bit precision; memory stays 64-bit.
// Saving the same cube twice yields byte-identical files.
void save_cube(const std::string& path, const Cube& x);
Cube load_cube(const std::string& path);

// Matrices reuse the cube container with B := rows, H := 1, W := cols, so a
// band plane is one matrix row.
void save_matrix(const std::string& path, const Mat& m);
Mat load_matrix(const std::string& path);

// A full run description as JSON. Unknown keys anywhere in the document are
// rejected; loading materializes every default so a re-saved config is
// self-contained.
struct RunConfig {
    std::string task = "denoise"; // denoise | sr | inpaint
    double sigma255 = 0.0;
    std::size_t scale = 2;      // sr only
    double mask_rate = 0.9;     // inpaint only
    std::size_t rank = 3;
    double rrqr_f = 1.05;
    std::size_t t_steps = 20;
    std::string schedule = "exponential"; // exponential | linear | cosine
    double sched_k = 6.0;
    double sched_floor = 1e-4;
    double lambda = 1.0;
    double beta = 0.05;
    double tv_delta = 1e-3;
    std::string strength = "sqrt1m"; // constant | sqrt1m, optionally "*<scale>"
    std::uint64_t seed = 0;
    std::string denoiser = "smooth:1.0"; // oracle:<path> | smooth:<std> | exec:<command>
    bool clamp_x0 = false;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
};

void save_config(const std::string& path, const RunConfig& cfg);
RunConfig load_config(const std::string& path);

} // namespace hirdiff
