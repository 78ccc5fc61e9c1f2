#include "hirdiff/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include <json.hpp>

#include "hirdiff/errors.hpp"
#include "wire.hpp"

namespace hirdiff {

namespace {

constexpr char kMagic[4] = {'H', 'I', 'R', '1'};

void write_file(const std::string& path, const unsigned char* p, std::size_t n) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out) throw IoError("short write to '" + path + "'");
}

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    const std::streamsize n = in.tellg();
    in.seekg(0);
    std::vector<unsigned char> bytes(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(bytes.data()), n);
    if (!in) throw IoError("short read from '" + path + "'");
    return bytes;
}

std::vector<unsigned char> encode(std::size_t h, std::size_t w, std::size_t b, const double* v) {
    constexpr std::size_t kMaxDim = std::numeric_limits<std::uint32_t>::max();
    if (h > kMaxDim || w > kMaxDim || b > kMaxDim)
        throw IoError("dimension overflow: " + std::to_string(h) + "x" + std::to_string(w) + "x" +
                      std::to_string(b) + " exceeds the 32-bit header fields");
    const std::size_t n = h * w * b;
    std::vector<unsigned char> bytes(16 + 4 * n);
    std::memcpy(bytes.data(), kMagic, 4);
    wire::put_u32(bytes.data() + 4, static_cast<std::uint32_t>(h));
    wire::put_u32(bytes.data() + 8, static_cast<std::uint32_t>(w));
    wire::put_u32(bytes.data() + 12, static_cast<std::uint32_t>(b));
    for (std::size_t i = 0; i < n; ++i)
        wire::put_f32(bytes.data() + 16 + 4 * i, static_cast<float>(v[i]));
    return bytes;
}

struct Decoded {
    std::size_t h, w, b;
    std::vector<double> values;
};

Decoded decode(const std::string& path, const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 16)
        throw IoError("'" + path + "': file too small for a header (" +
                      std::to_string(bytes.size()) + " bytes, need 16)");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw IoError("'" + path + "': bad magic '" +
                      std::string(reinterpret_cast<const char*>(bytes.data()), 4) +
                      "', expected 'HIR1'");
    Decoded d;
    d.h = wire::get_u32(bytes.data() + 4);
    d.w = wire::get_u32(bytes.data() + 8);
    d.b = wire::get_u32(bytes.data() + 12);
    const std::size_t n = d.h * d.w * d.b;
    const std::size_t expected = 16 + 4 * n;
    if (bytes.size() != expected)
        throw IoError("'" + path + "': truncated or oversized payload, expected " +
                      std::to_string(expected) + " bytes for " + std::to_string(d.h) + "x" +
                      std::to_string(d.w) + "x" + std::to_string(d.b) + ", got " +
                      std::to_string(bytes.size()));
    d.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        d.values[i] = static_cast<double>(wire::get_f32(bytes.data() + 16 + 4 * i));
    return d;
}

} // namespace

void save_cube(const std::string& path, const Cube& x) {
    const auto bytes = encode(x.h(), x.w(), x.bands(), x.data());
    write_file(path, bytes.data(), bytes.size());
}

Cube load_cube(const std::string& path) {
    const Decoded d = decode(path, read_file(path));
    Cube x(d.h, d.w, d.b);
    std::copy(d.values.begin(), d.values.end(), x.data());
    return x;
}

void save_matrix(const std::string& path, const Mat& m) {
    const auto bytes = encode(1, m.cols(), m.rows(), m.data());
    write_file(path, bytes.data(), bytes.size());
}

Mat load_matrix(const std::string& path) {
    const Decoded d = decode(path, read_file(path));
    Mat m(d.b, d.h * d.w);
    std::copy(d.values.begin(), d.values.end(), m.data());
    return m;
}

namespace {

using nlohmann::json;

template <typename T>
void take(json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        out = it->get<T>();
        j.erase(it);
    }
}

} // namespace

std::string RunConfig::to_json() const {
    json j;
    j["task"] = task;
    j["sigma255"] = sigma255;
    j["scale"] = scale;
    j["mask_rate"] = mask_rate;
    j["rank"] = rank;
    j["rrqr_f"] = rrqr_f;
    j["t_steps"] = t_steps;
    j["schedule"] = schedule;
    j["sched_k"] = sched_k;
    j["sched_floor"] = sched_floor;
    j["lambda"] = lambda;
    j["beta"] = beta;
    j["tv_delta"] = tv_delta;
    j["strength"] = strength;
    j["seed"] = seed;
    j["denoiser"] = denoiser;
    j["clamp_x0"] = clamp_x0;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw IoError("config must be a JSON object");
    RunConfig cfg;
    try {
        take(j, "task", cfg.task);
        take(j, "sigma255", cfg.sigma255);
        take(j, "scale", cfg.scale);
        take(j, "mask_rate", cfg.mask_rate);
        take(j, "rank", cfg.rank);
        take(j, "rrqr_f", cfg.rrqr_f);
        take(j, "t_steps", cfg.t_steps);
        take(j, "schedule", cfg.schedule);
        take(j, "sched_k", cfg.sched_k);
        take(j, "sched_floor", cfg.sched_floor);
        take(j, "lambda", cfg.lambda);
        take(j, "beta", cfg.beta);
        take(j, "tv_delta", cfg.tv_delta);
        take(j, "strength", cfg.strength);
        take(j, "seed", cfg.seed);
        take(j, "denoiser", cfg.denoiser);
        take(j, "clamp_x0", cfg.clamp_x0);
    } catch (const json::exception& e) {
        throw IoError(std::string("config field error: ") + e.what());
    }
    if (!j.empty()) {
        std::string keys;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!keys.empty()) keys += ", ";
            keys += "'" + it.key() + "'";
        }
        throw IoError("config has unknown keys: " + keys);
    }
    if (cfg.task != "denoise" && cfg.task != "sr" && cfg.task != "inpaint")
        throw IoError("config task must be denoise, sr, or inpaint, got '" + cfg.task + "'");
    if (cfg.schedule != "exponential" && cfg.schedule != "linear" && cfg.schedule != "cosine")
        throw IoError("config schedule must be exponential, linear, or cosine, got '" +
                      cfg.schedule + "'");
    return cfg;
}

void save_config(const std::string& path, const RunConfig& cfg) {
    const std::string text = cfg.to_json();
    write_file(path, reinterpret_cast<const unsigned char*>(text.data()), text.size());
}

RunConfig load_config(const std::string& path) {
    const auto bytes = read_file(path);
    return RunConfig::from_json(std::string(bytes.begin(), bytes.end()));
}

} // namespace hirdiff
