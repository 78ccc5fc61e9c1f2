#pragma once

#include <string>

#include "hirdiff/sampler.hpp"

namespace hirdiff {

/// Noise predictor served by a child process over stdin/stdout.
///
/// Wire protocol (version 1, all multi-byte values little-endian):
///   on spawn   ->  "HELLO 1\n"          and the child answers "HELLO 1\n"
///   per query  ->  "PREDICT h w k t alpha_bar\n" + h*w*k float32 samples
///                  (band-major planes, row-major within a plane)
///   response   <-  "OK\n" + h*w*k float32 samples, or "ERR <message>\n"
///
/// Any timeout, short read/write, or malformed frame aborts the run with a
/// ProtocolError naming the protocol step.
class ExternalDenoiser final : public Denoiser {
public:
    /// Spawns `command` via /bin/sh -c and performs the handshake.
    explicit ExternalDenoiser(std::string command, int timeout_ms = 120000);
    ~ExternalDenoiser() override;

    ExternalDenoiser(const ExternalDenoiser&) = delete;
    ExternalDenoiser& operator=(const ExternalDenoiser&) = delete;

    Cube predict_noise(const Cube& a_t, std::size_t t, double alpha_bar) override;

private:
    std::string read_line(const char* step);
    void write_all(const unsigned char* p, std::size_t n, const char* step);
    void read_all(unsigned char* p, std::size_t n, const char* step);
    [[noreturn]] void fail(const char* step, const std::string& detail);

    std::string command_;
    int timeout_ms_;
    int to_child_ = -1;
    int from_child_ = -1;
    long pid_ = -1;
    std::string buffer_;
};

} // namespace hirdiff
