#include "hirdiff/external_denoiser.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <vector>

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "hirdiff/errors.hpp"
#include "wire.hpp"

namespace hirdiff {

void ExternalDenoiser::fail(const char* step, const std::string& detail) {
    throw ProtocolError("external denoiser [" + std::string(step) + "]: " + detail +
                        " (command: " + command_ + ")");
}

ExternalDenoiser::ExternalDenoiser(std::string command, int timeout_ms)
    : command_(std::move(command)), timeout_ms_(timeout_ms) {
    int parent_to_child[2] = {-1, -1};
    int child_to_parent[2] = {-1, -1};
    if (pipe(parent_to_child) != 0 || pipe(child_to_parent) != 0)
        fail("spawn", "pipe() failed");
    const pid_t pid = fork();
    if (pid < 0) fail("spawn", "fork() failed");
    if (pid == 0) {
        dup2(parent_to_child[0], STDIN_FILENO);
        dup2(child_to_parent[1], STDOUT_FILENO);
        close(parent_to_child[0]);
        close(parent_to_child[1]);
        close(child_to_parent[0]);
        close(child_to_parent[1]);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        std::perror("exec");
        _exit(127);
    }
    pid_ = pid;
    to_child_ = parent_to_child[1];
    from_child_ = child_to_parent[0];
    close(parent_to_child[0]);
    close(child_to_parent[1]);
    signal(SIGPIPE, SIG_IGN);

    const char* hello = "HELLO 1\n";
    write_all(reinterpret_cast<const unsigned char*>(hello), 8, "handshake");
    const std::string reply = read_line("handshake");
    if (reply != "HELLO 1") fail("handshake", "expected 'HELLO 1', got '" + reply + "'");
}

ExternalDenoiser::~ExternalDenoiser() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (pid_ > 0) {
        int status = 0;
        // Give the child a moment to exit on EOF, then force it.
        for (int i = 0; i < 50; ++i) {
            if (waitpid(static_cast<pid_t>(pid_), &status, WNOHANG) != 0) return;
            usleep(10000);
        }
        kill(static_cast<pid_t>(pid_), SIGKILL);
        waitpid(static_cast<pid_t>(pid_), &status, 0);
    }
}

void ExternalDenoiser::write_all(const unsigned char* p, std::size_t n, const char* step) {
    std::size_t off = 0;
    while (off < n) {
        struct pollfd pfd{to_child_, POLLOUT, 0};
        const int rc = poll(&pfd, 1, timeout_ms_);
        if (rc == 0) fail(step, "timed out after " + std::to_string(timeout_ms_) + " ms writing");
        if (rc < 0) fail(step, "poll() failed");
        const ssize_t k = write(to_child_, p + off, n - off);
        if (k <= 0) fail(step, "child closed its stdin (wrote " + std::to_string(off) + " of " +
                                   std::to_string(n) + " bytes)");
        off += static_cast<std::size_t>(k);
    }
}

void ExternalDenoiser::read_all(unsigned char* p, std::size_t n, const char* step) {
    std::size_t off = 0;
    // Drain anything already buffered past the last line first.
    if (!buffer_.empty()) {
        const std::size_t take = std::min(n, buffer_.size());
        std::memcpy(p, buffer_.data(), take);
        buffer_.erase(0, take);
        off = take;
    }
    while (off < n) {
        struct pollfd pfd{from_child_, POLLIN, 0};
        const int rc = poll(&pfd, 1, timeout_ms_);
        if (rc == 0) fail(step, "timed out after " + std::to_string(timeout_ms_) + " ms reading");
        if (rc < 0) fail(step, "poll() failed");
        const ssize_t k = read(from_child_, p + off, n - off);
        if (k <= 0) fail(step, "stream ended after " + std::to_string(off) + " of " +
                                   std::to_string(n) + " payload bytes");
        off += static_cast<std::size_t>(k);
    }
}

std::string ExternalDenoiser::read_line(const char* step) {
    for (;;) {
        const std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        if (buffer_.size() > 4096) fail(step, "unterminated header line");
        struct pollfd pfd{from_child_, POLLIN, 0};
        const int rc = poll(&pfd, 1, timeout_ms_);
        if (rc == 0) fail(step, "timed out after " + std::to_string(timeout_ms_) + " ms waiting for a line");
        if (rc < 0) fail(step, "poll() failed");
        char chunk[512];
        const ssize_t k = read(from_child_, chunk, sizeof(chunk));
        if (k <= 0) fail(step, "stream ended mid-line");
        buffer_.append(chunk, static_cast<std::size_t>(k));
    }
}

Cube ExternalDenoiser::predict_noise(const Cube& a_t, std::size_t t, double alpha_bar) {
    char header[128];
    const int len = std::snprintf(header, sizeof(header), "PREDICT %zu %zu %zu %zu %.17g\n",
                                  a_t.h(), a_t.w(), a_t.bands(), t, alpha_bar);
    write_all(reinterpret_cast<const unsigned char*>(header), static_cast<std::size_t>(len),
              "predict header");

    std::vector<unsigned char> payload(a_t.size() * 4);
    for (std::size_t i = 0; i < a_t.size(); ++i)
        wire::put_f32(payload.data() + 4 * i, static_cast<float>(a_t.data()[i]));
    write_all(payload.data(), payload.size(), "predict payload");

    const std::string status = read_line("response header");
    if (status.rfind("ERR", 0) == 0)
        fail("response header", "child reported: " + status.substr(status.size() > 4 ? 4 : 3));
    if (status != "OK") fail("response header", "expected 'OK', got '" + status + "'");

    read_all(payload.data(), payload.size(), "response payload");
    Cube eps(a_t.h(), a_t.w(), a_t.bands());
    for (std::size_t i = 0; i < eps.size(); ++i)
        eps.data()[i] = static_cast<double>(wire::get_f32(payload.data() + 4 * i));
    if (!eps.all_finite()) fail("response payload", "non-finite samples in prediction");
    return eps;
}

} // namespace hirdiff
