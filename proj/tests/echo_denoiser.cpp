// Scriptable counterpart for the external denoiser protocol tests. The mode
// argument picks a behavior: a well-formed echo server or one specific way of
// violating the protocol.
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

void put_f32(unsigned char* p, float f) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &f, sizeof(bits));
    p[0] = static_cast<unsigned char>(bits & 0xff);
    p[1] = static_cast<unsigned char>((bits >> 8) & 0xff);
    p[2] = static_cast<unsigned char>((bits >> 16) & 0xff);
    p[3] = static_cast<unsigned char>((bits >> 24) & 0xff);
}

float get_f32(const unsigned char* p) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    float f = 0.0f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
}

void send(const char* s) {
    std::fwrite(s, 1, std::strlen(s), stdout);
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "echo";

    if (mode == "quit") return 0;

    char line[256];
    if (!std::fgets(line, sizeof(line), stdin)) return 1;
    if (std::strcmp(line, "HELLO 1\n") != 0) return 1;
    send(mode == "badhello" ? "HELLO 2\n" : "HELLO 1\n");
    if (mode == "badhello") return 0;

    while (std::fgets(line, sizeof(line), stdin)) {
        std::size_t h = 0, w = 0, k = 0, t = 0;
        double alpha_bar = 0.0;
        if (std::sscanf(line, "PREDICT %zu %zu %zu %zu %lf", &h, &w, &k, &t, &alpha_bar) != 5)
            return 1;
        std::vector<unsigned char> payload(h * w * k * 4);
        if (std::fread(payload.data(), 1, payload.size(), stdin) != payload.size()) return 1;

        if (mode == "err") {
            send("ERR deliberate failure\n");
            continue;
        }
        if (mode == "hang") {
            sleep(30);
            return 0;
        }
        if (mode == "garbage") {
            send("WHAT 42\n");
            return 0;
        }
        if (mode == "half") {
            send("OK\n");
            std::fwrite(payload.data(), 1, payload.size() / 2, stdout);
            std::fflush(stdout);
            return 0;
        }
        // Echo mode folds the scalar fields into the samples so the test can
        // confirm every part of the request arrived intact.
        for (std::size_t i = 0; i < h * w * k; ++i) {
            const float v = get_f32(payload.data() + 4 * i);
            put_f32(payload.data() + 4 * i,
                    0.5f * v + static_cast<float>(t) + static_cast<float>(alpha_bar));
        }
        send("OK\n");
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        std::fflush(stdout);
    }
    return 0;
}
