// Converts raw headerless float32 little-endian arrays (band-major:
// band, then row, then column) into HIR1 cube files.

#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hirdiff/errors.hpp"
#include "hirdiff/io.hpp"
#include "hirdiff/tensor.hpp"

namespace {

float decode_f32(const unsigned char* p) {
    const std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                            (static_cast<std::uint32_t>(p[1]) << 8) |
                            (static_cast<std::uint32_t>(p[2]) << 16) |
                            (static_cast<std::uint32_t>(p[3]) << 24);
    float f;
    static_assert(sizeof(f) == sizeof(u));
    std::memcpy(&f, &u, sizeof(f));
    return f;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"raw float32 array to HIR1 cube converter"};
    std::string input, output;
    std::size_t height = 0, width = 0, bands = 0;
    app.add_option("--input", input, "raw float32 LE file, band-major")->required();
    app.add_option("--output", output, "HIR1 cube path")->required();
    app.add_option("--height", height, "spatial height")->required();
    app.add_option("--width", width, "spatial width")->required();
    app.add_option("--bands", bands, "band count")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        if (height == 0 || width == 0 || bands == 0)
            throw hirdiff::ValueError("dimensions must be positive");
        std::ifstream in(input, std::ios::binary | std::ios::ate);
        if (!in) throw hirdiff::IoError("cannot open '" + input + "' for reading");
        const std::size_t actual = static_cast<std::size_t>(in.tellg());
        const std::size_t expected = 4 * height * width * bands;
        if (actual != expected)
            throw hirdiff::IoError("'" + input + "' is " + std::to_string(actual) +
                                   " bytes, expected " + std::to_string(expected) + " for " +
                                   std::to_string(height) + "x" + std::to_string(width) + "x" +
                                   std::to_string(bands) + " float32 samples");
        in.seekg(0);
        std::vector<unsigned char> bytes(expected);
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected));
        if (!in) throw hirdiff::IoError("short read from '" + input + "'");

        hirdiff::Cube x(height, width, bands);
        for (std::size_t i = 0; i < x.size(); ++i)
            x.data()[i] = static_cast<double>(decode_f32(bytes.data() + 4 * i));
        hirdiff::save_cube(output, x);
        std::cout << "wrote " << output << " (" << height << "x" << width << "x" << bands
                  << ")\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
