// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/ppm.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace gsforge {

void save_rgb_ppm(const std::filesystem::path& path, const Image<Vec3>& rgb) {
    std::string header =
        "P6\n" + std::to_string(rgb.width()) + " " + std::to_string(rgb.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + rgb.size() * 3);
    for (int y = 0; y < rgb.height(); ++y) {
        for (int x = 0; x < rgb.width(); ++x) {
            const Vec3& v = rgb.at(x, y);
            for (int c = 0; c < 3; ++c) {
                const double clamped = std::clamp(v[c], 0.0, 1.0);
                out.push_back(static_cast<std::uint8_t>(std::lround(clamped * 255.0)));
            }
        }
    }
    atomic_write_file(path, out);
}

Image<Vec3> load_rgb_ppm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    std::size_t pos = 0;
    auto token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(bytes[pos])) {
            ++pos;
        }
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) {
            t.push_back(static_cast<char>(bytes[pos++]));
        }
        return t;
    };
    if (token() != "P6") {
        throw ParseError("'" + path.string() + "': bad PPM magic at byte 0");
    }
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(token());
        h = std::stoi(token());
        maxval = std::stoi(token());
    } catch (const std::exception&) {
        throw ParseError("'" + path.string() + "': bad PPM header");
    }
    if (w <= 0 || h <= 0 || maxval != 255) {
        throw ParseError("'" + path.string() + "': unsupported PPM header");
    }
    ++pos; // single whitespace after maxval
    const std::size_t need = pos + static_cast<std::size_t>(w) * h * 3;
    if (bytes.size() < need) {
        throw ParseError("'" + path.string() + "': truncated PPM payload");
    }
    Image<Vec3> rgb(w, h, Vec3::Zero());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            Vec3 v;
            for (int c = 0; c < 3; ++c) {
                v[c] = bytes[pos++] / 255.0;
            }
            rgb.at(x, y) = v;
        }
    }
    return rgb;
}

} // namespace gsforge
