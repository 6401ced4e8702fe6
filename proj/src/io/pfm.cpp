// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/pfm.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <cstring>

namespace gsforge {

namespace {

struct PfmHeader {
    bool color = false;
    int width = 0, height = 0;
    std::size_t data_offset = 0;
};

PfmHeader parse_header(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    // Three whitespace-terminated tokens groups: magic, "W H", scale.
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
    PfmHeader h;
    const std::string magic = token();
    if (magic == "PF") {
        h.color = true;
    } else if (magic != "Pf") {
        throw ParseError("'" + name + "': bad PFM magic at byte 0");
    }
    try {
        h.width = std::stoi(token());
        h.height = std::stoi(token());
    } catch (const std::exception&) {
        throw ParseError("'" + name + "': bad PFM dimensions");
    }
    if (h.width <= 0 || h.height <= 0) {
        throw ParseError("'" + name + "': non-positive PFM dimensions");
    }
    const std::string scale = token();
    double s = 0.0;
    try {
        s = std::stod(scale);
    } catch (const std::exception&) {
        throw ParseError("'" + name + "': bad PFM scale");
    }
    if (!(s < 0.0)) {
        throw ParseError("'" + name + "': big-endian PFM is not supported (scale must be negative)");
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw ParseError("'" + name + "': missing separator after PFM scale");
    }
    h.data_offset = pos + 1;

    const std::size_t channels = h.color ? 3 : 1;
    const std::size_t need =
        h.data_offset + static_cast<std::size_t>(h.width) * h.height * channels * 4;
    if (bytes.size() < need) {
        throw ParseError("'" + name + "': truncated PFM payload at byte " +
                         std::to_string(bytes.size()) + " (need " + std::to_string(need) + ")");
    }
    return h;
}

} // namespace

void save_depth_pfm(const std::filesystem::path& path, const Image<double>& map) {
    std::string header =
        "Pf\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n-1.0\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.resize(out.size() + map.size() * 4);
    std::uint8_t* dst = out.data() + header.size();
    for (int y = map.height() - 1; y >= 0; --y) { // bottom-up
        for (int x = 0; x < map.width(); ++x) {
            const float v = static_cast<float>(map.at(x, y));
            std::memcpy(dst, &v, 4);
            dst += 4;
        }
    }
    atomic_write_file(path, out);
}

Image<double> load_depth_pfm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    const PfmHeader h = parse_header(bytes, path.string());
    if (h.color) {
        throw ParseError("'" + path.string() + "': expected scalar PFM (Pf), found color (PF)");
    }
    Image<double> map(h.width, h.height, 0.0);
    const std::uint8_t* src = bytes.data() + h.data_offset;
    for (int y = h.height - 1; y >= 0; --y) {
        for (int x = 0; x < h.width; ++x) {
            float v;
            std::memcpy(&v, src, 4);
            src += 4;
            map.at(x, y) = static_cast<double>(v);
        }
    }
    return map;
}

void save_vec3_pfm(const std::filesystem::path& path, const Image<Vec3>& map) {
    std::string header =
        "PF\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n-1.0\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.resize(out.size() + map.size() * 12);
    std::uint8_t* dst = out.data() + header.size();
    for (int y = map.height() - 1; y >= 0; --y) {
        for (int x = 0; x < map.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const float v = static_cast<float>(map.at(x, y)[c]);
                std::memcpy(dst, &v, 4);
                dst += 4;
            }
        }
    }
    atomic_write_file(path, out);
}

Image<Vec3> load_vec3_pfm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    const PfmHeader h = parse_header(bytes, path.string());
    if (!h.color) {
        throw ParseError("'" + path.string() + "': expected color PFM (PF), found scalar (Pf)");
    }
    Image<Vec3> map(h.width, h.height, Vec3::Zero());
    const std::uint8_t* src = bytes.data() + h.data_offset;
    for (int y = h.height - 1; y >= 0; --y) {
        for (int x = 0; x < h.width; ++x) {
            Vec3 v;
            for (int c = 0; c < 3; ++c) {
                float f;
                std::memcpy(&f, src, 4);
                src += 4;
                v[c] = static_cast<double>(f);
            }
            map.at(x, y) = v;
        }
    }
    return map;
}

} // namespace gsforge
