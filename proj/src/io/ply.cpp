// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/ply.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <cstring>
#include <sstream>
#include <unordered_map>

namespace gsforge {

namespace {

// The 62 float32 properties of the reference layout, in file order.
std::vector<std::string> reference_properties() {
    std::vector<std::string> names = {"x", "y", "z", "nx", "ny", "nz",
                                      "f_dc_0", "f_dc_1", "f_dc_2"};
    for (int i = 0; i < 45; ++i) {
        names.push_back("f_rest_" + std::to_string(i));
    }
    names.push_back("opacity");
    for (int i = 0; i < 3; ++i) {
        names.push_back("scale_" + std::to_string(i));
    }
    for (int i = 0; i < 4; ++i) {
        names.push_back("rot_" + std::to_string(i));
    }
    return names;
}

float read_f32(const std::uint8_t* p) {
    float v;
    std::memcpy(&v, p, 4);
    return v;
}

void append_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint8_t b[4];
    std::memcpy(b, &v, 4);
    out.insert(out.end(), b, b + 4);
}

} // namespace

GaussianScene load_scene_ply(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);

    // Header: ascii lines through "end_header\n".
    std::size_t header_end = 0;
    {
        const std::string needle = "end_header\n";
        const std::string view(reinterpret_cast<const char*>(bytes.data()),
                               std::min<std::size_t>(bytes.size(), 65536));
        const auto pos = view.find(needle);
        if (pos == std::string::npos) {
            throw ParseError("'" + path.string() + "': no end_header in the first 64 KiB");
        }
        header_end = pos + needle.size();
    }
    std::istringstream header(std::string(reinterpret_cast<const char*>(bytes.data()), header_end));

    std::string line;
    std::getline(header, line);
    if (line != "ply") {
        throw ParseError("'" + path.string() + "': bad magic at byte 0 (expected 'ply')");
    }

    std::size_t vertex_count = 0;
    std::vector<std::string> properties;
    bool format_ok = false;
    bool in_vertex_element = false;
    while (std::getline(header, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "comment" || tok.empty()) {
            continue;
        }
        if (tok == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt != "binary_little_endian") {
                throw ParseError("'" + path.string() + "': unsupported format '" + fmt +
                                 "' (only binary_little_endian)");
            }
            format_ok = true;
        } else if (tok == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            if (name != "vertex") {
                throw ParseError("'" + path.string() + "': unsupported element '" + name + "'");
            }
            vertex_count = count;
            in_vertex_element = true;
        } else if (tok == "property") {
            if (!in_vertex_element) {
                throw ParseError("'" + path.string() + "': property before any element");
            }
            std::string type, name;
            ls >> type >> name;
            if (type != "float") {
                throw ParseError("'" + path.string() + "': property '" + name + "' has type '" +
                                 type + "' (only float is supported)");
            }
            properties.push_back(name);
        } else if (tok == "end_header") {
            break;
        } else {
            throw ParseError("'" + path.string() + "': unexpected header token '" + tok + "'");
        }
    }
    if (!format_ok) {
        throw ParseError("'" + path.string() + "': missing format line");
    }

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < properties.size(); ++i) {
        index[properties[i]] = i;
    }
    auto require = [&](const std::string& name) -> std::size_t {
        auto it = index.find(name);
        if (it == index.end()) {
            throw ParseError("'" + path.string() + "': missing property '" + name + "'");
        }
        return it->second;
    };

    const std::size_t ix = require("x"), iy = require("y"), iz = require("z");
    std::size_t idc[3], irest[45];
    for (int c = 0; c < 3; ++c) {
        idc[c] = require("f_dc_" + std::to_string(c));
    }
    for (int k = 0; k < 45; ++k) {
        irest[k] = require("f_rest_" + std::to_string(k));
    }
    const std::size_t iop = require("opacity");
    std::size_t iscale[3], irot[4];
    for (int k = 0; k < 3; ++k) {
        iscale[k] = require("scale_" + std::to_string(k));
    }
    for (int k = 0; k < 4; ++k) {
        irot[k] = require("rot_" + std::to_string(k));
    }

    const std::size_t stride = properties.size() * 4;
    const std::size_t need = header_end + vertex_count * stride;
    if (bytes.size() < need) {
        throw ParseError("'" + path.string() + "': truncated payload at byte " +
                         std::to_string(bytes.size()) + " (need " + std::to_string(need) + ")");
    }

    GaussianScene scene;
    scene.scene_id = path.stem().string();
    scene.primitives.resize(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        const std::uint8_t* row = bytes.data() + header_end + v * stride;
        auto f = [&](std::size_t prop) { return static_cast<double>(read_f32(row + prop * 4)); };
        GaussianPrimitive& p = scene.primitives[v];
        p.position = Vec3(f(ix), f(iy), f(iz));
        for (int c = 0; c < 3; ++c) {
            p.sh[c * 16] = f(idc[c]);
            for (int k = 0; k < 15; ++k) {
                p.sh[c * 16 + 1 + k] = f(irest[c * 15 + k]);
            }
        }
        p.opacity_logit = f(iop);
        p.log_scale = Vec3(f(iscale[0]), f(iscale[1]), f(iscale[2]));
        p.rotation = Vec4(f(irot[0]), f(irot[1]), f(irot[2]), f(irot[3])); // (w, x, y, z)
    }
    return scene;
}

void save_scene_ply(const std::filesystem::path& path, const GaussianScene& scene) {
    std::string header = "ply\nformat binary_little_endian 1.0\nelement vertex " +
                         std::to_string(scene.primitives.size()) + "\n";
    for (const std::string& name : reference_properties()) {
        header += "property float " + name + "\n";
    }
    header += "end_header\n";

    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + scene.primitives.size() * 62 * 4);
    for (const GaussianPrimitive& p : scene.primitives) {
        for (int k = 0; k < 3; ++k) {
            append_f32(out, static_cast<float>(p.position[k]));
        }
        for (int k = 0; k < 3; ++k) {
            append_f32(out, 0.0f); // nx, ny, nz
        }
        for (int c = 0; c < 3; ++c) {
            append_f32(out, static_cast<float>(p.sh[c * 16]));
        }
        for (int c = 0; c < 3; ++c) {
            for (int k = 0; k < 15; ++k) {
                append_f32(out, static_cast<float>(p.sh[c * 16 + 1 + k]));
            }
        }
        append_f32(out, static_cast<float>(p.opacity_logit));
        for (int k = 0; k < 3; ++k) {
            append_f32(out, static_cast<float>(p.log_scale[k]));
        }
        for (int k = 0; k < 4; ++k) {
            append_f32(out, static_cast<float>(p.rotation[k]));
        }
    }
    atomic_write_file(path, out);
}

} // namespace gsforge
