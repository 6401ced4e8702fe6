// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/gidx.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <cstring>

namespace gsforge {

void save_gmap(const std::filesystem::path& path, const Image<std::int32_t>& gmap) {
    std::vector<std::uint8_t> out;
    out.reserve(12 + gmap.size() * 4);
    out.insert(out.end(), {'G', 'I', 'D', 'X'});
    const std::uint32_t w = static_cast<std::uint32_t>(gmap.width());
    const std::uint32_t h = static_cast<std::uint32_t>(gmap.height());
    out.resize(12 + gmap.size() * 4);
    std::memcpy(out.data() + 4, &w, 4);
    std::memcpy(out.data() + 8, &h, 4);
    std::memcpy(out.data() + 12, gmap.data(), gmap.size() * 4);
    atomic_write_file(path, out);
}

Image<std::int32_t> load_gmap(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "GIDX", 4) != 0) {
        throw ParseError("'" + path.string() + "': bad GIDX magic at byte 0");
    }
    std::uint32_t w = 0, h = 0;
    std::memcpy(&w, bytes.data() + 4, 4);
    std::memcpy(&h, bytes.data() + 8, 4);
    const std::size_t need = 12 + static_cast<std::size_t>(w) * h * 4;
    if (bytes.size() != need) {
        throw ParseError("'" + path.string() + "': GIDX payload size mismatch (have " +
                         std::to_string(bytes.size()) + " bytes, need " + std::to_string(need) +
                         ")");
    }
    Image<std::int32_t> gmap(static_cast<int>(w), static_cast<int>(h), -1);
    std::memcpy(gmap.data(), bytes.data() + 12, gmap.size() * 4);
    return gmap;
}

} // namespace gsforge
