// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/file_util.hpp"

#include "gsforge/error.hpp"

#include <cstdio>
#include <fstream>

namespace gsforge {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    if (size > 0) {
        in.read(reinterpret_cast<char*>(bytes.data()), size);
    }
    if (!in) {
        throw ParseError("failed reading '" + path.string() + "'");
    }
    return bytes;
}

void atomic_write_file(const std::filesystem::path& path, const void* data, std::size_t size) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) {
            throw Error("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("failed renaming '" + tmp.string() + "' to '" + path.string() +
                    "': " + ec.message());
    }
}

void atomic_write_file(const std::filesystem::path& path, const std::string& text) {
    atomic_write_file(path, text.data(), text.size());
}

void atomic_write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    atomic_write_file(path, bytes.data(), bytes.size());
}

std::uint64_t fnv1a(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& text) { return fnv1a(text.data(), text.size()); }

} // namespace gsforge
