// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gsforge {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

// Write-to-temp then rename: a crashed run never leaves partial outputs.
void atomic_write_file(const std::filesystem::path& path, const void* data, std::size_t size);
void atomic_write_file(const std::filesystem::path& path, const std::string& text);
void atomic_write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

// FNV-1a, used for resume stamps.
std::uint64_t fnv1a(const void* data, std::size_t size);
std::uint64_t fnv1a(const std::string& text);

} // namespace gsforge
