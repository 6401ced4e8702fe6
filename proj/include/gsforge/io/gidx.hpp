// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/image.hpp"

#include <filesystem>

namespace gsforge {

// Gaussian index map: "GIDX", u32 width, u32 height, then int32
// little-endian row-major payload with -1 as the empty sentinel.
void save_gmap(const std::filesystem::path& path, const Image<std::int32_t>& gmap);
Image<std::int32_t> load_gmap(const std::filesystem::path& path);

} // namespace gsforge
