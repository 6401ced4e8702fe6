// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"
#include "gsforge/image.hpp"

#include <filesystem>

namespace gsforge {

// 8-bit binary PPM (P6). Values are clamped to [0,1] and rounded.
void save_rgb_ppm(const std::filesystem::path& path, const Image<Vec3>& rgb);
Image<Vec3> load_rgb_ppm(const std::filesystem::path& path);

} // namespace gsforge
