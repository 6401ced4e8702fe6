// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"
#include "gsforge/image.hpp"

#include <filesystem>

namespace gsforge {

// PFM, float32 little-endian (negative scale), bottom-up rows.
// "Pf" for scalar maps, "PF" for 3-channel maps.
void save_depth_pfm(const std::filesystem::path& path, const Image<double>& map);
Image<double> load_depth_pfm(const std::filesystem::path& path);

void save_vec3_pfm(const std::filesystem::path& path, const Image<Vec3>& map);
Image<Vec3> load_vec3_pfm(const std::filesystem::path& path);

} // namespace gsforge
