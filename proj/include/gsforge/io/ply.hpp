// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"

#include <filesystem>

namespace gsforge {

// Binary little-endian 3DGS point cloud: float32 properties x,y,z,
// nx,ny,nz, f_dc_0..2, f_rest_0..44, opacity, scale_0..2, rot_0..3.
// Properties are mapped by name; rot_0 is the quaternion w component;
// f_rest is channel-major (15 higher-order coefficients per channel).
GaussianScene load_scene_ply(const std::filesystem::path& path);
void save_scene_ply(const std::filesystem::path& path, const GaussianScene& scene);

} // namespace gsforge
