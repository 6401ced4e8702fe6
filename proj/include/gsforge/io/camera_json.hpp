// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"

#include <filesystem>
#include <vector>

namespace gsforge {

// Human-diffable camera manifest:
// {"cameras": [{view_id, fx, fy, cx, cy, width, height,
//               R_wc (9 row-major), t_wc (3)}]}
std::vector<CameraModel> load_camera_manifest(const std::filesystem::path& path);
void save_camera_manifest(const std::filesystem::path& path,
                          const std::vector<CameraModel>& cameras);

} // namespace gsforge
