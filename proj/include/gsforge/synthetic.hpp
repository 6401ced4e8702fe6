// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"
#include "gsforge/image.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace gsforge {

enum class SyntheticKind { Plane, TwoPlanes, SphereShell, RandomCloud };

SyntheticKind synthetic_kind_from_name(const std::string& name); // throws ConfigError
const char* synthetic_kind_name(SyntheticKind kind);

struct SyntheticParams {
    int grid_n = 16;      // primitives per side for surface scenes
    double extent = 4.0;  // half-extent of the tiled surface
    double plane_z = 2.0; // Plane / TwoPlanes near plane
    double plane_z2 = 4.0;
    double split_x = 0.0; // TwoPlanes boundary in world x
    double radius = 1.5;  // SphereShell
    Vec3 sphere_center = Vec3(0.0, 0.0, 4.0);
    int count = 400;            // RandomCloud primitives
    double cloud_extent = 2.0;  // RandomCloud lateral half-extent
    double cloud_z_lo = 1.5, cloud_z_hi = 6.0;
    double flatten = 1e-5;       // normal-axis scale relative to tangential
    double opacity_logit = 30.0; // effectively opaque surface primitives
};

// Scene plus its exact-depth oracle: z-depth of the analytic surface along
// the pixel ray, 0 when nothing is hit. RandomCloud has no oracle.
struct SyntheticScene {
    GaussianScene scene;
    SyntheticKind kind = SyntheticKind::Plane;
    SyntheticParams params;
    std::function<double(const CameraModel&, double, double)> oracle_depth;
};

SyntheticScene make_synthetic_scene(SyntheticKind kind, const SyntheticParams& params,
                                    std::uint64_t seed);

Image<double> oracle_depth_map(const SyntheticScene& scene, const CameraModel& cam);

// World-to-camera pose looking from eye toward target, CV convention
// (z forward, x right, y down the image).
CameraModel make_lookat_camera(const Vec3& eye, const Vec3& target, const Vec3& up_hint, double fx,
                               double fy, int width, int height, const std::string& view_id);

// A deterministic ring of cameras facing the synthetic surface.
std::vector<CameraModel> synthetic_camera_ring(const SyntheticScene& scene, int count, int width,
                                               int height, double focal, double jitter_scale,
                                               std::uint64_t seed);

} // namespace gsforge
