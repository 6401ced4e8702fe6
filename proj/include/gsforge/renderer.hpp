// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"
#include "gsforge/image.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gsforge {

enum class DepthMode { Alpha, Dominant, Plane };

const char* depth_mode_name(DepthMode mode);
DepthMode depth_mode_from_name(const std::string& name); // throws ConfigError

struct RenderSettings {
    DepthMode depth_mode = DepthMode::Plane;
    double tau = 0.5;          // dominant-primitive opacity threshold
    double tau_alpha = 0.5;    // stats: pixel validity threshold on accumulated alpha
    double tau_depth = 0.0;    // stats: near-depth threshold (0 disables)
    double z_near = 0.01;
    double alpha_min = 1.0 / 255.0;      // contributions below this are dropped
    double transmittance_min = 1e-4;     // front-to-back early stop
    double lowpass = 0.3;                // 2D covariance dilation, px^2
    double min_alpha_acc = 1e-3;         // pixel validity for depth sentinels
    double plane_denom_min = 1e-6;       // ray-plane denominator guard
    int tile_size = 16;

    void validate() const; // throws ConfigError
};

// A primitive splatted into one view. Spec'd quantities plus the
// precomputed per-view values both render paths consume.
struct Projected2D {
    int primitive_index = -1;
    Vec2 mean2d = Vec2::Zero();
    Mat2 cov2d = Mat2::Zero();   // after low-pass dilation
    double z_cam = 0.0;
    Vec3 plane_normal_cam = Vec3::Zero(); // R_c^T n_i, unflipped
    double plane_distance = 0.0;          // d_i, unflipped

    // Derived, filled by project_primitive:
    double conic_a = 0.0, conic_b = 0.0, conic_c = 0.0; // inverse cov2d
    double opacity = 0.0;
    Vec3 color = Vec3::Zero();            // SH color for this view
    Vec3 normal_blend = Vec3::Zero();     // camera-facing normal used in Eq-style blending
    double distance_blend = 0.0;          // matching flipped plane distance
    double bound_x = 0.0, bound_y = 0.0;  // half extents of the alpha>=alpha_min footprint
};

// Per-view statistics used by the pre-rendering check.
struct ViewStats {
    std::int64_t n_gaussians = 0; // primitives with nonzero compositing weight
    double mean_alpha = 0.0;      // mean accumulated alpha over all pixels
    double frac_valid = 0.0;      // fraction of pixels with alpha_acc > tau_alpha
    double frac_near = 0.0;       // fraction of valid pixels with 0 < depth < tau_depth
};

struct RenderedView {
    int width = 0, height = 0;
    DepthMode depth_mode = DepthMode::Plane;
    Image<Vec3> rgb;
    Image<double> depth;    // mode-tagged; 0 marks invalid
    Image<Vec3> normal;     // alpha-blended, not re-normalized
    Image<double> distance;
    Image<std::int32_t> gmap; // dominant-weight primitive index, -1 when empty
    Image<double> alpha_acc;
    std::int64_t n_contributing = 0;
    ViewStats stats;
};

// Unit-normalized copy of the blended normal map (zero stays zero).
Image<Vec3> unit_normals(const Image<Vec3>& normal);

// EWA-style projection. Returns nothing when culled (behind the near
// plane or 3-sigma footprint off-image).
std::optional<Projected2D> project_primitive(const CameraModel& cam, const ActivatedPrimitive& p,
                                             int primitive_index, const RenderSettings& settings);

// Projects and sorts a whole scene front to back (z ascending, index
// tie-break). The global order is what makes rendering schedule-free.
std::vector<Projected2D> prepare_view(const CameraModel& cam,
                                      std::span<const ActivatedPrimitive> prims,
                                      const RenderSettings& settings);

struct Contribution {
    double alpha = 0.0;
    double value = 0.0;
    double z = std::numeric_limits<double>::quiet_NaN(); // optional, debug sortedness check
};

struct CompositeResult {
    double value = 0.0;
    double transmittance = 1.0;
};

// Front-to-back alpha compositing of pre-sorted contributions.
CompositeResult composite_pixel(std::span<const Contribution> sorted,
                                double transmittance_min = 1e-4);

// Every buffer a view render produces; depth modes are all filled in one pass.
struct RenderBuffers {
    int width = 0, height = 0;
    Image<Vec3> rgb;
    Image<double> depth_alpha;
    Image<double> depth_dominant;
    Image<double> depth_plane;
    Image<Vec3> normal;
    Image<double> distance;
    Image<std::int32_t> gmap;
    Image<double> alpha_acc;
    std::int64_t n_contributing = 0;

    const Image<double>& depth(DepthMode mode) const;
};

// Tiled OpenMP renderer. Bit-identical for any worker count.
RenderBuffers render_buffers(const CameraModel& cam, std::span<const Projected2D> sorted,
                             const RenderSettings& settings);

RenderedView render_view(const CameraModel& cam, const GaussianScene& scene,
                         const RenderSettings& settings);

// Spec'd single-map entry points.
Image<double> render_depth_alpha(const CameraModel& cam, const GaussianScene& scene,
                                 const RenderSettings& settings);
Image<double> render_depth_dominant(const CameraModel& cam, const GaussianScene& scene,
                                    const RenderSettings& settings, double tau);
std::pair<Image<Vec3>, Image<double>> render_normal_distance(const CameraModel& cam,
                                                             const GaussianScene& scene,
                                                             const RenderSettings& settings);
Image<double> render_depth_plane(const CameraModel& cam, const GaussianScene& scene,
                                 const RenderSettings& settings);
Image<std::int32_t> render_gaussian_map(const CameraModel& cam, const GaussianScene& scene,
                                        const RenderSettings& settings);

} // namespace gsforge
