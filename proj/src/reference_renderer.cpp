// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/reference_renderer.hpp"

#include "gsforge/view_synth.hpp"

#include <algorithm>
#include <cmath>

namespace gsforge {

RenderBuffers reference_render_buffers(const CameraModel& cam, std::span<const Projected2D> sorted,
                                       const RenderSettings& settings) {
    const int w = cam.width, h = cam.height;
    RenderBuffers rb;
    rb.width = w;
    rb.height = h;
    rb.rgb = Image<Vec3>(w, h, Vec3::Zero());
    rb.depth_alpha = Image<double>(w, h, 0.0);
    rb.depth_dominant = Image<double>(w, h, 0.0);
    rb.depth_plane = Image<double>(w, h, 0.0);
    rb.normal = Image<Vec3>(w, h, Vec3::Zero());
    rb.distance = Image<double>(w, h, 0.0);
    rb.gmap = Image<std::int32_t>(w, h, -1);
    rb.alpha_acc = Image<double>(w, h, 0.0);

    int max_index = 0;
    for (const auto& p : sorted) {
        max_index = std::max(max_index, p.primitive_index + 1);
    }
    std::vector<std::uint8_t> contributed(static_cast<std::size_t>(max_index), 0);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            Vec3 rgb = Vec3::Zero();
            Vec3 normal = Vec3::Zero();
            double depth_alpha = 0.0;
            double distance = 0.0;
            double transmittance = 1.0;
            double depth_dominant = 0.0;
            bool dominant_set = false;
            double best_weight = -1.0;
            int best_index = -1;

            for (const Projected2D& p : sorted) {
                const double dx = static_cast<double>(x) - p.mean2d.x();
                const double dy = static_cast<double>(y) - p.mean2d.y();
                const double m2 =
                    p.conic_a * dx * dx + 2.0 * p.conic_b * dx * dy + p.conic_c * dy * dy;
                const double alpha = p.opacity * std::exp(-0.5 * m2);
                if (alpha < settings.alpha_min) {
                    continue;
                }
                const double weight = alpha * transmittance;
                rgb += weight * p.color;
                depth_alpha += weight * p.z_cam;
                normal += weight * p.normal_blend;
                distance += weight * p.distance_blend;
                if (!dominant_set && alpha >= settings.tau) {
                    depth_dominant = p.z_cam;
                    dominant_set = true;
                }
                if (weight > best_weight ||
                    (weight == best_weight && p.primitive_index < best_index)) {
                    best_weight = weight;
                    best_index = p.primitive_index;
                }
                contributed[p.primitive_index] = 1;
                transmittance *= (1.0 - alpha);
                if (transmittance < settings.transmittance_min) {
                    break;
                }
            }

            const double alpha_acc = 1.0 - transmittance;
            rb.rgb.at(x, y) = rgb;
            rb.normal.at(x, y) = normal;
            rb.distance.at(x, y) = distance;
            rb.alpha_acc.at(x, y) = alpha_acc;
            rb.depth_dominant.at(x, y) = depth_dominant;
            rb.depth_alpha.at(x, y) = alpha_acc < settings.min_alpha_acc ? 0.0 : depth_alpha;
            rb.gmap.at(x, y) = alpha_acc < settings.min_alpha_acc ? -1 : best_index;

            double plane = 0.0;
            if (alpha_acc >= settings.min_alpha_acc) {
                const Vec3 ray = cam.ray_dir(static_cast<double>(x), static_cast<double>(y));
                const double denom = normal.dot(ray);
                if (std::abs(denom) >= settings.plane_denom_min) {
                    const double d = distance / denom;
                    if (std::isfinite(d) && d > 0.0) {
                        plane = d;
                    }
                }
            }
            rb.depth_plane.at(x, y) = plane;
        }
    }

    rb.n_contributing = std::count(contributed.begin(), contributed.end(), std::uint8_t{1});
    return rb;
}

RenderedView reference_render_view(const CameraModel& cam, const GaussianScene& scene,
                                   const RenderSettings& settings) {
    settings.validate();
    cam.validate();
    const auto activated = activate_scene(scene);
    const auto sorted = prepare_view(cam, activated, settings);
    RenderBuffers rb = reference_render_buffers(cam, sorted, settings);

    RenderedView view;
    view.width = rb.width;
    view.height = rb.height;
    view.depth_mode = settings.depth_mode;
    view.rgb = std::move(rb.rgb);
    view.depth = rb.depth(settings.depth_mode);
    view.normal = std::move(rb.normal);
    view.distance = std::move(rb.distance);
    view.gmap = std::move(rb.gmap);
    view.alpha_acc = std::move(rb.alpha_acc);
    view.n_contributing = rb.n_contributing;
    view.stats = compute_view_stats(view, settings.tau_alpha, settings.tau_depth);
    return view;
}

} // namespace gsforge
