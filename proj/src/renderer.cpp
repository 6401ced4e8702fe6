// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/renderer.hpp"

#include "gsforge/error.hpp"
#include "gsforge/sh.hpp"
#include "gsforge/view_synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>

namespace gsforge {

const char* depth_mode_name(DepthMode mode) {
    switch (mode) {
        case DepthMode::Alpha: return "alpha";
        case DepthMode::Dominant: return "dominant";
        case DepthMode::Plane: return "plane";
    }
    return "unknown";
}

DepthMode depth_mode_from_name(const std::string& name) {
    if (name == "alpha") return DepthMode::Alpha;
    if (name == "dominant") return DepthMode::Dominant;
    if (name == "plane") return DepthMode::Plane;
    throw ConfigError("unknown depth mode '" + name + "' (expected alpha|dominant|plane)");
}

void RenderSettings::validate() const {
    if (!(tau > 0.0) || tau > 1.0) {
        throw ConfigError("dominant threshold tau must be in (0, 1]");
    }
    if (!(alpha_min > 0.0) || alpha_min >= 1.0) {
        throw ConfigError("alpha_min must be in (0, 1)");
    }
    if (!(transmittance_min > 0.0)) {
        throw ConfigError("transmittance_min must be positive");
    }
    if (!(z_near > 0.0)) {
        throw ConfigError("z_near must be positive");
    }
    if (lowpass < 0.0) {
        throw ConfigError("lowpass dilation must be non-negative");
    }
    if (tile_size < 1) {
        throw ConfigError("tile_size must be at least 1");
    }
}

const Image<double>& RenderBuffers::depth(DepthMode mode) const {
    switch (mode) {
        case DepthMode::Alpha: return depth_alpha;
        case DepthMode::Dominant: return depth_dominant;
        case DepthMode::Plane: return depth_plane;
    }
    return depth_plane;
}

Image<Vec3> unit_normals(const Image<Vec3>& normal) {
    Image<Vec3> out(normal.width(), normal.height(), Vec3::Zero());
    for (int y = 0; y < normal.height(); ++y) {
        for (int x = 0; x < normal.width(); ++x) {
            const Vec3& n = normal.at(x, y);
            const double len = n.norm();
            if (len > 0.0) {
                out.at(x, y) = n / len;
            }
        }
    }
    return out;
}

std::optional<Projected2D> project_primitive(const CameraModel& cam, const ActivatedPrimitive& p,
                                             int primitive_index,
                                             const RenderSettings& settings) {
    const Vec3 p_cam = cam.to_camera(p.position);
    const double z = p_cam.z();
    if (z <= settings.z_near) {
        return std::nullopt;
    }

    Projected2D out;
    out.primitive_index = primitive_index;
    out.z_cam = z;
    out.mean2d = cam.project(p_cam);

    // cov2d = J W Sigma W^T J^T + lowpass * I, with J the projective
    // Jacobian at the center and W the world-to-camera rotation.
    Eigen::Matrix<double, 2, 3> jac;
    jac << cam.fx / z, 0.0, -cam.fx * p_cam.x() / (z * z),
           0.0, cam.fy / z, -cam.fy * p_cam.y() / (z * z);
    const Eigen::Matrix<double, 2, 3> jw = jac * cam.rotation_wc;
    Mat2 cov2d = jw * covariance_of(p) * jw.transpose();
    cov2d(0, 0) += settings.lowpass;
    cov2d(1, 1) += settings.lowpass;
    out.cov2d = cov2d;

    const double sx3 = 3.0 * std::sqrt(cov2d(0, 0));
    const double sy3 = 3.0 * std::sqrt(cov2d(1, 1));
    if (out.mean2d.x() + sx3 < 0.0 || out.mean2d.x() - sx3 > cam.width - 1 ||
        out.mean2d.y() + sy3 < 0.0 || out.mean2d.y() - sy3 > cam.height - 1) {
        return std::nullopt;
    }

    const double det = cov2d(0, 0) * cov2d(1, 1) - cov2d(0, 1) * cov2d(0, 1);
    if (!(det > 0.0) || !std::isfinite(det)) {
        return std::nullopt;
    }
    out.conic_a = cov2d(1, 1) / det;
    out.conic_b = -cov2d(0, 1) / det;
    out.conic_c = cov2d(0, 0) / det;

    out.opacity = p.opacity;
    const Vec3 dir_world = (p.position - cam.center()).normalized();
    out.color = eval_sh_color(p.sh, dir_world);

    // Plane quantities: d_i = (R_c^T (mu - T_c))^T (R_c^T n_i). R_c^T is the
    // world-to-camera rotation, so both factors are just camera-frame vectors.
    const Vec3 n_cam = cam.rotation_wc * plane_normal_of(p);
    const double d = p_cam.dot(n_cam);
    out.plane_normal_cam = n_cam;
    out.plane_distance = d;

    // Camera-facing copy used for blending (Eq. 5 denominator sign stability).
    const double facing = n_cam.dot(p_cam) > 0.0 ? -1.0 : 1.0;
    out.normal_blend = facing * n_cam;
    out.distance_blend = facing * d;

    // Conservative footprint: every pixel with alpha >= alpha_min lies within
    // bound_k Mahalanobis units, whose axis extents are bound_k * sqrt(var).
    const double bound_k = std::sqrt(2.0 * std::log(1.0 / settings.alpha_min)) + 0.01;
    out.bound_x = bound_k * std::sqrt(cov2d(0, 0));
    out.bound_y = bound_k * std::sqrt(cov2d(1, 1));
    return out;
}

std::vector<Projected2D> prepare_view(const CameraModel& cam,
                                      std::span<const ActivatedPrimitive> prims,
                                      const RenderSettings& settings) {
    std::vector<std::optional<Projected2D>> projected(prims.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(prims.size()); ++i) {
        projected[i] = project_primitive(cam, prims[i], static_cast<int>(i), settings);
    }

    std::vector<Projected2D> out;
    out.reserve(prims.size());
    for (auto& p : projected) {
        if (p) {
            out.push_back(std::move(*p));
        }
    }
    std::sort(out.begin(), out.end(), [](const Projected2D& a, const Projected2D& b) {
        if (a.z_cam != b.z_cam) return a.z_cam < b.z_cam;
        return a.primitive_index < b.primitive_index;
    });
    return out;
}

CompositeResult composite_pixel(std::span<const Contribution> sorted, double transmittance_min) {
#ifndef NDEBUG
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (std::isfinite(sorted[i - 1].z) && std::isfinite(sorted[i].z) &&
            sorted[i].z < sorted[i - 1].z) {
            throw InvalidInputError("composite_pixel: contributions not sorted front to back");
        }
    }
#endif
    CompositeResult r;
    for (const Contribution& c : sorted) {
        const double w = c.alpha * r.transmittance;
        r.value += w * c.value;
        r.transmittance *= (1.0 - c.alpha);
        if (r.transmittance < transmittance_min) {
            break;
        }
    }
    return r;
}

namespace {

struct PixelAccum {
    Vec3 rgb = Vec3::Zero();
    double depth_alpha = 0.0;
    Vec3 normal = Vec3::Zero();
    double distance = 0.0;
    double transmittance = 1.0;
    double depth_dominant = 0.0;
    bool dominant_set = false;
    double best_weight = -1.0;
    int best_index = -1;
};

} // namespace

RenderBuffers render_buffers(const CameraModel& cam, std::span<const Projected2D> sorted,
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

    const int ts = settings.tile_size;
    const int tiles_x = (w + ts - 1) / ts;
    const int tiles_y = (h + ts - 1) / ts;
    const int n_tiles = tiles_x * tiles_y;

    // Bin primitives per tile in global order so every pixel walks its
    // contributions front to back no matter how tiles are scheduled.
    std::vector<std::vector<std::int32_t>> bins(n_tiles);
    for (std::int32_t si = 0; si < static_cast<std::int32_t>(sorted.size()); ++si) {
        const Projected2D& p = sorted[si];
        const int x0 = std::max(0, static_cast<int>(std::ceil(p.mean2d.x() - p.bound_x)));
        const int x1 = std::min(w - 1, static_cast<int>(std::floor(p.mean2d.x() + p.bound_x)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(p.mean2d.y() - p.bound_y)));
        const int y1 = std::min(h - 1, static_cast<int>(std::floor(p.mean2d.y() + p.bound_y)));
        if (x0 > x1 || y0 > y1) {
            continue;
        }
        for (int ty = y0 / ts; ty <= y1 / ts; ++ty) {
            for (int tx = x0 / ts; tx <= x1 / ts; ++tx) {
                bins[ty * tiles_x + tx].push_back(si);
            }
        }
    }

#ifdef _OPENMP
    const int n_threads = omp_get_max_threads();
#else
    const int n_threads = 1;
#endif
    std::vector<std::vector<std::uint8_t>> contributed(
        n_threads, std::vector<std::uint8_t>(static_cast<std::size_t>(max_index), 0));

#pragma omp parallel for schedule(dynamic)
    for (int tile = 0; tile < n_tiles; ++tile) {
#ifdef _OPENMP
        std::vector<std::uint8_t>& marks = contributed[omp_get_thread_num()];
#else
        std::vector<std::uint8_t>& marks = contributed[0];
#endif
        const int tx = tile % tiles_x;
        const int ty = tile / tiles_x;
        const int px0 = tx * ts, px1 = std::min(w, px0 + ts);
        const int py0 = ty * ts, py1 = std::min(h, py0 + ts);
        const std::vector<std::int32_t>& bin = bins[tile];

        for (int y = py0; y < py1; ++y) {
            for (int x = px0; x < px1; ++x) {
                PixelAccum acc;
                for (std::int32_t si : bin) {
                    const Projected2D& p = sorted[si];
                    const double dx = static_cast<double>(x) - p.mean2d.x();
                    const double dy = static_cast<double>(y) - p.mean2d.y();
                    if (std::abs(dx) > p.bound_x || std::abs(dy) > p.bound_y) {
                        continue;
                    }
                    const double m2 =
                        p.conic_a * dx * dx + 2.0 * p.conic_b * dx * dy + p.conic_c * dy * dy;
                    const double alpha = p.opacity * std::exp(-0.5 * m2);
                    if (alpha < settings.alpha_min) {
                        continue;
                    }
                    const double weight = alpha * acc.transmittance;
                    acc.rgb += weight * p.color;
                    acc.depth_alpha += weight * p.z_cam;
                    acc.normal += weight * p.normal_blend;
                    acc.distance += weight * p.distance_blend;
                    if (!acc.dominant_set && alpha >= settings.tau) {
                        acc.depth_dominant = p.z_cam;
                        acc.dominant_set = true;
                    }
                    if (weight > acc.best_weight ||
                        (weight == acc.best_weight && p.primitive_index < acc.best_index)) {
                        acc.best_weight = weight;
                        acc.best_index = p.primitive_index;
                    }
                    marks[p.primitive_index] = 1;
                    acc.transmittance *= (1.0 - alpha);
                    if (acc.transmittance < settings.transmittance_min) {
                        break;
                    }
                }

                const double alpha_acc = 1.0 - acc.transmittance;
                rb.rgb.at(x, y) = acc.rgb;
                rb.normal.at(x, y) = acc.normal;
                rb.distance.at(x, y) = acc.distance;
                rb.alpha_acc.at(x, y) = alpha_acc;
                rb.depth_dominant.at(x, y) = acc.depth_dominant;
                rb.depth_alpha.at(x, y) = alpha_acc < settings.min_alpha_acc ? 0.0 : acc.depth_alpha;
                rb.gmap.at(x, y) = alpha_acc < settings.min_alpha_acc ? -1 : acc.best_index;

                // Ray-plane depth: D = dist / (N . K^-1 p~), guarded.
                double plane = 0.0;
                if (alpha_acc >= settings.min_alpha_acc) {
                    const Vec3 ray = cam.ray_dir(static_cast<double>(x), static_cast<double>(y));
                    const double denom = acc.normal.dot(ray);
                    if (std::abs(denom) >= settings.plane_denom_min) {
                        const double d = acc.distance / denom;
                        if (std::isfinite(d) && d > 0.0) {
                            plane = d;
                        }
                    }
                }
                rb.depth_plane.at(x, y) = plane;
            }
        }
    }

    std::vector<std::uint8_t> merged(static_cast<std::size_t>(max_index), 0);
    for (const auto& marks : contributed) {
        for (std::size_t i = 0; i < marks.size(); ++i) {
            merged[i] |= marks[i];
        }
    }
    rb.n_contributing = std::count(merged.begin(), merged.end(), std::uint8_t{1});
    return rb;
}

RenderedView render_view(const CameraModel& cam, const GaussianScene& scene,
                         const RenderSettings& settings) {
    settings.validate();
    cam.validate();
    const auto activated = activate_scene(scene);
    const auto sorted = prepare_view(cam, activated, settings);
    RenderBuffers rb = render_buffers(cam, sorted, settings);

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

Image<double> render_depth_alpha(const CameraModel& cam, const GaussianScene& scene,
                                 const RenderSettings& settings) {
    RenderSettings s = settings;
    s.depth_mode = DepthMode::Alpha;
    return render_view(cam, scene, s).depth;
}

Image<double> render_depth_dominant(const CameraModel& cam, const GaussianScene& scene,
                                    const RenderSettings& settings, double tau) {
    RenderSettings s = settings;
    s.depth_mode = DepthMode::Dominant;
    s.tau = tau;
    return render_view(cam, scene, s).depth;
}

std::pair<Image<Vec3>, Image<double>> render_normal_distance(const CameraModel& cam,
                                                             const GaussianScene& scene,
                                                             const RenderSettings& settings) {
    RenderedView v = render_view(cam, scene, settings);
    return {std::move(v.normal), std::move(v.distance)};
}

Image<double> render_depth_plane(const CameraModel& cam, const GaussianScene& scene,
                                 const RenderSettings& settings) {
    RenderSettings s = settings;
    s.depth_mode = DepthMode::Plane;
    return render_view(cam, scene, s).depth;
}

Image<std::int32_t> render_gaussian_map(const CameraModel& cam, const GaussianScene& scene,
                                        const RenderSettings& settings) {
    return render_view(cam, scene, settings).gmap;
}

} // namespace gsforge
