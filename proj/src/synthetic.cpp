// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/synthetic.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"

#include <cmath>

namespace gsforge {

SyntheticKind synthetic_kind_from_name(const std::string& name) {
    if (name == "plane") return SyntheticKind::Plane;
    if (name == "two_planes") return SyntheticKind::TwoPlanes;
    if (name == "sphere_shell") return SyntheticKind::SphereShell;
    if (name == "random_cloud") return SyntheticKind::RandomCloud;
    throw ConfigError("unknown synthetic scene kind '" + name +
                      "' (expected plane|two_planes|sphere_shell|random_cloud)");
}

const char* synthetic_kind_name(SyntheticKind kind) {
    switch (kind) {
        case SyntheticKind::Plane: return "plane";
        case SyntheticKind::TwoPlanes: return "two_planes";
        case SyntheticKind::SphereShell: return "sphere_shell";
        case SyntheticKind::RandomCloud: return "random_cloud";
    }
    return "unknown";
}

namespace {

std::array<double, kShCoeffs> seeded_dc_sh(CounterRng& rng) {
    std::array<double, kShCoeffs> sh{};
    for (int c = 0; c < 3; ++c) {
        sh[c * 16] = rng.uniform(-0.8, 0.8);
    }
    return sh;
}

GaussianPrimitive surface_primitive(const Vec3& pos, const Vec4& rotation, double tangential,
                                    double flatten, double opacity_logit, CounterRng& rng) {
    GaussianPrimitive p;
    p.position = pos;
    p.log_scale = Vec3(std::log(tangential), std::log(tangential), std::log(tangential * flatten));
    p.rotation = rotation;
    p.opacity_logit = opacity_logit;
    p.sh = seeded_dc_sh(rng);
    return p;
}

// Quaternion rotating local +z onto dir (unit).
Vec4 quat_z_to(const Vec3& dir) {
    const Vec3 z(0.0, 0.0, 1.0);
    const double d = z.dot(dir);
    if (d < -1.0 + 1e-12) {
        return Vec4(0.0, 1.0, 0.0, 0.0); // 180 degrees about x
    }
    const Vec3 axis = z.cross(dir);
    Vec4 q(1.0 + d, axis.x(), axis.y(), axis.z());
    return q / q.norm();
}

// World point at camera-frame depth t along the pixel ray.
struct Ray {
    Vec3 origin;   // camera center, world
    Vec3 dir;      // world direction of K^-1 p~, z_cam-normalized
};

Ray pixel_ray(const CameraModel& cam, double x, double y) {
    return {cam.center(), cam.rotation_wc.transpose() * cam.ray_dir(x, y)};
}

} // namespace

SyntheticScene make_synthetic_scene(SyntheticKind kind, const SyntheticParams& params,
                                    std::uint64_t seed) {
    SyntheticScene out;
    out.kind = kind;
    out.params = params;
    out.scene.scene_id = std::string(synthetic_kind_name(kind)) + "_" + std::to_string(seed);
    CounterRng rng(seed, 0x7363656e); // "scen"

    switch (kind) {
        case SyntheticKind::Plane: {
            const double spacing = 2.0 * params.extent / params.grid_n;
            const double tangential = spacing * 0.75;
            for (int i = 0; i < params.grid_n; ++i) {
                for (int j = 0; j < params.grid_n; ++j) {
                    const double x = -params.extent + (i + 0.5) * spacing;
                    const double y = -params.extent + (j + 0.5) * spacing;
                    out.scene.primitives.push_back(
                        surface_primitive(Vec3(x, y, params.plane_z), Vec4(1, 0, 0, 0), tangential,
                                          params.flatten, params.opacity_logit, rng));
                }
            }
            const SyntheticParams p = params;
            out.oracle_depth = [p](const CameraModel& cam, double px, double py) -> double {
                const Ray r = pixel_ray(cam, px, py);
                if (std::abs(r.dir.z()) < 1e-12) {
                    return 0.0;
                }
                const double t = (p.plane_z - r.origin.z()) / r.dir.z();
                if (!(t > 0.0)) {
                    return 0.0;
                }
                const Vec3 hit = r.origin + t * r.dir;
                if (std::abs(hit.x()) > p.extent || std::abs(hit.y()) > p.extent) {
                    return 0.0;
                }
                return t;
            };
            break;
        }
        case SyntheticKind::TwoPlanes: {
            const double spacing = 2.0 * params.extent / params.grid_n;
            const double tangential = spacing * 0.75;
            for (int i = 0; i < params.grid_n; ++i) {
                for (int j = 0; j < params.grid_n; ++j) {
                    const double x = -params.extent + (i + 0.5) * spacing;
                    const double y = -params.extent + (j + 0.5) * spacing;
                    const double z = x <= params.split_x ? params.plane_z : params.plane_z2;
                    out.scene.primitives.push_back(
                        surface_primitive(Vec3(x, y, z), Vec4(1, 0, 0, 0), tangential,
                                          params.flatten, params.opacity_logit, rng));
                }
            }
            const SyntheticParams p = params;
            out.oracle_depth = [p](const CameraModel& cam, double px, double py) -> double {
                const Ray r = pixel_ray(cam, px, py);
                if (std::abs(r.dir.z()) < 1e-12) {
                    return 0.0;
                }
                double best = 0.0;
                for (double z : {p.plane_z, p.plane_z2}) {
                    const double t = (z - r.origin.z()) / r.dir.z();
                    if (!(t > 0.0)) {
                        continue;
                    }
                    const Vec3 hit = r.origin + t * r.dir;
                    if (std::abs(hit.y()) > p.extent || std::abs(hit.x()) > p.extent) {
                        continue;
                    }
                    const bool near_region = hit.x() <= p.split_x;
                    if ((z == p.plane_z) != near_region) {
                        continue;
                    }
                    if (best == 0.0 || t < best) {
                        best = t;
                    }
                }
                return best;
            };
            break;
        }
        case SyntheticKind::SphereShell: {
            const int n = params.grid_n * params.grid_n;
            const double golden = 3.141592653589793 * (3.0 - std::sqrt(5.0));
            const double tangential =
                2.0 * params.radius * std::sqrt(3.141592653589793 / n) * 0.75;
            for (int i = 0; i < n; ++i) {
                // Fibonacci sphere point
                const double z = 1.0 - 2.0 * (i + 0.5) / n;
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = golden * i;
                const Vec3 radial(r * std::cos(phi), r * std::sin(phi), z);
                out.scene.primitives.push_back(surface_primitive(
                    params.sphere_center + params.radius * radial, quat_z_to(radial), tangential,
                    params.flatten, params.opacity_logit, rng));
            }
            const SyntheticParams p = params;
            out.oracle_depth = [p](const CameraModel& cam, double px, double py) -> double {
                const Ray r = pixel_ray(cam, px, py);
                const Vec3 oc = r.origin - p.sphere_center;
                const double a = r.dir.squaredNorm();
                const double b = 2.0 * oc.dot(r.dir);
                const double c = oc.squaredNorm() - p.radius * p.radius;
                const double disc = b * b - 4.0 * a * c;
                if (disc < 0.0) {
                    return 0.0;
                }
                const double sq = std::sqrt(disc);
                const double t0 = (-b - sq) / (2.0 * a);
                const double t1 = (-b + sq) / (2.0 * a);
                if (t0 > 0.0) {
                    return t0;
                }
                if (t1 > 0.0) {
                    return t1;
                }
                return 0.0;
            };
            break;
        }
        case SyntheticKind::RandomCloud: {
            for (int i = 0; i < params.count; ++i) {
                GaussianPrimitive p;
                p.position = Vec3(rng.uniform(-params.cloud_extent, params.cloud_extent),
                                  rng.uniform(-params.cloud_extent, params.cloud_extent),
                                  rng.uniform(params.cloud_z_lo, params.cloud_z_hi));
                p.log_scale = Vec3(rng.uniform(std::log(0.05), std::log(0.35)),
                                   rng.uniform(std::log(0.05), std::log(0.35)),
                                   rng.uniform(std::log(0.05), std::log(0.35)));
                Vec4 q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
                const double qn = q.norm();
                p.rotation = qn > 1e-9 ? Vec4(q / qn) : Vec4(1, 0, 0, 0);
                p.opacity_logit = rng.uniform(-2.0, 3.0);
                p.sh = seeded_dc_sh(rng);
                for (int k = 0; k < kShCoeffs; ++k) {
                    if (k % 16 != 0) {
                        p.sh[k] = rng.uniform(-0.15, 0.15);
                    }
                }
                out.scene.primitives.push_back(p);
            }
            break;
        }
    }
    return out;
}

Image<double> oracle_depth_map(const SyntheticScene& scene, const CameraModel& cam) {
    if (!scene.oracle_depth) {
        throw InvalidInputError("scene kind '" + std::string(synthetic_kind_name(scene.kind)) +
                                "' has no analytic depth oracle");
    }
    Image<double> depth(cam.width, cam.height, 0.0);
    for (int y = 0; y < cam.height; ++y) {
        for (int x = 0; x < cam.width; ++x) {
            depth.at(x, y) =
                scene.oracle_depth(cam, static_cast<double>(x), static_cast<double>(y));
        }
    }
    return depth;
}

CameraModel make_lookat_camera(const Vec3& eye, const Vec3& target, const Vec3& up_hint, double fx,
                               double fy, int width, int height, const std::string& view_id) {
    const Vec3 z = (target - eye).normalized();
    Vec3 x = up_hint.cross(z);
    if (x.norm() < 1e-9) {
        x = Vec3(1.0, 0.0, 0.0).cross(z);
        if (x.norm() < 1e-9) {
            x = Vec3(0.0, 1.0, 0.0).cross(z);
        }
    }
    x.normalize();
    const Vec3 y = z.cross(x);

    CameraModel cam;
    cam.fx = fx;
    cam.fy = fy;
    cam.cx = width / 2.0 - 0.5;
    cam.cy = height / 2.0 - 0.5;
    cam.width = width;
    cam.height = height;
    cam.rotation_wc.row(0) = x;
    cam.rotation_wc.row(1) = y;
    cam.rotation_wc.row(2) = z;
    cam.translation_wc = -(cam.rotation_wc * eye);
    cam.view_id = view_id;
    return cam;
}

std::vector<CameraModel> synthetic_camera_ring(const SyntheticScene& scene, int count, int width,
                                               int height, double focal, double jitter_scale,
                                               std::uint64_t seed) {
    Vec3 target(0.0, 0.0, scene.params.plane_z);
    double standoff = scene.params.plane_z;
    if (scene.kind == SyntheticKind::SphereShell) {
        target = scene.params.sphere_center;
        standoff = scene.params.sphere_center.z();
    } else if (scene.kind == SyntheticKind::TwoPlanes) {
        target = Vec3(0.0, 0.0, 0.5 * (scene.params.plane_z + scene.params.plane_z2));
        standoff = scene.params.plane_z;
    } else if (scene.kind == SyntheticKind::RandomCloud) {
        target = Vec3(0.0, 0.0, 0.5 * (scene.params.cloud_z_lo + scene.params.cloud_z_hi));
        standoff = scene.params.cloud_z_lo;
    }

    std::vector<CameraModel> cams;
    CounterRng rng(seed, 0x72696e67); // "ring"
    for (int i = 0; i < count; ++i) {
        const double angle = 2.0 * 3.141592653589793 * i / std::max(1, count);
        const double lateral = 0.35 * standoff * jitter_scale;
        const Vec3 eye(lateral * std::cos(angle) + rng.uniform(-0.05, 0.05) * standoff,
                       lateral * std::sin(angle) + rng.uniform(-0.05, 0.05) * standoff,
                       rng.uniform(-0.15, 0.15) * standoff);
        char id[32];
        std::snprintf(id, sizeof(id), "view_%03d", i);
        cams.push_back(make_lookat_camera(eye, target, Vec3(0.0, 1.0, 0.0), focal, focal, width,
                                          height, id));
    }
    return cams;
}

} // namespace gsforge
