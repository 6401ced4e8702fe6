// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gsforge {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

constexpr int kShCoeffs = 48; // 3 channels x 16 degree-3 SH coefficients
constexpr double kScaleFloor = 1e-12;

// One splat as stored on disk: pre-activation values following the common
// 3DGS PLY convention (log scales, opacity logit, raw quaternion).
struct GaussianPrimitive {
    Vec3 position = Vec3::Zero();
    Vec3 log_scale = Vec3::Zero();
    Vec4 rotation = Vec4(1, 0, 0, 0); // (w, x, y, z), unnormalized as stored
    double opacity_logit = 0.0;
    std::array<double, kShCoeffs> sh{}; // sh[channel * 16 + coeff], coeff 0 = DC
};

// Post-activation view of a primitive. Activation is always explicit.
struct ActivatedPrimitive {
    Vec3 position = Vec3::Zero();
    Vec3 scale = Vec3::Ones();        // exp(log_scale), componentwise > 0
    Vec4 rotation = Vec4(1, 0, 0, 0); // unit quaternion (w, x, y, z)
    double opacity = 0.5;             // sigmoid(opacity_logit), in (0, 1)
    std::array<double, kShCoeffs> sh{};

    Mat3 rotation_matrix() const;
};

struct ScaleStats {
    double mean = 0.0;
    double stddev = 1.0;
};

struct GaussianScene {
    std::vector<GaussianPrimitive> primitives; // ordering is identity: index i is primitive i
    std::string scene_id;
    std::optional<ScaleStats> scale_stats;
};

struct CameraModel {
    double fx = 1.0, fy = 1.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;
    Mat3 rotation_wc = Mat3::Identity(); // world-to-camera
    Vec3 translation_wc = Vec3::Zero();  // camera frame
    std::string view_id;

    Vec3 center() const { return -(rotation_wc.transpose() * translation_wc); }
    Mat3 rotation_cw() const { return rotation_wc.transpose(); }
    Vec3 to_camera(const Vec3& p_world) const { return rotation_wc * p_world + translation_wc; }
    Vec3 to_world(const Vec3& p_cam) const {
        return rotation_wc.transpose() * (p_cam - translation_wc);
    }
    Vec2 project(const Vec3& p_cam) const {
        return Vec2(fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy);
    }
    // K^-1 (u, v, 1)
    Vec3 ray_dir(double u, double v) const { return Vec3((u - cx) / fx, (v - cy) / fy, 1.0); }

    // Throws InvalidInputError unless the intrinsics are positive, the
    // principal point is interior, and rotation_wc is a proper rotation
    // within 1e-9.
    void validate() const;
};

double sigmoid(double x);
double sigmoid_inverse(double y);

// Scales, opacity and quaternion activation. Throws InvalidInputError on
// non-finite fields or a zero quaternion.
ActivatedPrimitive activate_primitive(const GaussianPrimitive& p);

// Sigma = R S S^T R^T
Mat3 covariance_of(const ActivatedPrimitive& p);

// exp(-1/2 (x - mu)^T Sigma^-1 (x - mu)); throws DegenerateError when any
// scale is at or below the 1e-12 floor.
double evaluate_gaussian(const ActivatedPrimitive& p, const Vec3& x);

// Index of the smallest scale axis, ties to the lowest index.
int smallest_scale_axis(const Vec3& scale);

// World-frame unit normal: rotation column of the smallest scale axis.
Vec3 plane_normal_of(const ActivatedPrimitive& p);

std::vector<ActivatedPrimitive> activate_scene(const GaussianScene& scene);

} // namespace gsforge
