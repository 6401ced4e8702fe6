// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/core_types.hpp"

#include "gsforge/error.hpp"

#include <cmath>

namespace gsforge {

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double sigmoid_inverse(double y) { return std::log(y / (1.0 - y)); }

Mat3 ActivatedPrimitive::rotation_matrix() const {
    const double w = rotation[0], x = rotation[1], y = rotation[2], z = rotation[3];
    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) {
        throw InvalidInputError("camera '" + view_id + "': focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
        throw InvalidInputError("camera '" + view_id + "': non-positive image size");
    }
    if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
        throw InvalidInputError("camera '" + view_id + "': principal point outside the image");
    }
    if (!rotation_wc.allFinite() || !translation_wc.allFinite()) {
        throw InvalidInputError("camera '" + view_id + "': non-finite pose");
    }
    const Mat3 rtr = rotation_wc.transpose() * rotation_wc;
    if ((rtr - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
        std::abs(rotation_wc.determinant() - 1.0) > 1e-9) {
        throw InvalidInputError("camera '" + view_id + "': rotation_wc is not a proper rotation");
    }
}

ActivatedPrimitive activate_primitive(const GaussianPrimitive& p) {
    if (!p.position.allFinite() || !p.log_scale.allFinite() || !p.rotation.allFinite() ||
        !std::isfinite(p.opacity_logit)) {
        throw InvalidInputError("primitive has non-finite fields");
    }
    for (double c : p.sh) {
        if (!std::isfinite(c)) {
            throw InvalidInputError("primitive has non-finite SH coefficients");
        }
    }
    const double qn = p.rotation.norm();
    if (!(qn > 0.0) || !std::isfinite(qn)) {
        throw InvalidInputError("primitive quaternion has zero norm");
    }

    ActivatedPrimitive a;
    a.position = p.position;
    a.scale = p.log_scale.array().exp();
    // Already-unit quaternions pass through unchanged (activation idempotence).
    a.rotation = std::abs(qn - 1.0) <= 1e-12 ? p.rotation : Vec4(p.rotation / qn);
    a.opacity = sigmoid(p.opacity_logit);
    a.sh = p.sh;
    return a;
}

Mat3 covariance_of(const ActivatedPrimitive& p) {
    const Mat3 r = p.rotation_matrix();
    const Mat3 rs = r * p.scale.asDiagonal();
    return rs * rs.transpose();
}

double evaluate_gaussian(const ActivatedPrimitive& p, const Vec3& x) {
    if (p.scale.minCoeff() <= kScaleFloor) {
        throw DegenerateError("covariance is degenerate: scale at or below 1e-12");
    }
    // Mahalanobis form via the rotation: q = |S^-1 R^T (x - mu)|^2
    const Vec3 local = p.rotation_matrix().transpose() * (x - p.position);
    const Vec3 scaled = local.array() / p.scale.array();
    return std::exp(-0.5 * scaled.squaredNorm());
}

int smallest_scale_axis(const Vec3& scale) {
    int axis = 0;
    for (int k = 1; k < 3; ++k) {
        if (scale[k] < scale[axis]) {
            axis = k;
        }
    }
    return axis;
}

Vec3 plane_normal_of(const ActivatedPrimitive& p) {
    return p.rotation_matrix().col(smallest_scale_axis(p.scale)).normalized();
}

std::vector<ActivatedPrimitive> activate_scene(const GaussianScene& scene) {
    std::vector<ActivatedPrimitive> out;
    out.reserve(scene.primitives.size());
    for (const auto& p : scene.primitives) {
        out.push_back(activate_primitive(p));
    }
    return out;
}

} // namespace gsforge
