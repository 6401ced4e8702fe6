// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/sh.hpp"

#include <algorithm>

namespace gsforge {

namespace {

constexpr double kShC0 = 0.28209479177387814;
constexpr double kShC1 = 0.4886025119029199;
constexpr double kShC2[] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                            -1.0925484305920792, 0.5462742152960396};
constexpr double kShC3[] = {-0.5900435899266435, 2.890611442640554,  -0.4570457994644658,
                            0.3731763325901154,  -0.4570457994644658, 1.445305721320277,
                            -0.5900435899266435};

} // namespace

std::array<double, 16> sh_basis(const Vec3& dir) {
    const double x = dir.x(), y = dir.y(), z = dir.z();
    const double xx = x * x, yy = y * y, zz = z * z;
    std::array<double, 16> b;
    b[0] = kShC0;
    b[1] = -kShC1 * y;
    b[2] = kShC1 * z;
    b[3] = -kShC1 * x;
    b[4] = kShC2[0] * x * y;
    b[5] = kShC2[1] * y * z;
    b[6] = kShC2[2] * (2.0 * zz - xx - yy);
    b[7] = kShC2[3] * x * z;
    b[8] = kShC2[4] * (xx - yy);
    b[9] = kShC3[0] * y * (3.0 * xx - yy);
    b[10] = kShC3[1] * x * y * z;
    b[11] = kShC3[2] * y * (4.0 * zz - xx - yy);
    b[12] = kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy);
    b[13] = kShC3[4] * x * (4.0 * zz - xx - yy);
    b[14] = kShC3[5] * z * (xx - yy);
    b[15] = kShC3[6] * x * (xx - 3.0 * yy);
    return b;
}

Vec3 eval_sh_color(const std::array<double, kShCoeffs>& sh, const Vec3& view_dir) {
    const auto basis = sh_basis(view_dir);
    Vec3 rgb;
    for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        for (int k = 0; k < 16; ++k) {
            v += sh[c * 16 + k] * basis[k];
        }
        rgb[c] = std::clamp(v + 0.5, 0.0, 1.0);
    }
    return rgb;
}

} // namespace gsforge
