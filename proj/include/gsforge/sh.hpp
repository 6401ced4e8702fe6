// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"

#include <array>

namespace gsforge {

// Degree-3 real SH basis evaluated at a unit direction, reference 3DGS
// sign convention (16 values, band-major).
std::array<double, 16> sh_basis(const Vec3& dir);

// View-dependent color: per channel c = dot(sh[c], basis) + 0.5, clamped
// to [0, 1]. sh is channel-major, 16 coefficients per channel.
Vec3 eval_sh_color(const std::array<double, kShCoeffs>& sh, const Vec3& view_dir);

} // namespace gsforge
