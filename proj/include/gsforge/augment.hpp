// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"
#include "gsforge/image.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace gsforge {

// Per-channel affine: gain ~ U(gain range), bias ~ U(bias range).
struct ColorJitterOp {
    double gain_lo = 1.0, gain_hi = 1.0;
    double bias_lo = 0.0, bias_hi = 0.0;
};

// v -> v^gamma per channel, gamma ~ U(lo, hi).
struct GammaOp {
    double lo = 1.0, hi = 1.0;
};

// Length-L line kernel at a drawn angle, L ~ U{1..max_len}.
struct MotionBlurOp {
    int max_len = 1;
};

// Seeded Gaussian with a luminance-dependent scale, strength ~ U(lo, hi).
struct IsoNoiseOp {
    double strength_lo = 0.0, strength_hi = 0.0;
};

using AugmentOp = std::variant<ColorJitterOp, GammaOp, MotionBlurOp, IsoNoiseOp>;

struct AugmentRecipe {
    std::vector<AugmentOp> ops; // applied in order

    void validate() const; // throws ConfigError on invalid ranges
};

// Deterministic under (recipe, seed); output clamped to [0, 1].
Image<Vec3> augment_image(const Image<Vec3>& rgb, const AugmentRecipe& recipe, std::uint64_t seed);

} // namespace gsforge
