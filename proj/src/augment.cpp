// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/augment.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"

#include <algorithm>
#include <cmath>

namespace gsforge {

namespace {

Vec3 clamp01(const Vec3& v) {
    return Vec3(std::clamp(v.x(), 0.0, 1.0), std::clamp(v.y(), 0.0, 1.0),
                std::clamp(v.z(), 0.0, 1.0));
}

Vec3 bilinear_vec3(const Image<Vec3>& img, double x, double y) {
    const double cx = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
    const double cy = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
    int ix = std::clamp(static_cast<int>(std::floor(cx)), 0, img.width() - 2);
    int iy = std::clamp(static_cast<int>(std::floor(cy)), 0, img.height() - 2);
    const double dx = cx - ix;
    const double dy = cy - iy;
    return (1.0 - dy) * ((1.0 - dx) * img.at(ix, iy) + dx * img.at(ix + 1, iy)) +
           dy * ((1.0 - dx) * img.at(ix, iy + 1) + dx * img.at(ix + 1, iy + 1));
}

struct Applier {
    Image<Vec3>& img;
    CounterRng& rng;

    void operator()(const ColorJitterOp& op) const {
        Vec3 gain, bias;
        for (int c = 0; c < 3; ++c) {
            gain[c] = rng.uniform(op.gain_lo, op.gain_hi);
        }
        for (int c = 0; c < 3; ++c) {
            bias[c] = rng.uniform(op.bias_lo, op.bias_hi);
        }
        for (auto& v : img) {
            v = clamp01(Vec3(gain.array() * v.array() + bias.array()));
        }
    }

    void operator()(const GammaOp& op) const {
        const double gamma = rng.uniform(op.lo, op.hi);
        for (auto& v : img) {
            for (int c = 0; c < 3; ++c) {
                v[c] = std::pow(std::clamp(v[c], 0.0, 1.0), gamma);
            }
        }
    }

    void operator()(const MotionBlurOp& op) const {
        const int len = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(op.max_len))) + 1;
        const double angle = rng.uniform(0.0, 3.141592653589793);
        if (len <= 1) {
            return;
        }
        const Vec2 dir(std::cos(angle), std::sin(angle));
        Image<Vec3> src = img;
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                Vec3 acc = Vec3::Zero();
                for (int k = 0; k < len; ++k) {
                    const double off = k - (len - 1) / 2.0;
                    acc += bilinear_vec3(src, x + off * dir.x(), y + off * dir.y());
                }
                img.at(x, y) = clamp01(acc / len);
            }
        }
    }

    void operator()(const IsoNoiseOp& op) const {
        const double strength = rng.uniform(op.strength_lo, op.strength_hi);
        for (auto& v : img) {
            const double lum = (v.x() + v.y() + v.z()) / 3.0;
            const double sigma = strength * std::sqrt(std::max(lum, 1e-4));
            Vec3 noise;
            for (int c = 0; c < 3; ++c) {
                noise[c] = rng.normal() * sigma;
            }
            v = clamp01(v + noise);
        }
    }
};

struct Validator {
    void operator()(const ColorJitterOp& op) const {
        if (op.gain_lo > op.gain_hi || op.bias_lo > op.bias_hi || op.gain_lo < 0.0) {
            throw ConfigError("color jitter ranges invalid");
        }
    }
    void operator()(const GammaOp& op) const {
        if (!(op.lo > 0.0) || op.lo > op.hi) {
            throw ConfigError("gamma range must satisfy 0 < lo <= hi");
        }
    }
    void operator()(const MotionBlurOp& op) const {
        if (op.max_len < 1) {
            throw ConfigError("motion blur length must be at least 1");
        }
    }
    void operator()(const IsoNoiseOp& op) const {
        if (op.strength_lo < 0.0 || op.strength_lo > op.strength_hi) {
            throw ConfigError("ISO noise strength range invalid");
        }
    }
};

} // namespace

void AugmentRecipe::validate() const {
    for (const AugmentOp& op : ops) {
        std::visit(Validator{}, op);
    }
}

Image<Vec3> augment_image(const Image<Vec3>& rgb, const AugmentRecipe& recipe,
                          std::uint64_t seed) {
    recipe.validate();
    Image<Vec3> out = rgb;
    for (std::size_t i = 0; i < recipe.ops.size(); ++i) {
        CounterRng rng(seed, 0x61756700ull + i); // "aug" + op index
        std::visit(Applier{out, rng}, recipe.ops[i]);
    }
    return out;
}

} // namespace gsforge
