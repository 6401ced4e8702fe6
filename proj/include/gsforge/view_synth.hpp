// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/renderer.hpp"

#include <cstdint>
#include <vector>

namespace gsforge {

struct PerturbationConfig {
    double rot_jitter_max = 0.0;   // radians per axis
    double trans_jitter_max = 0.0; // world units per axis
    double scale_lo = 1.0, scale_hi = 1.0;
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

// Jittered copy of a training camera, fully determined by (seed, draw_index).
// Rotation jitter composes Rz*Ry*Rx on the left of rotation_wc; translation
// jitter adds per axis; the focal scale multiplies fx and fy only.
CameraModel perturb_camera(const CameraModel& cam, const PerturbationConfig& cfg,
                           std::uint64_t draw_index);

ViewStats compute_view_stats(const RenderedView& view, double tau_alpha, double tau_depth);

enum class FilterScope { Global, PerTrainView };

// Two-sigma rejection over the four view indicators. Population statistics;
// a zero-sigma metric rejects nothing. Throws InsufficientInputError for
// fewer than two candidates.
std::vector<std::size_t> filter_candidates(const std::vector<ViewStats>& stats);

struct SynthesizedViews {
    std::vector<CameraModel> cameras;   // accepted and truncated, (train, draw) order
    std::size_t requested = 0;          // extra_ratio * |train|
    std::size_t accepted = 0;           // survivors before truncation
    std::size_t candidates = 0;
    std::size_t shortfall = 0;          // requested - |cameras| when short
};

struct SynthSettings {
    PerturbationConfig perturb;
    int per_view_count = 4;
    double extra_ratio = 1.0;
    FilterScope scope = FilterScope::Global;

    void validate() const;
};

// Generates candidates per train camera, renders their stats, applies the
// pre-rendering check and truncates to extra_ratio * |train|. Never pads:
// shortfall is reported in the result.
SynthesizedViews synthesize_views(const GaussianScene& scene,
                                  const std::vector<CameraModel>& train_cams,
                                  const SynthSettings& synth, const RenderSettings& render);

} // namespace gsforge
