// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/renderer.hpp"

namespace gsforge {

// Naive single-threaded renderer: every pixel walks the full sorted
// primitive list with no tiling and no footprint tests. Slow on purpose;
// the tiled OpenMP path must match it bit for bit.
RenderBuffers reference_render_buffers(const CameraModel& cam, std::span<const Projected2D> sorted,
                                       const RenderSettings& settings);

RenderedView reference_render_view(const CameraModel& cam, const GaussianScene& scene,
                                   const RenderSettings& settings);

} // namespace gsforge
