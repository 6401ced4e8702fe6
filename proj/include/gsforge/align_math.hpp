// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace gsforge {

constexpr int kGaussianFeatureDim = 59;

// Explicit per-primitive attribute vector:
// position(3) | opacity(1) | standardized log-scales(3) | quaternion(4) | sh(48)
struct GaussianFeature {
    std::array<double, kGaussianFeatureDim> v{};

    static constexpr int kPosition = 0;
    static constexpr int kOpacity = 3;
    static constexpr int kScale = 4;
    static constexpr int kRotation = 7;
    static constexpr int kSh = 11;
};

using Embedding = Eigen::VectorXd; // L2-normalized

// Fixed-shape pairwise tree sum; the reduction order depends only on the
// length, never on scheduling.
double tree_sum(const std::vector<double>& values);

struct SceneScaleNormalization {
    std::vector<Vec3> standardized_log_scales; // one per primitive
    ScaleStats stats;                          // mean/std of per-primitive mean log-scale
};

// Per-axis log-scale standardization by the scene-level statistics of
// log((sx+sy+sz)/3). Sigma below 1e-8 is floored to keep outputs finite.
// Throws InsufficientInputError on an empty scene.
SceneScaleNormalization normalize_scene_scales(const GaussianScene& scene);

ScaleStats compute_scale_stats(const GaussianScene& scene);

GaussianFeature assemble_gaussian_feature(const ActivatedPrimitive& p, const ScaleStats& stats);

// Mean negative log-likelihood over supervised correlation entries.
// Throws InvalidInputError on nonpositive supervised entries and
// InsufficientInputError on an empty match set.
double nll_match_loss(const Eigen::MatrixXd& scores,
                      const std::vector<std::pair<int, int>>& gt_matches);

// InfoNCE with the voxel embedding as the anchor and the two patch
// embeddings as positives; the denominator runs over positives plus
// negatives, max-subtraction stabilized. Throws ConfigError for tau <= 0.
double infonce_voxel_loss(const Embedding& voxel, const Embedding& patch_a,
                          const Embedding& patch_b, const std::vector<Embedding>& negatives,
                          double tau);

// Mirror of the voxel loss with a patch embedding as the anchor and
// {voxel, other patch} as positives.
double infonce_patch_loss(const Embedding& anchor_patch, const Embedding& voxel,
                          const Embedding& other_patch, const std::vector<Embedding>& negatives,
                          double tau);

enum class NegativePool { IntraScene, CrossScene };

struct AlignmentAnchor {
    Embedding voxel;
    Embedding patch_a;
    Embedding patch_b;
    std::int32_t scene_id = 0;
};

// lambda_v * mean(l_voxel) + lambda_q * mean((l_patchA + l_patchB) / 2),
// negatives drawn from the other anchors' embeddings within the pool.
double combined_infonce(const std::vector<AlignmentAnchor>& batch, double lambda_v,
                        double lambda_q, double tau, NegativePool pool);

using Rotation6D = std::array<double, 6>;

// First two rotation-matrix columns; q and -q map to the same output.
Rotation6D quaternion_to_6d(const Vec4& q);

// Gram-Schmidt reconstruction of the full rotation from its 6D form.
Mat3 rotation_from_6d(const Rotation6D& r);

struct AttributeLossResult {
    double regression = 0.0;
    double consistency = 0.0;
    double total = 0.0;
};

struct AttributeLossWeights {
    double regression = 1.0;
    double consistency = 1.0;
};

// Per-slice L1 regression of both views' predictions against their ground
// truth plus a cross-view consistency term; rotation slices are compared
// in 6D form.
AttributeLossResult attribute_loss(const GaussianFeature& pred_a, const GaussianFeature& pred_b,
                                   const GaussianFeature& gt_a, const GaussianFeature& gt_b,
                                   const AttributeLossWeights& weights = {});

} // namespace gsforge
