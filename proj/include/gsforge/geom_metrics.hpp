// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/labeler.hpp"

#include <string>
#include <vector>

namespace gsforge {

// Pose-derived fundamental matrix, Frobenius norm 1, sign fixed by the
// first nonzero entry (row-major scan) being positive.
struct FundamentalMatrix {
    Mat3 f = Mat3::Zero();
};

// F = K_B^-T [t_rel]x R_rel K_A^-1. Throws DegenerateError on a zero
// baseline, where epipolar error is undefined.
FundamentalMatrix fundamental_from_cameras(const CameraModel& cam_a, const CameraModel& cam_b);

Mat3 cross_matrix(const Vec3& v);

struct EpipolarStats {
    std::vector<double> errors; // per evaluated match, NaN where skipped
    double mean = 0.0;
    double stddev = 0.0; // population, over evaluated matches
    std::size_t evaluated = 0;
    std::size_t skipped_degenerate = 0;
};

// Symmetric point-to-epipolar-line distance. Matches whose line gradients
// vanish (< 1e-12) are skipped and counted, never silently dropped.
// Throws InsufficientInputError on an empty match list.
EpipolarStats symmetric_epipolar_error(const FundamentalMatrix& fm,
                                       const std::vector<Match>& matches);

struct ReprojectionStats {
    double mean = 0.0; // mean |d_hat' - d'| / d' over valid matches
    std::size_t n_valid = 0;
    std::size_t n_total = 0;
};

ReprojectionStats relative_reprojection_error(const std::vector<Match>& matches,
                                              const Image<double>& depth_a,
                                              const Image<double>& depth_b,
                                              const CameraModel& cam_a, const CameraModel& cam_b);

struct DepthL1Result {
    double loss = 0.0;
    double scale = 1.0; // a
    double shift = 0.0; // b
};

enum class PriorAlignment { LeastSquares, MedianRatio };

// L1 depth-regularization value against an affine-aligned prior. The
// closed-form scale+shift fit absorbs any affine prior transformation.
// Throws InsufficientInputError when the mask has fewer than 2 pixels.
DepthL1Result depth_l1_regularization(const Image<double>& rendered, const Image<double>& prior,
                                      const Image<std::uint8_t>& mask,
                                      PriorAlignment alignment = PriorAlignment::LeastSquares);

struct PairQuality {
    std::string view_a, view_b;
    double overlap = 0.0;
    int bin = -1;
    std::size_t n_matches = 0;
    std::size_t n_skipped = 0;
    double epi_mean_px = 0.0, epi_std_px = 0.0;
    double epi_mean_norm = 0.0, epi_std_norm = 0.0; // normalized image coordinates
    double rel_mean = 0.0;
    std::size_t rel_valid = 0;
};

struct GtQualityReport {
    std::string depth_label;
    std::vector<PairQuality> pairs;
    std::vector<std::size_t> pairs_per_bin;

    // Aggregates, recomputable from the per-pair rows.
    double epi_mean_px = 0.0;          // pooled over matches
    double epi_std_across_pairs_px = 0.0;
    double epi_mean_norm = 0.0;
    double epi_std_across_pairs_norm = 0.0;
    double rel_mean = 0.0;
    double rel_std_across_pairs = 0.0;
    std::size_t total_matches = 0;
    std::size_t total_skipped = 0;
};

struct GtQualitySettings {
    int grid_step = 10;
    std::vector<OverlapBin> bins = {{0.1, 0.3}, {0.3, 0.5}, {0.5, 0.7}};
    std::size_t n_pairs = 100; // split evenly across bins (1:1:1)
    std::uint64_t seed = 0;
    double rel_tol = 0.05;
    double z_near = 0.01;
};

// Pair-sampled label-quality evaluation: overlap binning, even per-bin pair
// selection, grid-sampled matches, epipolar + reprojection statistics.
GtQualityReport evaluate_gt_quality(const std::vector<LabeledView>& views,
                                    const GtQualitySettings& settings,
                                    const std::string& depth_label);

} // namespace gsforge
