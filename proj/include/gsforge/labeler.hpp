// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/core_types.hpp"
#include "gsforge/image.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gsforge {

// Per-pixel warp of view A into view B. Invalid pixels carry NaN coords.
struct DenseCorrespondence {
    std::string source_id;
    std::string target_id;
    Image<Vec2> target_coords;    // sub-pixel coordinates in B
    Image<double> projected_depth; // camera-B depth of the warped point
    Image<std::uint8_t> valid;
    std::int64_t source_valid_count = 0; // pixels of A with valid depth

    std::int64_t valid_count() const;
};

struct Match {
    Vec2 p_a = Vec2::Zero();
    Vec2 p_b = Vec2::Zero();
    bool same_primitive = false;
};

struct PairRecord {
    std::string view_a;
    std::string view_b;
    double overlap_ab = 0.0;
    double overlap_ba = 0.0;
    double overlap = 0.0; // min of the two directions
    int bin = -1;         // index into the configured overlap bins, -1 when outside
    std::vector<Match> matches;
};

// Back-projects every valid depth pixel of A, transforms by the relative
// pose and projects into B. Off-image, behind-camera and sentinel pixels
// come back invalid; invalidity is data, not an error.
DenseCorrespondence warp_depth(const Image<double>& depth_a, const CameraModel& cam_a,
                               const CameraModel& cam_b, double z_near = 0.01);

// Occlusion filter: keeps pixels whose projected depth agrees with B's own
// depth map within rel_tol (bilinear lookup). Throws ConfigError for
// rel_tol <= 0.
Image<std::uint8_t> mutual_consistency_mask(const DenseCorrespondence& corr,
                                            const Image<double>& depth_b, double rel_tol);

// In-place AND of the correspondence validity with a mask.
void apply_mask(DenseCorrespondence& corr, const Image<std::uint8_t>& mask);

// Fraction of A's valid-depth pixels that survived warp + consistency.
double compute_overlap(const DenseCorrespondence& corr);

struct GridSampling {
    int step = 10; // pixels
};
struct RandomSampling {
    std::size_t count = 512;
    std::uint64_t seed = 0;
};

std::vector<Match> sample_gt_matches(const DenseCorrespondence& corr, const GridSampling& mode);
std::vector<Match> sample_gt_matches(const DenseCorrespondence& corr, const RandomSampling& mode);

// Flags matches whose nearest-pixel Gaussian map entries agree and are
// not the empty sentinel.
void mark_same_primitive(std::vector<Match>& matches, const Image<std::int32_t>& gmap_a,
                         const Image<std::int32_t>& gmap_b);

struct OverlapBin {
    double lo = 0.0;
    double hi = 1.0; // half-open [lo, hi)
};

// One view's labeling inputs.
struct LabeledView {
    std::string view_id;
    CameraModel camera;
    Image<double> depth;
    Image<std::int32_t> gmap; // may be empty
};

struct ManifestSettings {
    std::vector<OverlapBin> bins = {{0.1, 0.3}, {0.3, 0.5}, {0.5, 0.7}};
    double rel_tol = 0.05;
    int grid_step = 10;
    double z_near = 0.01;
    bool keep_unbinned = false;
};

// Scores every unordered pair, assigns overlap bins and samples matches
// for pairs that land in a bin. Deterministic ordering by (i, j).
std::vector<PairRecord> build_pair_manifest(const std::vector<LabeledView>& views,
                                            const ManifestSettings& settings);

int bin_of(double overlap, const std::vector<OverlapBin>& bins);

} // namespace gsforge
