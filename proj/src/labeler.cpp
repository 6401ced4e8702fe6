// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/labeler.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsforge {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::int64_t DenseCorrespondence::valid_count() const {
    return std::count(valid.begin(), valid.end(), std::uint8_t{1});
}

DenseCorrespondence warp_depth(const Image<double>& depth_a, const CameraModel& cam_a,
                               const CameraModel& cam_b, double z_near) {
    const int w = depth_a.width(), h = depth_a.height();
    DenseCorrespondence corr;
    corr.source_id = cam_a.view_id;
    corr.target_id = cam_b.view_id;
    corr.target_coords = Image<Vec2>(w, h, Vec2(kNaN, kNaN));
    corr.projected_depth = Image<double>(w, h, 0.0);
    corr.valid = Image<std::uint8_t>(w, h, 0);

    const Mat3 r_rel = cam_b.rotation_wc * cam_a.rotation_wc.transpose();
    const Vec3 t_rel = cam_b.translation_wc - r_rel * cam_a.translation_wc;

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double d = depth_a.at(x, y);
            if (!(d > 0.0)) {
                continue;
            }
            const Vec3 p_cam_a = d * cam_a.ray_dir(static_cast<double>(x), static_cast<double>(y));
            const Vec3 p_cam_b = r_rel * p_cam_a + t_rel;
            if (p_cam_b.z() <= z_near) {
                continue;
            }
            const Vec2 uv = cam_b.project(p_cam_b);
            if (!(uv.x() >= 0.0 && uv.x() <= cam_b.width - 1 && uv.y() >= 0.0 &&
                  uv.y() <= cam_b.height - 1)) {
                continue;
            }
            corr.target_coords.at(x, y) = uv;
            corr.projected_depth.at(x, y) = p_cam_b.z();
            corr.valid.at(x, y) = 1;
        }
    }

    std::int64_t src_valid = 0;
    for (double d : depth_a) {
        if (d > 0.0) {
            ++src_valid;
        }
    }
    corr.source_valid_count = src_valid;
    return corr;
}

Image<std::uint8_t> mutual_consistency_mask(const DenseCorrespondence& corr,
                                            const Image<double>& depth_b, double rel_tol) {
    if (!(rel_tol > 0.0)) {
        throw ConfigError("mutual consistency rel_tol must be positive");
    }
    const int w = corr.valid.width(), h = corr.valid.height();
    Image<std::uint8_t> mask(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!corr.valid.at(x, y)) {
                continue;
            }
            const Vec2 uv = corr.target_coords.at(x, y);
            if (!bilinear_taps_valid(depth_b, uv.x(), uv.y())) {
                continue;
            }
            const double db = bilinear(depth_b, uv.x(), uv.y());
            const double dp = corr.projected_depth.at(x, y);
            if (std::abs(dp - db) / db <= rel_tol) {
                mask.at(x, y) = 1;
            }
        }
    }
    return mask;
}

void apply_mask(DenseCorrespondence& corr, const Image<std::uint8_t>& mask) {
    for (int y = 0; y < corr.valid.height(); ++y) {
        for (int x = 0; x < corr.valid.width(); ++x) {
            if (corr.valid.at(x, y) && !mask.at(x, y)) {
                corr.valid.at(x, y) = 0;
                corr.target_coords.at(x, y) = Vec2(kNaN, kNaN);
                corr.projected_depth.at(x, y) = 0.0;
            }
        }
    }
}

double compute_overlap(const DenseCorrespondence& corr) {
    if (corr.source_valid_count == 0) {
        return 0.0;
    }
    return static_cast<double>(corr.valid_count()) /
           static_cast<double>(corr.source_valid_count);
}

std::vector<Match> sample_gt_matches(const DenseCorrespondence& corr, const GridSampling& mode) {
    if (mode.step < 1) {
        throw ConfigError("grid step must be at least 1");
    }
    std::vector<Match> out;
    for (int y = 0; y < corr.valid.height(); y += mode.step) {
        for (int x = 0; x < corr.valid.width(); x += mode.step) {
            if (corr.valid.at(x, y)) {
                out.push_back({Vec2(x, y), corr.target_coords.at(x, y), false});
            }
        }
    }
    return out;
}

std::vector<Match> sample_gt_matches(const DenseCorrespondence& corr, const RandomSampling& mode) {
    std::vector<std::pair<int, int>> candidates;
    for (int y = 0; y < corr.valid.height(); ++y) {
        for (int x = 0; x < corr.valid.width(); ++x) {
            if (corr.valid.at(x, y)) {
                candidates.emplace_back(x, y);
            }
        }
    }
    // Partial Fisher-Yates: deterministic sample without replacement.
    CounterRng rng(mode.seed, 0x6d617463); // "matc"
    const std::size_t take = std::min(mode.count, candidates.size());
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + rng.uniform_index(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
    }
    std::vector<Match> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const auto [x, y] = candidates[i];
        out.push_back({Vec2(x, y), corr.target_coords.at(x, y), false});
    }
    return out;
}

void mark_same_primitive(std::vector<Match>& matches, const Image<std::int32_t>& gmap_a,
                         const Image<std::int32_t>& gmap_b) {
    for (Match& m : matches) {
        m.same_primitive = false;
        const int xa = static_cast<int>(std::lround(m.p_a.x()));
        const int ya = static_cast<int>(std::lround(m.p_a.y()));
        const int xb = static_cast<int>(std::lround(m.p_b.x()));
        const int yb = static_cast<int>(std::lround(m.p_b.y()));
        if (!gmap_a.contains(xa, ya) || !gmap_b.contains(xb, yb)) {
            continue;
        }
        const std::int32_t ia = gmap_a.at(xa, ya);
        const std::int32_t ib = gmap_b.at(xb, yb);
        m.same_primitive = ia >= 0 && ia == ib;
    }
}

int bin_of(double overlap, const std::vector<OverlapBin>& bins) {
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (overlap >= bins[i].lo && overlap < bins[i].hi) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::vector<PairRecord> build_pair_manifest(const std::vector<LabeledView>& views,
                                            const ManifestSettings& settings) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < views.size(); ++i) {
        for (std::size_t j = i + 1; j < views.size(); ++j) {
            pairs.emplace_back(i, j);
        }
    }

    std::vector<PairRecord> records(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(pairs.size()); ++k) {
        const auto [i, j] = pairs[k];
        const LabeledView& a = views[i];
        const LabeledView& b = views[j];

        DenseCorrespondence ab = warp_depth(a.depth, a.camera, b.camera, settings.z_near);
        apply_mask(ab, mutual_consistency_mask(ab, b.depth, settings.rel_tol));
        DenseCorrespondence ba = warp_depth(b.depth, b.camera, a.camera, settings.z_near);
        apply_mask(ba, mutual_consistency_mask(ba, a.depth, settings.rel_tol));

        PairRecord rec;
        rec.view_a = a.view_id;
        rec.view_b = b.view_id;
        rec.overlap_ab = compute_overlap(ab);
        rec.overlap_ba = compute_overlap(ba);
        rec.overlap = std::min(rec.overlap_ab, rec.overlap_ba);
        rec.bin = bin_of(rec.overlap, settings.bins);
        if (rec.bin >= 0 || settings.keep_unbinned) {
            rec.matches = sample_gt_matches(ab, GridSampling{settings.grid_step});
            if (!a.gmap.empty() && !b.gmap.empty()) {
                mark_same_primitive(rec.matches, a.gmap, b.gmap);
            }
        }
        records[k] = std::move(rec);
    }

    if (!settings.keep_unbinned) {
        std::erase_if(records, [](const PairRecord& r) { return r.bin < 0; });
    }
    return records;
}

} // namespace gsforge
