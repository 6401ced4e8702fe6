// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/geom_metrics.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsforge {

Mat3 cross_matrix(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

namespace {

Mat3 intrinsics(const CameraModel& c) {
    Mat3 k;
    k << c.fx, 0, c.cx, 0, c.fy, c.cy, 0, 0, 1;
    return k;
}

} // namespace

FundamentalMatrix fundamental_from_cameras(const CameraModel& cam_a, const CameraModel& cam_b) {
    const Mat3 r_rel = cam_b.rotation_wc * cam_a.rotation_wc.transpose();
    const Vec3 t_rel = cam_b.translation_wc - r_rel * cam_a.translation_wc;
    const double scale = std::max({1.0, cam_a.center().norm(), cam_b.center().norm()});
    if (t_rel.norm() < 1e-12 * scale) {
        throw DegenerateError("zero baseline between '" + cam_a.view_id + "' and '" +
                              cam_b.view_id + "': epipolar geometry undefined");
    }
    Mat3 f = intrinsics(cam_b).transpose().inverse() * cross_matrix(t_rel) * r_rel *
             intrinsics(cam_a).inverse();
    f /= f.norm();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (std::abs(f(r, c)) > 1e-12) {
                if (f(r, c) < 0.0) {
                    f = -f;
                }
                return {f};
            }
        }
    }
    return {f};
}

EpipolarStats symmetric_epipolar_error(const FundamentalMatrix& fm,
                                       const std::vector<Match>& matches) {
    if (matches.empty()) {
        throw InsufficientInputError("epipolar error over an empty match list");
    }
    EpipolarStats s;
    s.errors.assign(matches.size(), std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        const Vec3 xa(matches[i].p_a.x(), matches[i].p_a.y(), 1.0);
        const Vec3 xb(matches[i].p_b.x(), matches[i].p_b.y(), 1.0);
        const Vec3 line_b = fm.f * xa;            // epipolar line of a in image B
        const Vec3 line_a = fm.f.transpose() * xb;
        const double grad_b = std::hypot(line_b.x(), line_b.y());
        const double grad_a = std::hypot(line_a.x(), line_a.y());
        if (grad_b < 1e-12 || grad_a < 1e-12) {
            ++s.skipped_degenerate;
            continue;
        }
        const double num = std::abs(xb.dot(line_b)); // == |xa . line_a|
        const double e = 0.5 * (num / grad_b + num / grad_a);
        s.errors[i] = e;
        sum += e;
        ++s.evaluated;
    }
    if (s.evaluated > 0) {
        s.mean = sum / static_cast<double>(s.evaluated);
        double var = 0.0;
        for (double e : s.errors) {
            if (std::isfinite(e)) {
                var += (e - s.mean) * (e - s.mean);
            }
        }
        s.stddev = std::sqrt(var / static_cast<double>(s.evaluated));
    }
    return s;
}

ReprojectionStats relative_reprojection_error(const std::vector<Match>& matches,
                                              const Image<double>& depth_a,
                                              const Image<double>& depth_b,
                                              const CameraModel& cam_a, const CameraModel& cam_b) {
    ReprojectionStats s;
    s.n_total = matches.size();
    const Mat3 r_rel = cam_b.rotation_wc * cam_a.rotation_wc.transpose();
    const Vec3 t_rel = cam_b.translation_wc - r_rel * cam_a.translation_wc;
    double sum = 0.0;
    for (const Match& m : matches) {
        if (!bilinear_taps_valid(depth_a, m.p_a.x(), m.p_a.y()) ||
            !bilinear_taps_valid(depth_b, m.p_b.x(), m.p_b.y())) {
            continue;
        }
        const double da = bilinear(depth_a, m.p_a.x(), m.p_a.y());
        const double db = bilinear(depth_b, m.p_b.x(), m.p_b.y());
        const Vec3 p_cam_b = r_rel * (da * cam_a.ray_dir(m.p_a.x(), m.p_a.y())) + t_rel;
        if (!(p_cam_b.z() > 0.0)) {
            continue;
        }
        sum += std::abs(p_cam_b.z() - db) / db;
        ++s.n_valid;
    }
    s.mean = s.n_valid > 0 ? sum / static_cast<double>(s.n_valid) : 0.0;
    return s;
}

DepthL1Result depth_l1_regularization(const Image<double>& rendered, const Image<double>& prior,
                                      const Image<std::uint8_t>& mask, PriorAlignment alignment) {
    std::vector<std::pair<double, double>> samples; // (prior, rendered)
    for (int y = 0; y < rendered.height(); ++y) {
        for (int x = 0; x < rendered.width(); ++x) {
            if (mask.at(x, y)) {
                samples.emplace_back(prior.at(x, y), rendered.at(x, y));
            }
        }
    }
    if (samples.size() < 2) {
        throw InsufficientInputError("depth regularization mask has fewer than 2 pixels");
    }
    const double n = static_cast<double>(samples.size());

    DepthL1Result r;
    if (alignment == PriorAlignment::LeastSquares) {
        double sp = 0.0, sr = 0.0, spp = 0.0, spr = 0.0;
        for (auto [p, v] : samples) {
            sp += p;
            sr += v;
            spp += p * p;
            spr += p * v;
        }
        const double denom = n * spp - sp * sp;
        if (std::abs(denom) > 1e-12 * std::max(1.0, n * spp)) {
            r.scale = (n * spr - sp * sr) / denom;
            r.shift = (sr - r.scale * sp) / n;
        } else {
            r.scale = 0.0; // constant prior: shift-only alignment
            r.shift = sr / n;
        }
    } else {
        // Median-ratio: a = median(rendered / prior), b = 0.
        std::vector<double> ratios;
        for (auto [p, v] : samples) {
            if (std::abs(p) > 1e-12) {
                ratios.push_back(v / p);
            }
        }
        if (ratios.empty()) {
            throw InsufficientInputError("median-ratio alignment with all-zero prior");
        }
        std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
        r.scale = ratios[ratios.size() / 2];
        r.shift = 0.0;
    }

    double sum = 0.0;
    for (auto [p, v] : samples) {
        sum += std::abs(v - (r.scale * p + r.shift));
    }
    r.loss = sum / n;
    return r;
}

namespace {

CameraModel normalized_camera(const CameraModel& c) {
    CameraModel n = c;
    n.fx = n.fy = 1.0;
    n.cx = n.cy = 0.5; // interior dummy principal point; only K changes matter here
    n.width = n.height = 1;
    return n;
}

std::vector<Match> normalize_matches(const std::vector<Match>& matches, const CameraModel& a,
                                     const CameraModel& b) {
    std::vector<Match> out = matches;
    for (Match& m : out) {
        m.p_a = Vec2((m.p_a.x() - a.cx) / a.fx, (m.p_a.y() - a.cy) / a.fy);
        m.p_b = Vec2((m.p_b.x() - b.cx) / b.fx, (m.p_b.y() - b.cy) / b.fy);
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v, double mean) {
    if (v.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace

GtQualityReport evaluate_gt_quality(const std::vector<LabeledView>& views,
                                    const GtQualitySettings& settings,
                                    const std::string& depth_label) {
    ManifestSettings ms;
    ms.bins = settings.bins;
    ms.rel_tol = settings.rel_tol;
    ms.grid_step = settings.grid_step;
    ms.z_near = settings.z_near;
    std::vector<PairRecord> manifest = build_pair_manifest(views, ms);

    // Even per-bin pair budget (the 1:1:1 protocol), seeded selection.
    const std::size_t n_bins = settings.bins.size();
    const std::size_t per_bin = n_bins > 0 ? settings.n_pairs / n_bins : 0;
    std::vector<std::size_t> selected;
    for (std::size_t b = 0; b < n_bins; ++b) {
        std::vector<std::size_t> in_bin;
        for (std::size_t k = 0; k < manifest.size(); ++k) {
            if (manifest[k].bin == static_cast<int>(b)) {
                in_bin.push_back(k);
            }
        }
        if (in_bin.size() > per_bin) {
            CounterRng rng(settings.seed, 0x70616972 + b); // "pair" + bin
            for (std::size_t i = 0; i < per_bin; ++i) {
                const std::size_t j = i + rng.uniform_index(in_bin.size() - i);
                std::swap(in_bin[i], in_bin[j]);
            }
            in_bin.resize(per_bin);
            std::sort(in_bin.begin(), in_bin.end());
        }
        selected.insert(selected.end(), in_bin.begin(), in_bin.end());
    }
    std::sort(selected.begin(), selected.end());

    GtQualityReport report;
    report.depth_label = depth_label;
    report.pairs_per_bin.assign(n_bins, 0);

    auto view_by_id = [&](const std::string& id) -> const LabeledView& {
        for (const auto& v : views) {
            if (v.view_id == id) {
                return v;
            }
        }
        throw InvalidInputError("unknown view id '" + id + "'");
    };

    double pooled_epi_px_sum = 0.0, pooled_epi_norm_sum = 0.0;
    std::size_t pooled_count = 0;
    std::vector<double> pair_means_px, pair_means_norm, pair_means_rel;

    for (std::size_t k : selected) {
        const PairRecord& rec = manifest[k];
        if (rec.matches.empty()) {
            continue;
        }
        const LabeledView& a = view_by_id(rec.view_a);
        const LabeledView& b = view_by_id(rec.view_b);

        PairQuality q;
        q.view_a = rec.view_a;
        q.view_b = rec.view_b;
        q.overlap = rec.overlap;
        q.bin = rec.bin;
        q.n_matches = rec.matches.size();

        const FundamentalMatrix f_px = fundamental_from_cameras(a.camera, b.camera);
        const EpipolarStats epi_px = symmetric_epipolar_error(f_px, rec.matches);
        q.epi_mean_px = epi_px.mean;
        q.epi_std_px = epi_px.stddev;
        q.n_skipped = epi_px.skipped_degenerate;

        const FundamentalMatrix f_norm =
            fundamental_from_cameras(normalized_camera(a.camera), normalized_camera(b.camera));
        const EpipolarStats epi_norm = symmetric_epipolar_error(
            f_norm, normalize_matches(rec.matches, a.camera, b.camera));
        q.epi_mean_norm = epi_norm.mean;
        q.epi_std_norm = epi_norm.stddev;

        const ReprojectionStats rel =
            relative_reprojection_error(rec.matches, a.depth, b.depth, a.camera, b.camera);
        q.rel_mean = rel.mean;
        q.rel_valid = rel.n_valid;

        if (q.bin >= 0) {
            ++report.pairs_per_bin[q.bin];
        }
        report.total_matches += epi_px.evaluated;
        report.total_skipped += epi_px.skipped_degenerate;
        pooled_epi_px_sum += epi_px.mean * static_cast<double>(epi_px.evaluated);
        pooled_epi_norm_sum += epi_norm.mean * static_cast<double>(epi_norm.evaluated);
        pooled_count += epi_px.evaluated;
        pair_means_px.push_back(q.epi_mean_px);
        pair_means_norm.push_back(q.epi_mean_norm);
        pair_means_rel.push_back(q.rel_mean);
        report.pairs.push_back(std::move(q));
    }

    if (pooled_count > 0) {
        report.epi_mean_px = pooled_epi_px_sum / static_cast<double>(pooled_count);
        report.epi_mean_norm = pooled_epi_norm_sum / static_cast<double>(pooled_count);
    }
    report.epi_std_across_pairs_px = pop_std(pair_means_px, mean_of(pair_means_px));
    report.epi_std_across_pairs_norm = pop_std(pair_means_norm, mean_of(pair_means_norm));
    report.rel_mean = mean_of(pair_means_rel);
    report.rel_std_across_pairs = pop_std(pair_means_rel, report.rel_mean);
    return report;
}

} // namespace gsforge
