// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/align_math.hpp"

#include "gsforge/error.hpp"

#include <algorithm>
#include <cmath>

namespace gsforge {

namespace {

constexpr double kSigmaFloor = 1e-8;

double tree_sum_range(const double* data, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    if (n == 1) {
        return data[0];
    }
    const std::size_t half = n / 2;
    return tree_sum_range(data, half) + tree_sum_range(data + half, n - half);
}

void check_embedding(const Embedding& e, const char* what) {
    if (e.size() == 0) {
        throw InvalidInputError(std::string(what) + ": empty embedding");
    }
    if (std::abs(e.norm() - 1.0) > 1e-6) {
        throw InvalidInputError(std::string(what) + ": embedding is not L2-normalized");
    }
}

// Shared InfoNCE core: -log(sum exp(pos/tau) / sum exp(all/tau)) with
// max-subtraction over the full logit set.
double infonce(const Embedding& anchor, const Embedding& pos1, const Embedding& pos2,
               const std::vector<Embedding>& negatives, double tau) {
    if (!(tau > 0.0)) {
        throw ConfigError("InfoNCE temperature must be positive");
    }
    check_embedding(anchor, "anchor");
    check_embedding(pos1, "positive");
    check_embedding(pos2, "positive");
    for (const Embedding& n : negatives) {
        check_embedding(n, "negative");
    }

    std::vector<double> logits;
    logits.reserve(2 + negatives.size());
    logits.push_back(anchor.dot(pos1) / tau);
    logits.push_back(anchor.dot(pos2) / tau);
    for (const Embedding& n : negatives) {
        logits.push_back(anchor.dot(n) / tau);
    }
    const double m = *std::max_element(logits.begin(), logits.end());

    const double num = std::exp(logits[0] - m) + std::exp(logits[1] - m);
    double den = 0.0;
    for (double l : logits) {
        den += std::exp(l - m);
    }
    return std::log(den) - std::log(num);
}

} // namespace

double tree_sum(const std::vector<double>& values) {
    return tree_sum_range(values.data(), values.size());
}

ScaleStats compute_scale_stats(const GaussianScene& scene) {
    if (scene.primitives.empty()) {
        throw InsufficientInputError("scale statistics of an empty scene");
    }
    const std::size_t n = scene.primitives.size();
    std::vector<double> log_mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 s = scene.primitives[i].log_scale.array().exp();
        log_mean[i] = std::log((s.x() + s.y() + s.z()) / 3.0);
    }
    ScaleStats st;
    st.mean = tree_sum(log_mean) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = (log_mean[i] - st.mean) * (log_mean[i] - st.mean);
    }
    st.stddev = std::sqrt(tree_sum(sq) / static_cast<double>(n));
    return st;
}

SceneScaleNormalization normalize_scene_scales(const GaussianScene& scene) {
    SceneScaleNormalization out;
    out.stats = compute_scale_stats(scene);
    const double sigma = std::max(out.stats.stddev, kSigmaFloor);
    out.standardized_log_scales.reserve(scene.primitives.size());
    for (const auto& p : scene.primitives) {
        out.standardized_log_scales.push_back((p.log_scale.array() - out.stats.mean) / sigma);
    }
    return out;
}

GaussianFeature assemble_gaussian_feature(const ActivatedPrimitive& p, const ScaleStats& stats) {
    const double sigma = std::max(stats.stddev, kSigmaFloor);
    GaussianFeature f;
    for (int k = 0; k < 3; ++k) {
        f.v[GaussianFeature::kPosition + k] = p.position[k];
    }
    f.v[GaussianFeature::kOpacity] = p.opacity;
    for (int k = 0; k < 3; ++k) {
        f.v[GaussianFeature::kScale + k] = (std::log(p.scale[k]) - stats.mean) / sigma;
    }
    for (int k = 0; k < 4; ++k) {
        f.v[GaussianFeature::kRotation + k] = p.rotation[k];
    }
    for (int k = 0; k < kShCoeffs; ++k) {
        f.v[GaussianFeature::kSh + k] = p.sh[k];
    }
    return f;
}

double nll_match_loss(const Eigen::MatrixXd& scores,
                      const std::vector<std::pair<int, int>>& gt_matches) {
    if (gt_matches.empty()) {
        throw InsufficientInputError("NLL match loss over an empty ground-truth set");
    }
    std::vector<double> terms;
    terms.reserve(gt_matches.size());
    for (auto [i, j] : gt_matches) {
        if (i < 0 || i >= scores.rows() || j < 0 || j >= scores.cols()) {
            throw InvalidInputError("ground-truth match index out of range");
        }
        const double s = scores(i, j);
        if (!(s > 0.0)) {
            throw InvalidInputError("supervised correlation entry is not positive");
        }
        terms.push_back(-std::log(s));
    }
    return tree_sum(terms) / static_cast<double>(terms.size());
}

double infonce_voxel_loss(const Embedding& voxel, const Embedding& patch_a,
                          const Embedding& patch_b, const std::vector<Embedding>& negatives,
                          double tau) {
    return infonce(voxel, patch_a, patch_b, negatives, tau);
}

double infonce_patch_loss(const Embedding& anchor_patch, const Embedding& voxel,
                          const Embedding& other_patch, const std::vector<Embedding>& negatives,
                          double tau) {
    return infonce(anchor_patch, voxel, other_patch, negatives, tau);
}

double combined_infonce(const std::vector<AlignmentAnchor>& batch, double lambda_v,
                        double lambda_q, double tau, NegativePool pool) {
    if (batch.empty()) {
        throw InsufficientInputError("combined InfoNCE over an empty batch");
    }
    const std::size_t n = batch.size();
    std::vector<double> voxel_terms(n), patch_terms(n);

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        std::vector<Embedding> negatives;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == static_cast<std::size_t>(i)) {
                continue;
            }
            if (pool == NegativePool::IntraScene && batch[j].scene_id != batch[i].scene_id) {
                continue;
            }
            negatives.push_back(batch[j].voxel);
            negatives.push_back(batch[j].patch_a);
            negatives.push_back(batch[j].patch_b);
        }
        const AlignmentAnchor& a = batch[i];
        voxel_terms[i] = infonce_voxel_loss(a.voxel, a.patch_a, a.patch_b, negatives, tau);
        const double la = infonce_patch_loss(a.patch_a, a.voxel, a.patch_b, negatives, tau);
        const double lb = infonce_patch_loss(a.patch_b, a.voxel, a.patch_a, negatives, tau);
        patch_terms[i] = 0.5 * (la + lb);
    }

    const double nd = static_cast<double>(n);
    return lambda_v * (tree_sum(voxel_terms) / nd) + lambda_q * (tree_sum(patch_terms) / nd);
}

Rotation6D quaternion_to_6d(const Vec4& q) {
    const double norm = q.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidInputError("quaternion has zero or non-finite norm");
    }
    ActivatedPrimitive tmp;
    tmp.rotation = q / norm;
    const Mat3 r = tmp.rotation_matrix();
    return {r(0, 0), r(1, 0), r(2, 0), r(0, 1), r(1, 1), r(2, 1)};
}

Mat3 rotation_from_6d(const Rotation6D& r) {
    Vec3 a1(r[0], r[1], r[2]);
    Vec3 a2(r[3], r[4], r[5]);
    const Vec3 b1 = a1.normalized();
    const Vec3 b2 = (a2 - b1.dot(a2) * b1).normalized();
    Mat3 m;
    m.col(0) = b1;
    m.col(1) = b2;
    m.col(2) = b1.cross(b2);
    return m;
}

namespace {

double slice_l1(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        s += std::abs(a[k] - b[k]);
    }
    return s / n;
}

double l1_6d(const Rotation6D& a, const Rotation6D& b) {
    double s = 0.0;
    for (int k = 0; k < 6; ++k) {
        s += std::abs(a[k] - b[k]);
    }
    return s / 6.0;
}

Vec4 rotation_slice(const GaussianFeature& f) {
    return Vec4(f.v[GaussianFeature::kRotation], f.v[GaussianFeature::kRotation + 1],
                f.v[GaussianFeature::kRotation + 2], f.v[GaussianFeature::kRotation + 3]);
}

// Sum of per-slice mean L1 between two features, rotation in 6D.
double feature_l1(const GaussianFeature& a, const GaussianFeature& b) {
    double s = 0.0;
    s += slice_l1(&a.v[GaussianFeature::kPosition], &b.v[GaussianFeature::kPosition], 3);
    s += slice_l1(&a.v[GaussianFeature::kOpacity], &b.v[GaussianFeature::kOpacity], 1);
    s += slice_l1(&a.v[GaussianFeature::kScale], &b.v[GaussianFeature::kScale], 3);
    s += l1_6d(quaternion_to_6d(rotation_slice(a)), quaternion_to_6d(rotation_slice(b)));
    s += slice_l1(&a.v[GaussianFeature::kSh], &b.v[GaussianFeature::kSh], kShCoeffs);
    return s;
}

} // namespace

AttributeLossResult attribute_loss(const GaussianFeature& pred_a, const GaussianFeature& pred_b,
                                   const GaussianFeature& gt_a, const GaussianFeature& gt_b,
                                   const AttributeLossWeights& weights) {
    AttributeLossResult r;
    r.regression = 0.5 * (feature_l1(pred_a, gt_a) + feature_l1(pred_b, gt_b));
    r.consistency = feature_l1(pred_a, pred_b);
    r.total = weights.regression * r.regression + weights.consistency * r.consistency;
    return r;
}

} // namespace gsforge
