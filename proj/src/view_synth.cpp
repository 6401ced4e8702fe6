// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/view_synth.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"

#include <algorithm>
#include <cmath>

namespace gsforge {

void PerturbationConfig::validate() const {
    if (rot_jitter_max < 0.0 || trans_jitter_max < 0.0) {
        throw ConfigError("jitter bounds must be non-negative");
    }
    if (!(scale_lo > 0.0) || scale_lo > scale_hi) {
        throw ConfigError("scale range must satisfy 0 < lo <= hi");
    }
}

void SynthSettings::validate() const {
    perturb.validate();
    if (per_view_count < 1) {
        throw ConfigError("per_view_count must be at least 1");
    }
    if (extra_ratio < 0.0) {
        throw ConfigError("extra_ratio must be non-negative");
    }
}

namespace {

Mat3 euler_zyx(double rx, double ry, double rz) {
    Mat3 mx, my, mz;
    mx << 1, 0, 0, 0, std::cos(rx), -std::sin(rx), 0, std::sin(rx), std::cos(rx);
    my << std::cos(ry), 0, std::sin(ry), 0, 1, 0, -std::sin(ry), 0, std::cos(ry);
    mz << std::cos(rz), -std::sin(rz), 0, std::sin(rz), std::cos(rz), 0, 0, 0, 1;
    return mz * my * mx;
}

} // namespace

CameraModel perturb_camera(const CameraModel& cam, const PerturbationConfig& cfg,
                           std::uint64_t draw_index) {
    cfg.validate();
    CounterRng rng(cfg.seed, draw_index);
    const double rx = rng.uniform(-cfg.rot_jitter_max, cfg.rot_jitter_max);
    const double ry = rng.uniform(-cfg.rot_jitter_max, cfg.rot_jitter_max);
    const double rz = rng.uniform(-cfg.rot_jitter_max, cfg.rot_jitter_max);
    const double tx = rng.uniform(-cfg.trans_jitter_max, cfg.trans_jitter_max);
    const double ty = rng.uniform(-cfg.trans_jitter_max, cfg.trans_jitter_max);
    const double tz = rng.uniform(-cfg.trans_jitter_max, cfg.trans_jitter_max);
    const double scale = rng.uniform(cfg.scale_lo, cfg.scale_hi);

    CameraModel out = cam;
    out.rotation_wc = euler_zyx(rx, ry, rz) * cam.rotation_wc;
    out.translation_wc = cam.translation_wc + Vec3(tx, ty, tz);
    out.fx = cam.fx * scale;
    out.fy = cam.fy * scale;
    return out;
}

ViewStats compute_view_stats(const RenderedView& view, double tau_alpha, double tau_depth) {
    ViewStats s;
    s.n_gaussians = view.n_contributing;
    const std::size_t n_pixels = view.alpha_acc.size();
    if (n_pixels == 0) {
        return s;
    }
    double alpha_sum = 0.0;
    std::int64_t n_valid = 0;
    std::int64_t n_near = 0;
    for (int y = 0; y < view.height; ++y) {
        for (int x = 0; x < view.width; ++x) {
            const double a = view.alpha_acc.at(x, y);
            alpha_sum += a;
            if (a > tau_alpha) {
                ++n_valid;
                const double d = view.depth.at(x, y);
                if (d > 0.0 && d < tau_depth) {
                    ++n_near;
                }
            }
        }
    }
    s.mean_alpha = alpha_sum / static_cast<double>(n_pixels);
    s.frac_valid = static_cast<double>(n_valid) / static_cast<double>(n_pixels);
    s.frac_near = n_valid > 0 ? static_cast<double>(n_near) / static_cast<double>(n_valid) : 0.0;
    return s;
}

std::vector<std::size_t> filter_candidates(const std::vector<ViewStats>& stats) {
    if (stats.size() < 2) {
        throw InsufficientInputError("pre-rendering check needs at least 2 candidates");
    }
    const std::size_t n = stats.size();
    std::vector<std::array<double, 4>> metrics(n);
    for (std::size_t i = 0; i < n; ++i) {
        metrics[i] = {static_cast<double>(stats[i].n_gaussians), stats[i].mean_alpha,
                      stats[i].frac_valid, stats[i].frac_near};
    }

    std::array<double, 4> mean{}, sigma{};
    for (int m = 0; m < 4; ++m) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += metrics[i][m];
        }
        mean[m] = sum / static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = metrics[i][m] - mean[m];
            var += d * d;
        }
        sigma[m] = std::sqrt(var / static_cast<double>(n)); // population std
    }

    std::vector<std::size_t> accepted;
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (int m = 0; m < 4; ++m) {
            if (sigma[m] == 0.0) {
                continue; // a constant metric rejects nothing
            }
            if (std::abs(metrics[i][m] - mean[m]) > 2.0 * sigma[m]) {
                ok = false;
                break;
            }
        }
        if (ok) {
            accepted.push_back(i);
        }
    }
    return accepted;
}

SynthesizedViews synthesize_views(const GaussianScene& scene,
                                  const std::vector<CameraModel>& train_cams,
                                  const SynthSettings& synth, const RenderSettings& render) {
    synth.validate();
    render.validate();

    SynthesizedViews out;
    out.requested = static_cast<std::size_t>(std::llround(synth.extra_ratio *
                                                          static_cast<double>(train_cams.size())));
    if (train_cams.empty() || out.requested == 0) {
        return out;
    }

    const std::size_t per = static_cast<std::size_t>(synth.per_view_count);
    const std::size_t n_cand = train_cams.size() * per;
    out.candidates = n_cand;

    std::vector<CameraModel> candidates(n_cand);
    for (std::size_t t = 0; t < train_cams.size(); ++t) {
        for (std::size_t d = 0; d < per; ++d) {
            const std::uint64_t draw = t * per + d;
            candidates[draw] = perturb_camera(train_cams[t], synth.perturb, draw);
            candidates[draw].view_id =
                "synth_" + std::to_string(t) + "_" + std::to_string(d);
        }
    }

    // Candidate renders are independent; stats are collected in index order.
    std::vector<ViewStats> stats(n_cand);
    const auto activated = activate_scene(scene);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_cand); ++i) {
        const auto sorted = prepare_view(candidates[i], activated, render);
        RenderBuffers rb = render_buffers(candidates[i], sorted, render);
        RenderedView v;
        v.width = rb.width;
        v.height = rb.height;
        v.depth = rb.depth(render.depth_mode);
        v.alpha_acc = std::move(rb.alpha_acc);
        v.n_contributing = rb.n_contributing;
        stats[i] = compute_view_stats(v, render.tau_alpha, render.tau_depth);
    }

    std::vector<std::size_t> accepted;
    if (synth.scope == FilterScope::Global) {
        accepted = filter_candidates(stats);
    } else {
        for (std::size_t t = 0; t < train_cams.size(); ++t) {
            std::vector<ViewStats> batch(stats.begin() + t * per, stats.begin() + (t + 1) * per);
            for (std::size_t idx : filter_candidates(batch)) {
                accepted.push_back(t * per + idx);
            }
        }
        std::sort(accepted.begin(), accepted.end());
    }
    out.accepted = accepted.size();

    // Truncate round-robin over draws so the survivors spread across train
    // views; the output itself stays ordered by (train index, draw index).
    std::vector<std::uint8_t> is_accepted(n_cand, 0);
    for (std::size_t idx : accepted) {
        is_accepted[idx] = 1;
    }
    std::vector<std::size_t> selected;
    for (std::size_t d = 0; d < per && selected.size() < out.requested; ++d) {
        for (std::size_t t = 0; t < train_cams.size() && selected.size() < out.requested; ++t) {
            const std::size_t idx = t * per + d;
            if (is_accepted[idx]) {
                selected.push_back(idx);
            }
        }
    }
    std::sort(selected.begin(), selected.end()); // (train, draw) order
    for (std::size_t idx : selected) {
        out.cameras.push_back(candidates[idx]);
    }
    if (out.cameras.size() < out.requested) {
        out.shortfall = out.requested - out.cameras.size();
    }
    return out;
}

} // namespace gsforge
