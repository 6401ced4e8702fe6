// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/view_synth.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"
#include "gsforge/synthetic.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>

using namespace gsforge;
using namespace gsforge::test;

TEST_CASE("perturb_camera with zero bounds is the identity") {
    const CameraModel cam = identity_camera();
    PerturbationConfig cfg;
    cfg.seed = 42;
    const CameraModel out = perturb_camera(cam, cfg, 3);
    CHECK(out.fx == cam.fx);
    CHECK(out.fy == cam.fy);
    CHECK((out.rotation_wc - cam.rotation_wc).norm() == 0.0);
    CHECK((out.translation_wc - cam.translation_wc).norm() == 0.0);
}

TEST_CASE("perturb_camera scales intrinsics only") {
    const CameraModel cam = identity_camera();
    PerturbationConfig cfg;
    cfg.scale_lo = cfg.scale_hi = 2.0;
    const CameraModel out = perturb_camera(cam, cfg, 0);
    CHECK(out.fx == doctest::Approx(2.0 * cam.fx));
    CHECK(out.fy == doctest::Approx(2.0 * cam.fy));
    CHECK(out.cx == cam.cx);
    CHECK(out.cy == cam.cy);
    CHECK(out.width == cam.width);
}

TEST_CASE("perturb_camera is a pure function of (seed, draw_index)") {
    const CameraModel cam = identity_camera();
    PerturbationConfig cfg;
    cfg.rot_jitter_max = 0.1;
    cfg.trans_jitter_max = 0.2;
    cfg.scale_lo = 0.5;
    cfg.scale_hi = 2.0;
    cfg.seed = 77;
    const CameraModel a = perturb_camera(cam, cfg, 5);
    const CameraModel b = perturb_camera(cam, cfg, 5);
    CHECK((a.rotation_wc - b.rotation_wc).norm() == 0.0);
    CHECK((a.translation_wc - b.translation_wc).norm() == 0.0);
    CHECK(a.fx == b.fx);

    const CameraModel c = perturb_camera(cam, cfg, 6);
    CHECK((a.rotation_wc - c.rotation_wc).norm() > 0.0);

    // Perturbed rotations stay proper rotations.
    CHECK_NOTHROW(a.validate());
}

TEST_CASE("perturb_camera validates its config") {
    PerturbationConfig cfg;
    cfg.scale_lo = 0.0;
    CHECK_THROWS_AS(perturb_camera(identity_camera(), cfg, 0), ConfigError);
    PerturbationConfig neg;
    neg.rot_jitter_max = -1.0;
    CHECK_THROWS_AS(perturb_camera(identity_camera(), neg, 0), ConfigError);
}

TEST_CASE("compute_view_stats over an empty scene") {
    const CameraModel cam = identity_camera(16);
    const RenderedView v = render_view(cam, GaussianScene{}, default_settings());
    const ViewStats s = compute_view_stats(v, 0.5, 100.0);
    CHECK(s.n_gaussians == 0);
    CHECK(s.mean_alpha == 0.0);
    CHECK(s.frac_valid == 0.0);
    CHECK(s.frac_near == 0.0);
}

TEST_CASE("compute_view_stats on a fully covered opaque scene") {
    const CameraModel cam = identity_camera(32, 32.0);
    GaussianScene scene;
    scene.primitives.push_back(flat_primitive(Vec3(0, 0, 2), 1e4));
    const RenderedView v = render_view(cam, scene, default_settings());
    const ViewStats s = compute_view_stats(v, 0.5, 100.0);
    CHECK(s.frac_valid == 1.0);
    CHECK(s.n_gaussians == 1);
    CHECK(s.mean_alpha > 0.99);
    CHECK(s.frac_near == 1.0); // depth 2 < 100

    const ViewStats far = compute_view_stats(v, 0.5, 1.0); // all depths >= tau_depth
    CHECK(far.frac_near == 0.0);
}

TEST_CASE("filter_candidates accepts identical stats") {
    std::vector<ViewStats> stats(5, ViewStats{120, 0.8, 0.9, 0.1});
    const auto accepted = filter_candidates(stats);
    CHECK(accepted.size() == 5);
}

TEST_CASE("filter_candidates rejects an empty-frustum outlier") {
    std::vector<ViewStats> stats;
    CounterRng rng(1, 0);
    for (int i = 0; i < 20; ++i) {
        stats.push_back(ViewStats{static_cast<std::int64_t>(100000 + rng.uniform_index(500)),
                                  0.9 + rng.uniform(-0.01, 0.01), 0.95 + rng.uniform(-0.01, 0.01),
                                  0.2 + rng.uniform(-0.01, 0.01)});
    }
    stats.push_back(ViewStats{0, 0.0, 0.0, 0.0});
    const auto accepted = filter_candidates(stats);
    CHECK(std::find(accepted.begin(), accepted.end(), 20u) == accepted.end());
    CHECK(accepted.size() == 20);
}

TEST_CASE("filter_candidates keeps two differing candidates") {
    std::vector<ViewStats> stats = {{10, 0.5, 0.5, 0.0}, {20, 0.7, 0.9, 0.4}};
    CHECK(filter_candidates(stats).size() == 2); // each is exactly one sigma from the mean
}

TEST_CASE("filter_candidates needs at least two candidates") {
    std::vector<ViewStats> one(1);
    CHECK_THROWS_AS(filter_candidates(one), InsufficientInputError);
}

TEST_CASE("filter_candidates acceptance is permutation invariant") {
    std::vector<ViewStats> stats;
    CounterRng rng(2, 0);
    for (int i = 0; i < 15; ++i) {
        stats.push_back(ViewStats{static_cast<std::int64_t>(rng.uniform_index(1000)),
                                  rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)});
    }
    const auto base = filter_candidates(stats);

    std::vector<std::size_t> perm(stats.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        perm[i] = (i * 7 + 3) % perm.size(); // a fixed permutation
    }
    std::vector<ViewStats> shuffled(stats.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        shuffled[i] = stats[perm[i]];
    }
    const auto permuted = filter_candidates(shuffled);

    std::vector<std::size_t> mapped;
    for (std::size_t idx : permuted) {
        mapped.push_back(perm[idx]);
    }
    std::sort(mapped.begin(), mapped.end());
    std::vector<std::size_t> expected(base.begin(), base.end());
    std::sort(expected.begin(), expected.end());
    CHECK(mapped == expected);
}

namespace {

SyntheticScene small_plane_scene() {
    SyntheticParams params;
    params.grid_n = 8;
    params.extent = 3.0;
    return make_synthetic_scene(SyntheticKind::Plane, params, 5);
}

} // namespace

TEST_CASE("synthesize_views with extra_ratio zero is empty") {
    const SyntheticScene synth = small_plane_scene();
    const auto cams = synthetic_camera_ring(synth, 3, 24, 24, 24.0, 1.0, 5);
    SynthSettings s;
    s.extra_ratio = 0.0;
    const auto out = synthesize_views(synth.scene, cams, s, default_settings());
    CHECK(out.cameras.empty());
    CHECK(out.requested == 0);
}

TEST_CASE("synthesize_views with no jitter reproduces the train cameras") {
    const SyntheticScene synth = small_plane_scene();
    const auto cams = synthetic_camera_ring(synth, 3, 24, 24, 24.0, 1.0, 5);
    SynthSettings s;
    s.per_view_count = 2;
    s.extra_ratio = 1.0;
    const auto out = synthesize_views(synth.scene, cams, s, default_settings());
    REQUIRE(out.cameras.size() == 3);
    CHECK(out.shortfall == 0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK((out.cameras[i].rotation_wc - cams[i].rotation_wc).norm() == 0.0);
        CHECK((out.cameras[i].translation_wc - cams[i].translation_wc).norm() == 0.0);
        CHECK(out.cameras[i].fx == cams[i].fx);
    }
}

TEST_CASE("synthesize_views is deterministic") {
    const SyntheticScene synth = small_plane_scene();
    const auto cams = synthetic_camera_ring(synth, 2, 24, 24, 24.0, 1.0, 5);
    SynthSettings s;
    s.per_view_count = 3;
    s.extra_ratio = 1.0;
    s.perturb.rot_jitter_max = 0.05;
    s.perturb.trans_jitter_max = 0.1;
    s.perturb.scale_lo = 0.8;
    s.perturb.scale_hi = 1.25;
    s.perturb.seed = 99;
    const auto a = synthesize_views(synth.scene, cams, s, default_settings());
    const auto b = synthesize_views(synth.scene, cams, s, default_settings());
    REQUIRE(a.cameras.size() == b.cameras.size());
    for (std::size_t i = 0; i < a.cameras.size(); ++i) {
        CHECK((a.cameras[i].rotation_wc - b.cameras[i].rotation_wc).norm() == 0.0);
        CHECK(a.cameras[i].fx == b.cameras[i].fx);
        CHECK(a.cameras[i].view_id == b.cameras[i].view_id);
    }
}
