// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/camera_json.hpp"
#include "gsforge/io/config.hpp"
#include "gsforge/io/file_util.hpp"
#include "gsforge/io/gidx.hpp"
#include "gsforge/io/gtns.hpp"
#include "gsforge/io/pfm.hpp"
#include "gsforge/io/ply.hpp"
#include "gsforge/io/ppm.hpp"

#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"
#include "gsforge/synthetic.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

using namespace gsforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gsforge_test_" + std::to_string(splitmix64(reinterpret_cast<std::uintptr_t>(this))));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::vector<std::uint8_t> file_bytes(const fs::path& p) { return read_file(p); }

void put_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint8_t b[4];
    std::memcpy(b, &v, 4);
    out.insert(out.end(), b, b + 4);
}

} // namespace

TEST_CASE("PLY: hand-encoded single-primitive file parses to exact values") {
    TempDir tmp;
    std::string header = "ply\nformat binary_little_endian 1.0\nelement vertex 1\n";
    std::vector<std::string> names = {"x", "y", "z", "nx", "ny", "nz",
                                      "f_dc_0", "f_dc_1", "f_dc_2"};
    for (int i = 0; i < 45; ++i) {
        names.push_back("f_rest_" + std::to_string(i));
    }
    names.push_back("opacity");
    for (int i = 0; i < 3; ++i) {
        names.push_back("scale_" + std::to_string(i));
    }
    for (int i = 0; i < 4; ++i) {
        names.push_back("rot_" + std::to_string(i));
    }
    for (const auto& n : names) {
        header += "property float " + n + "\n";
    }
    header += "end_header\n";

    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    put_f32(bytes, 1.5f);  // x
    put_f32(bytes, -2.0f); // y
    put_f32(bytes, 3.25f); // z
    put_f32(bytes, 0.0f);
    put_f32(bytes, 0.0f);
    put_f32(bytes, 0.0f);
    put_f32(bytes, 0.5f);   // f_dc_0
    put_f32(bytes, -0.25f); // f_dc_1
    put_f32(bytes, 0.125f); // f_dc_2
    for (int i = 0; i < 45; ++i) {
        put_f32(bytes, 0.01f * static_cast<float>(i));
    }
    put_f32(bytes, -1.0f); // opacity logit
    put_f32(bytes, -2.5f); // scale_0
    put_f32(bytes, -3.0f);
    put_f32(bytes, -3.5f);
    put_f32(bytes, 0.5f); // rot_0 = w
    put_f32(bytes, 0.5f);
    put_f32(bytes, 0.5f);
    put_f32(bytes, 0.5f);

    const fs::path file = tmp.path / "one.ply";
    atomic_write_file(file, bytes);
    const GaussianScene scene = load_scene_ply(file);
    REQUIRE(scene.primitives.size() == 1);
    const GaussianPrimitive& p = scene.primitives[0];
    CHECK(p.position == Vec3(1.5, -2.0, 3.25));
    CHECK(p.sh[0] == 0.5);
    CHECK(p.sh[16] == -0.25);
    CHECK(p.sh[32] == 0.125);
    CHECK(p.sh[1] == doctest::Approx(0.0).epsilon(1e-12));       // f_rest_0 -> R band 1
    CHECK(p.sh[16 + 1] == doctest::Approx(0.15).epsilon(1e-6));  // f_rest_15 -> G band 1
    CHECK(p.sh[32 + 15] == doctest::Approx(0.44).epsilon(1e-6)); // f_rest_44 -> B last
    CHECK(p.opacity_logit == -1.0);
    CHECK(p.log_scale == Vec3(-2.5, -3.0, -3.5));
    CHECK(p.rotation == Vec4(0.5, 0.5, 0.5, 0.5));
}

TEST_CASE("PLY: save then load is the identity, bit-exact on file bytes") {
    TempDir tmp;
    const SyntheticScene synth =
        make_synthetic_scene(SyntheticKind::RandomCloud, SyntheticParams{.count = 50}, 3);
    const fs::path a = tmp.path / "a.ply";
    const fs::path b = tmp.path / "b.ply";
    save_scene_ply(a, synth.scene);
    const GaussianScene loaded = load_scene_ply(a);
    save_scene_ply(b, loaded);
    CHECK(file_bytes(a) == file_bytes(b));
    REQUIRE(loaded.primitives.size() == synth.scene.primitives.size());
    // Values survive up to the float32 storage cast.
    for (std::size_t i = 0; i < loaded.primitives.size(); ++i) {
        CHECK(loaded.primitives[i].position.x() ==
              static_cast<double>(static_cast<float>(synth.scene.primitives[i].position.x())));
    }
}

TEST_CASE("PLY: malformed files produce diagnostics, never partial scenes") {
    TempDir tmp;
    const SyntheticScene synth =
        make_synthetic_scene(SyntheticKind::RandomCloud, SyntheticParams{.count = 8}, 4);
    const fs::path good = tmp.path / "good.ply";
    save_scene_ply(good, synth.scene);

    SUBCASE("truncated payload") {
        auto bytes = file_bytes(good);
        bytes.resize(bytes.size() - 10);
        const fs::path bad = tmp.path / "trunc.ply";
        atomic_write_file(bad, bytes);
        CHECK_THROWS_WITH_AS(load_scene_ply(bad), doctest::Contains("truncated"), ParseError);
    }
    SUBCASE("bad magic") {
        auto bytes = file_bytes(good);
        bytes[0] = 'q';
        const fs::path bad = tmp.path / "magic.ply";
        atomic_write_file(bad, bytes);
        CHECK_THROWS_WITH_AS(load_scene_ply(bad), doctest::Contains("byte 0"), ParseError);
    }
    SUBCASE("missing property is named") {
        std::string header =
            "ply\nformat binary_little_endian 1.0\nelement vertex 0\nproperty float x\n"
            "property float y\nproperty float z\nend_header\n";
        const fs::path bad = tmp.path / "missing.ply";
        atomic_write_file(bad, header);
        CHECK_THROWS_WITH_AS(load_scene_ply(bad), doctest::Contains("f_dc_0"), ParseError);
    }
    SUBCASE("non-float property type is rejected") {
        std::string header =
            "ply\nformat binary_little_endian 1.0\nelement vertex 0\n"
            "property double x\nend_header\n";
        const fs::path bad = tmp.path / "type.ply";
        atomic_write_file(bad, header);
        CHECK_THROWS_WITH_AS(load_scene_ply(bad), doctest::Contains("only float"), ParseError);
    }
}

TEST_CASE("PFM: round trip is bit-exact including sentinels") {
    TempDir tmp;
    Image<double> map(5, 4, 0.0);
    CounterRng rng(6, 0);
    for (auto& v : map) {
        // Values representable in float32 so the round trip is exact.
        v = static_cast<double>(static_cast<float>(rng.uniform(0, 10)));
    }
    map.at(2, 1) = 0.0;
    const fs::path f = tmp.path / "d.pfm";
    save_depth_pfm(f, map);
    const Image<double> back = load_depth_pfm(f);
    CHECK(back == map);

    const fs::path f2 = tmp.path / "d2.pfm";
    save_depth_pfm(f2, back);
    CHECK(file_bytes(f) == file_bytes(f2));
}

TEST_CASE("PFM: known 2x2 map serializes to the documented byte layout") {
    TempDir tmp;
    Image<double> map(2, 2, 0.0);
    map.at(0, 0) = 1.0;
    map.at(1, 0) = 2.0;
    map.at(0, 1) = 3.0;
    map.at(1, 1) = 4.0;
    const fs::path f = tmp.path / "two.pfm";
    save_depth_pfm(f, map);

    std::vector<std::uint8_t> expected;
    const std::string header = "Pf\n2 2\n-1.0\n";
    expected.assign(header.begin(), header.end());
    // Bottom-up: row y=1 first.
    put_f32(expected, 3.0f);
    put_f32(expected, 4.0f);
    put_f32(expected, 1.0f);
    put_f32(expected, 2.0f);
    CHECK(file_bytes(f) == expected);
}

TEST_CASE("PFM: header-only and malformed files error out") {
    TempDir tmp;
    const fs::path f = tmp.path / "bad.pfm";
    atomic_write_file(f, std::string("Pf\n4 4\n-1.0\n"));
    CHECK_THROWS_AS(load_depth_pfm(f), ParseError);

    const fs::path g = tmp.path / "be.pfm";
    atomic_write_file(g, std::string("Pf\n1 1\n1.0\n\0\0\0\0"));
    CHECK_THROWS_AS(load_depth_pfm(g), ParseError);
}

TEST_CASE("PFM: 3-channel variant round trips") {
    TempDir tmp;
    Image<Vec3> map(3, 2, Vec3::Zero());
    CounterRng rng(7, 0);
    for (auto& v : map) {
        for (int c = 0; c < 3; ++c) {
            v[c] = static_cast<double>(static_cast<float>(rng.uniform(-1, 1)));
        }
    }
    const fs::path f = tmp.path / "n.pfm";
    save_vec3_pfm(f, map);
    const Image<Vec3> back = load_vec3_pfm(f);
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 3; ++x) {
            CHECK((back.at(x, y) - map.at(x, y)).norm() == 0.0);
        }
    }
    CHECK_THROWS_AS(load_depth_pfm(f), ParseError); // wrong channel count is diagnosed
}

TEST_CASE("GIDX: round trip and diagnostics") {
    TempDir tmp;
    Image<std::int32_t> gmap(6, 3, -1);
    gmap.at(2, 1) = 42;
    gmap.at(5, 2) = 7;
    const fs::path f = tmp.path / "m.gidx";
    save_gmap(f, gmap);
    CHECK(load_gmap(f) == gmap);

    Image<std::int32_t> sentinel(4, 4, -1);
    const fs::path g = tmp.path / "s.gidx";
    save_gmap(g, sentinel);
    const auto bytes = file_bytes(g);
    for (std::size_t i = 12; i < bytes.size(); ++i) {
        CHECK(bytes[i] == 0xff); // all -1 payload
    }

    auto bad = bytes;
    bad.resize(bad.size() - 4);
    const fs::path h = tmp.path / "bad.gidx";
    atomic_write_file(h, bad);
    CHECK_THROWS_WITH_AS(load_gmap(h), doctest::Contains("mismatch"), ParseError);
}

TEST_CASE("GTNS: all dtypes round trip bit-exactly") {
    TempDir tmp;
    SUBCASE("f64 matrix") {
        Eigen::MatrixXd m(3, 2);
        m << 1, 2, 3, 4, 5.5, -6.25;
        const fs::path f = tmp.path / "m.gtns";
        save_tensor(f, TensorContainer::from_matrix(m));
        const TensorContainer t = load_tensor(f);
        CHECK(t.dtype == TensorDType::F64);
        CHECK(t.as_matrix() == m);
    }
    SUBCASE("f32 payload") {
        TensorContainer t;
        t.dtype = TensorDType::F32;
        t.dims = {4};
        t.f32 = {1.5f, -2.5f, 0.0f, 1e-7f};
        const fs::path f = tmp.path / "f.gtns";
        save_tensor(f, t);
        const TensorContainer back = load_tensor(f);
        CHECK(back.f32 == t.f32);
    }
    SUBCASE("i32 payload") {
        const fs::path f = tmp.path / "i.gtns";
        save_tensor(f, TensorContainer::from_ints({-1, 0, 7, 123456}, {2, 2}));
        const TensorContainer back = load_tensor(f);
        CHECK(back.as_ints() == std::vector<std::int32_t>{-1, 0, 7, 123456});
    }
    SUBCASE("malformed magic and size mismatch") {
        const fs::path f = tmp.path / "bad.gtns";
        atomic_write_file(f, std::string("GTNX糟糕"));
        CHECK_THROWS_AS(load_tensor(f), ParseError);
        TensorContainer t;
        t.dims = {3};
        t.f64 = {1.0};
        CHECK_THROWS_AS(save_tensor(tmp.path / "x.gtns", t), InvalidInputError);
    }
}

TEST_CASE("camera manifest round trips and validates") {
    TempDir tmp;
    const SyntheticScene synth = make_synthetic_scene(SyntheticKind::Plane, SyntheticParams{}, 8);
    const auto cams = synthetic_camera_ring(synth, 4, 48, 36, 40.0, 1.0, 8);
    const fs::path f = tmp.path / "cams.json";
    save_camera_manifest(f, cams);
    const auto back = load_camera_manifest(f);
    REQUIRE(back.size() == cams.size());
    for (std::size_t i = 0; i < cams.size(); ++i) {
        CHECK(back[i].view_id == cams[i].view_id);
        CHECK(back[i].fx == cams[i].fx);
        CHECK((back[i].rotation_wc - cams[i].rotation_wc).norm() == 0.0);
        CHECK((back[i].translation_wc - cams[i].translation_wc).norm() == 0.0);
    }

    atomic_write_file(tmp.path / "bad.json", std::string("{\"cameras\": [{\"fx\": 1}]}"));
    CHECK_THROWS_AS(load_camera_manifest(tmp.path / "bad.json"), ParseError);
    atomic_write_file(tmp.path / "notjson.json", std::string("not json"));
    CHECK_THROWS_AS(load_camera_manifest(tmp.path / "notjson.json"), ParseError);
}

TEST_CASE("PPM writes clamped 8-bit RGB") {
    TempDir tmp;
    Image<Vec3> rgb(2, 1, Vec3::Zero());
    rgb.at(0, 0) = Vec3(0.5, 2.0, -1.0); // out-of-range channels clamp
    rgb.at(1, 0) = Vec3(1.0, 0.0, 0.25);
    const fs::path f = tmp.path / "c.ppm";
    save_rgb_ppm(f, rgb);
    const auto back = load_rgb_ppm(f);
    CHECK(back.at(0, 0).x() == doctest::Approx(0.5).epsilon(0.01));
    CHECK(back.at(0, 0).y() == 1.0);
    CHECK(back.at(0, 0).z() == 0.0);
    CHECK(back.at(1, 0).x() == 1.0);
}

TEST_CASE("config files parse with line-precise diagnostics") {
    TempDir tmp;
    SUBCASE("valid file applies every key") {
        const std::string text =
            "# pipeline config\n"
            "seed = 1234\n"
            "depth_mode = dominant\n"
            "tau = 0.4\n"
            "grid_step = 8   # inline comment\n"
            "overlap_bins = 0.2:0.4,0.4:0.8\n"
            "rot_jitter_max = 0.05\n"
            "extra_ratio = 2\n";
        const fs::path f = tmp.path / "ok.cfg";
        atomic_write_file(f, text);
        const PipelineConfig cfg = load_config(f);
        CHECK(cfg.seed == 1234);
        CHECK(cfg.seed_set);
        CHECK(cfg.render.depth_mode == DepthMode::Dominant);
        CHECK(cfg.render.tau == 0.4);
        CHECK(cfg.manifest.grid_step == 8);
        CHECK(cfg.manifest.bins.size() == 2);
        CHECK(cfg.synth.extra_ratio == 2.0);
    }
    SUBCASE("unknown keys are rejected with the line number") {
        const fs::path f = tmp.path / "typo.cfg";
        atomic_write_file(f, std::string("seed = 1\ndepht_mode = plane\n"));
        CHECK_THROWS_WITH_AS(load_config(f), doctest::Contains(":2"), ConfigError);
    }
    SUBCASE("bad values are rejected eagerly") {
        const fs::path f = tmp.path / "bad.cfg";
        atomic_write_file(f, std::string("tau = 1.5\n"));
        CHECK_THROWS_AS(load_config(f), ConfigError);
        atomic_write_file(f, std::string("seed = abc\n"));
        CHECK_THROWS_AS(load_config(f), ConfigError);
        atomic_write_file(f, std::string("tau 0.5\n"));
        CHECK_THROWS_AS(load_config(f), ConfigError);
    }
}

TEST_CASE("atomic writes leave no temp files behind") {
    TempDir tmp;
    const fs::path f = tmp.path / "out.bin";
    atomic_write_file(f, std::string("payload"));
    CHECK(fs::exists(f));
    CHECK_FALSE(fs::exists(tmp.path / "out.bin.tmp"));
}
