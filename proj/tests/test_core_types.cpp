// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/core_types.hpp"
#include "gsforge/error.hpp"
#include "gsforge/rng.hpp"

#include <Eigen/Geometry>
#include <doctest.h>

#include <cmath>

using namespace gsforge;

namespace {

GaussianPrimitive random_primitive(CounterRng& rng) {
    GaussianPrimitive p;
    p.position = Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    p.log_scale = Vec3(rng.uniform(-2, 1), rng.uniform(-2, 1), rng.uniform(-2, 1));
    p.rotation = Vec4(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    if (p.rotation.norm() < 1e-6) {
        p.rotation = Vec4(1, 0, 0, 0);
    }
    p.opacity_logit = rng.uniform(-3, 3);
    for (auto& c : p.sh) {
        c = rng.uniform(-1, 1);
    }
    return p;
}

} // namespace

TEST_CASE("activate_primitive applies the storage conventions") {
    GaussianPrimitive p;
    p.log_scale = Vec3::Zero();
    p.opacity_logit = 0.0;
    p.rotation = Vec4(2, 0, 0, 0);
    const ActivatedPrimitive a = activate_primitive(p);
    CHECK(a.scale == Vec3(1, 1, 1));
    CHECK(a.opacity == 0.5);
    CHECK(a.rotation == Vec4(1, 0, 0, 0));
}

TEST_CASE("activate_primitive rejects non-finite fields") {
    GaussianPrimitive p;
    p.position.x() = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(activate_primitive(p), InvalidInputError);

    GaussianPrimitive q;
    q.sh[13] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(activate_primitive(q), InvalidInputError);

    GaussianPrimitive z;
    z.rotation = Vec4::Zero();
    CHECK_THROWS_AS(activate_primitive(z), InvalidInputError);
}

TEST_CASE("activation is idempotent on already-activated values") {
    CounterRng rng(7, 0);
    for (int i = 0; i < 50; ++i) {
        GaussianPrimitive p = random_primitive(rng);
        const ActivatedPrimitive a = activate_primitive(p);
        GaussianPrimitive back;
        back.position = a.position;
        back.log_scale = a.scale.array().log();
        back.rotation = a.rotation; // already unit
        back.opacity_logit = sigmoid_inverse(a.opacity);
        back.sh = a.sh;
        const ActivatedPrimitive again = activate_primitive(back);
        CHECK(again.rotation == a.rotation); // unit quaternion unchanged
        CHECK((again.scale - a.scale).norm() < 1e-12);
        CHECK(again.opacity == doctest::Approx(a.opacity).epsilon(1e-12));
    }
}

TEST_CASE("covariance_of for axis-aligned scales") {
    GaussianPrimitive p;
    p.log_scale = Vec3(std::log(1.0), std::log(2.0), std::log(3.0));
    const Mat3 cov = covariance_of(activate_primitive(p));
    CHECK((cov - Vec3(1, 4, 9).asDiagonal().toDenseMatrix()).norm() < 1e-12);
}

TEST_CASE("covariance_of rotates the squared scales") {
    // 90 degrees about z maps the x-extent onto y.
    GaussianPrimitive p;
    p.log_scale = Vec3(std::log(1.0), std::log(2.0), std::log(1.0));
    const double s = std::sqrt(0.5);
    p.rotation = Vec4(s, 0, 0, s);
    const Mat3 cov = covariance_of(activate_primitive(p));

    // Independent route: Eigen quaternion-to-matrix, explicit R S S^T R^T.
    const Eigen::Quaterniond q(s, 0, 0, s);
    const Mat3 r = q.normalized().toRotationMatrix();
    const Mat3 expected = r * Vec3(1, 4, 1).asDiagonal() * r.transpose();
    CHECK((cov - expected).norm() < 1e-12);
    CHECK(cov(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cov(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("covariance is symmetric and its spectrum is the squared scales") {
    CounterRng rng(11, 0);
    for (int i = 0; i < 100; ++i) {
        const GaussianPrimitive p = random_primitive(rng);
        const ActivatedPrimitive a = activate_primitive(p);
        const Mat3 cov = covariance_of(a);
        CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);

        Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
        Vec3 expected = a.scale.array().square();
        std::sort(expected.data(), expected.data() + 3);
        CHECK((es.eigenvalues() - expected).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("evaluate_gaussian worked values") {
    GaussianPrimitive p;
    const ActivatedPrimitive a = activate_primitive(p); // unit isotropic at origin
    CHECK(evaluate_gaussian(a, Vec3::Zero()) == 1.0);
    CHECK(evaluate_gaussian(a, Vec3(1, 0, 0)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    GaussianPrimitive p2;
    p2.log_scale = Vec3::Constant(std::log(2.0));
    const ActivatedPrimitive a2 = activate_primitive(p2);
    CHECK(evaluate_gaussian(a2, Vec3(0, 2, 0)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("evaluate_gaussian reports degenerate covariance") {
    GaussianPrimitive p;
    p.log_scale = Vec3(0, 0, std::log(1e-13));
    CHECK_THROWS_AS(evaluate_gaussian(activate_primitive(p), Vec3::Zero()), DegenerateError);
}

TEST_CASE("evaluate_gaussian is rotation-equivariant") {
    CounterRng rng(13, 0);
    for (int i = 0; i < 50; ++i) {
        GaussianPrimitive p = random_primitive(rng);
        p.position = Vec3::Zero();
        const ActivatedPrimitive a = activate_primitive(p);
        const Vec3 x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));

        Vec4 qv(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        qv /= qv.norm();
        const Eigen::Quaterniond rot(qv[0], qv[1], qv[2], qv[3]);

        GaussianPrimitive pr = p;
        const Eigen::Quaterniond composed =
            rot * Eigen::Quaterniond(a.rotation[0], a.rotation[1], a.rotation[2], a.rotation[3]);
        pr.rotation = Vec4(composed.w(), composed.x(), composed.y(), composed.z());
        const double before = evaluate_gaussian(a, x);
        const double after = evaluate_gaussian(activate_primitive(pr), rot.toRotationMatrix() * x);
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}

TEST_CASE("plane_normal_of picks the smallest scale axis") {
    GaussianPrimitive p;
    p.log_scale = Vec3(0, 0, std::log(0.1));
    CHECK((plane_normal_of(activate_primitive(p)) - Vec3(0, 0, 1)).norm() < 1e-12);

    // 90 degrees about x rotates the y axis onto z.
    GaussianPrimitive q;
    q.log_scale = Vec3(0, std::log(0.1), 0);
    const double s = std::sqrt(0.5);
    q.rotation = Vec4(s, s, 0, 0);
    CHECK((plane_normal_of(activate_primitive(q)) - Vec3(0, 0, 1)).norm() < 1e-9);

    // Tie on the two smallest axes breaks to x.
    GaussianPrimitive t;
    t.log_scale = Vec3(std::log(0.1), std::log(0.1), 0);
    CHECK((plane_normal_of(activate_primitive(t)) - Vec3(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("camera validation catches broken poses") {
    CameraModel cam;
    cam.fx = cam.fy = 50;
    cam.cx = cam.cy = 32;
    cam.width = cam.height = 64;
    CHECK_NOTHROW(cam.validate());

    CameraModel bad = cam;
    bad.rotation_wc(0, 0) = 2.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInputError);

    CameraModel neg = cam;
    neg.fx = -1.0;
    CHECK_THROWS_AS(neg.validate(), InvalidInputError);

    CameraModel pp = cam;
    pp.cx = 70;
    CHECK_THROWS_AS(pp.validate(), InvalidInputError);
}

TEST_CASE("camera center and frame transforms agree") {
    CounterRng rng(17, 0);
    for (int i = 0; i < 20; ++i) {
        Vec4 qv(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        qv /= qv.norm();
        CameraModel cam;
        cam.fx = cam.fy = 40;
        cam.cx = cam.cy = 16;
        cam.width = cam.height = 32;
        cam.rotation_wc = Eigen::Quaterniond(qv[0], qv[1], qv[2], qv[3]).toRotationMatrix();
        cam.translation_wc = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        CHECK(cam.to_camera(cam.center()).norm() < 1e-12);
        const Vec3 p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(1, 3));
        CHECK((cam.to_world(cam.to_camera(p)) - p).norm() < 1e-12);
    }
}
