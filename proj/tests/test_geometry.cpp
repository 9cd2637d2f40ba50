#include "doctest.h"

#include "hfbem/errors.hpp"
#include "hfbem/geometry.hpp"

#include <cmath>
#include <stdexcept>

using namespace hfbem;

namespace {

const Vec2 kAlphaEllipse = Vec2(3.0, 1.0).normalized();
const Vec2 kAlphaKite = Vec2(4.0, 1.0).normalized();

// Frozen 50-digit quadrature references for the curve lengths.
constexpr double kEllipseLength = 9.6884482205476762; // semi-axes (2, 1)
constexpr double kKiteLength = 9.3240226732849593;

} // namespace

TEST_CASE("make_curve fixed-shape positions") {
    const BoundaryCurve circle = make_curve(CurveKind::circle, {.radius = 1.0});
    CHECK((circle.raw_point(0.0) - Vec2(1, 0)).norm() < 1e-15);

    const BoundaryCurve kite = make_curve(CurveKind::kite);
    CHECK((kite.raw_point(0.0) - Vec2(1, 0)).norm() < 1e-15);
    CHECK((kite.raw_point(M_PI) - Vec2(-1, 0)).norm() < 1e-14);
    // Interior sample, frozen from the defining formula at 50 digits.
    CHECK((kite.raw_point(1.0) -
           Vec2(-0.38019313788750283, 1.2622064772118448)).norm() < 1e-14);
    CHECK(kite.raw_speed(1.0) == doctest::Approx(2.1798211692698438).epsilon(1e-13));
}

TEST_CASE("make_curve rejects bad shape parameters") {
    CHECK_THROWS_AS(make_curve(CurveKind::circle, {.radius = 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_curve(CurveKind::circle, {.radius = -2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_curve(CurveKind::ellipse, {.a = 1.0, .b = 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_curve(CurveKind::ellipse, {.a = 2.0, .b = -1.0}),
                    std::invalid_argument);
}

TEST_CASE("custom curves must be closed and counterclockwise") {
    // Spiral segment: not closed.
    CHECK_THROWS_AS(
        BoundaryCurve([](double t) { return Vec2(t * std::cos(t), t * std::sin(t)); },
                      [](double t) {
                          return Vec2(std::cos(t) - t * std::sin(t),
                                      std::sin(t) + t * std::cos(t));
                      },
                      [](double t) {
                          return Vec2(-2 * std::sin(t) - t * std::cos(t),
                                      2 * std::cos(t) - t * std::sin(t));
                      }),
        std::invalid_argument);
    // Clockwise circle: closed but wrongly oriented.
    CHECK_THROWS_AS(
        BoundaryCurve([](double t) { return Vec2(std::cos(-t), std::sin(-t)); },
                      [](double t) { return Vec2(std::sin(-t), -std::cos(-t)); },
                      [](double t) { return Vec2(-std::cos(-t), -std::sin(-t)); }),
        std::invalid_argument);
}

TEST_CASE("arc length of the three study geometries") {
    const BoundaryCurve circle =
        arc_length_reparam(make_curve(CurveKind::circle, {.radius = 1.0}), Vec2(1, 0));
    CHECK(circle.length() == doctest::Approx(2 * M_PI).epsilon(1e-13));

    const BoundaryCurve ellipse = arc_length_reparam(
        make_curve(CurveKind::ellipse, {.a = 2.0, .b = 1.0}), kAlphaEllipse);
    CHECK(ellipse.length() == doctest::Approx(kEllipseLength).epsilon(1e-12));

    const BoundaryCurve kite =
        arc_length_reparam(make_curve(CurveKind::kite), kAlphaKite);
    CHECK(kite.length() == doctest::Approx(kKiteLength).epsilon(1e-12));
}

TEST_CASE("arc-length accessors: unit speed, orthogonal outward normal") {
    const BoundaryCurve kite =
        arc_length_reparam(make_curve(CurveKind::kite), kAlphaKite);
    const double L = kite.length();
    for (int i = 0; i < 97; ++i) {
        const double s = L * i / 97.0;
        const Vec2 tg = kite.gamma_s(s);
        const Vec2 nu = kite.normal(s);
        CHECK(std::fabs(tg.norm() - 1.0) < 1e-12);
        CHECK(std::fabs(nu.norm() - 1.0) < 1e-12);
        CHECK(std::fabs(tg.dot(nu)) < 1e-12);
        // nu is gamma_s rotated by -90 degrees.
        CHECK((nu - Vec2(tg.y(), -tg.x())).norm() < 1e-15);
        // gamma_s is d gamma / ds: compare with a central difference.
        const double h = 1e-5;
        const Vec2 fd = (kite.gamma(s + h) - kite.gamma(s - h)) / (2 * h);
        CHECK((fd - tg).norm() < 1e-8);
    }
}

TEST_CASE("raw parameter and arc length round-trip") {
    const BoundaryCurve ellipse = arc_length_reparam(
        make_curve(CurveKind::ellipse, {.a = 2.0, .b = 1.0}), kAlphaEllipse);
    for (int i = 0; i < 61; ++i) {
        const double t = 2 * M_PI * i / 61.0;
        const double s = ellipse.arc_of_raw(t);
        CHECK(s >= 0.0);
        CHECK(s < ellipse.length());
        const double t_back = ellipse.raw_param_of(s);
        double diff = std::fabs(t_back - t);
        diff = std::min(diff, 2 * M_PI - diff);
        CHECK(diff < 1e-10);
    }
}

TEST_CASE("anchor convention alpha . nu(gamma(0)) = 1") {
    struct Case {
        BoundaryCurve curve;
        Vec2 alpha;
    } cases[] = {
        {make_curve(CurveKind::circle, {.radius = 1.0}), Vec2(1, 0)},
        {make_curve(CurveKind::ellipse, {.a = 2.0, .b = 1.0}), kAlphaEllipse},
        {make_curve(CurveKind::kite), kAlphaKite},
    };
    for (auto &c : cases) {
        const BoundaryCurve anchored = arc_length_reparam(c.curve, c.alpha);
        CHECK(c.alpha.dot(anchored.normal(0.0)) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("curvature of the study geometries") {
    const BoundaryCurve circle = arc_length_reparam(
        make_curve(CurveKind::circle, {.radius = 2.5}), Vec2(1, 0));
    for (int i = 0; i < 13; ++i)
        CHECK(circle.curvature(circle.length() * i / 13.0) ==
              doctest::Approx(1.0 / 2.5).epsilon(1e-10));

    const BoundaryCurve kite = make_curve(CurveKind::kite);
    CHECK(kite.raw_curvature(0.0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(kite.raw_curvature(1.0) ==
          doctest::Approx(0.20420992276936554).epsilon(1e-12));
    // Concave stretch of the kite: negative curvature.
    CHECK(kite.raw_curvature(M_PI) ==
          doctest::Approx(-0.71111111111111111).epsilon(1e-12));

    const BoundaryCurve ellipse = make_curve(CurveKind::ellipse, {.a = 2.0, .b = 1.0});
    CHECK(ellipse.raw_curvature(0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ellipse.raw_curvature(M_PI / 2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("shadow boundaries on the unit circle") {
    const BoundaryCurve circle =
        arc_length_reparam(make_curve(CurveKind::circle, {.radius = 1.0}), Vec2(1, 0));
    const auto [t1, t2] = shadow_boundaries(circle, Vec2(1, 0));
    CHECK(t1 == doctest::Approx(M_PI / 2).epsilon(1e-10));
    CHECK(t2 == doctest::Approx(3 * M_PI / 2).epsilon(1e-10));
    // Sign structure around t1: positive before, negative after.
    const double d = 1e-4;
    CHECK(Vec2(1, 0).dot(circle.normal(t1 - d)) > 0.0);
    CHECK(Vec2(1, 0).dot(circle.normal(t1 + d)) < 0.0);
    // Illuminated side between the roots, shadow outside.
    CHECK(Vec2(1, 0).dot(circle.normal(0.5 * (t1 + t2))) < 0.0);
    CHECK(Vec2(1, 0).dot(circle.normal(0.5 * (t2 + t1 + circle.length()))) > 0.0);
}

TEST_CASE("shadow boundaries of ellipse and kite hit the alpha.nu roots") {
    const BoundaryCurve ellipse = arc_length_reparam(
        make_curve(CurveKind::ellipse, {.a = 2.0, .b = 1.0}), kAlphaEllipse);
    const auto [t1, t2] = shadow_boundaries(ellipse, kAlphaEllipse);
    CHECK(0.0 < t1);
    CHECK(t1 < t2);
    CHECK(t2 < ellipse.length());
    // Raw-parameter roots frozen from a 50-digit bisection of alpha . nu = 0.
    const double r1 = ellipse.raw_param_of(t1), r2 = ellipse.raw_param_of(t2);
    const double lo = std::min(r1, r2), hi = std::max(r1, r2);
    CHECK(lo == doctest::Approx(2.1587989303424642).epsilon(1e-9));
    CHECK(hi == doctest::Approx(5.3003915839322574).epsilon(1e-9));

    const BoundaryCurve kite =
        arc_length_reparam(make_curve(CurveKind::kite), kAlphaKite);
    const auto [k1, k2] = shadow_boundaries(kite, kAlphaKite);
    CHECK(std::fabs(kAlphaKite.dot(kite.normal(k1))) < 1e-10);
    CHECK(std::fabs(kAlphaKite.dot(kite.normal(k2))) < 1e-10);
    CHECK(kAlphaKite.dot(kite.normal(0.5 * (k1 + k2))) < 0.0);
}

TEST_CASE("ambiguous shadow boundaries are reported, not swallowed") {
    // Grazing the kite's concave side produces four alpha.nu sign changes.
    const double ang = 5 * M_PI / 12;
    const Vec2 alpha(std::cos(ang), std::sin(ang));
    const BoundaryCurve kite = arc_length_reparam(make_curve(CurveKind::kite), alpha);
    CHECK_THROWS_AS(shadow_boundaries(kite, alpha), numerical_error);
}

TEST_CASE("make_scattering_config validates inputs and fills t1, t2") {
    const BoundaryCurve circle = make_curve(CurveKind::circle, {.radius = 1.0});
    const ScatteringConfig cfg = make_scattering_config(circle, 5.0, Vec2(1, 0));
    CHECK(cfg.k == 5.0);
    CHECK(cfg.t1 == doctest::Approx(M_PI / 2).epsilon(1e-10));
    CHECK(cfg.t2 == doctest::Approx(3 * M_PI / 2).epsilon(1e-10));
    CHECK(cfg.curve->reparameterized());

    CHECK_THROWS_AS(make_scattering_config(circle, 0.0, Vec2(1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_scattering_config(circle, -3.0, Vec2(1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_scattering_config(circle, 5.0, Vec2(1, 1)),
                    std::invalid_argument);
}

TEST_CASE("arc-length accessors require reparameterization") {
    const BoundaryCurve raw = make_curve(CurveKind::circle, {.radius = 1.0});
    CHECK_FALSE(raw.reparameterized());
    CHECK_THROWS_AS(raw.length(), std::logic_error);
    CHECK_THROWS_AS(raw.gamma(0.1), std::logic_error);
    CHECK_THROWS_AS(shadow_boundaries(raw, Vec2(1, 0)), std::logic_error);
}
