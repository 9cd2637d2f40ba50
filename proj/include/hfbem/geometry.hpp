#pragma once

// Smooth closed boundary curves in the plane, their arc-length
// parameterization, and shadow-boundary location for a plane-wave direction.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hfbem {

using Vec2 = Eigen::Vector2d;

enum class CurveKind { circle, ellipse, kite, custom };

// Closed counterclockwise C-infinity curve.  Construct through make_curve or
// the custom-parametric constructor, then call arc_length_reparam to obtain
// the anchored arc-length accessors gamma / gamma_s / normal / curvature.
class BoundaryCurve {
  public:
    using MapFn = std::function<Vec2(double)>;

    // Custom parametrization on [0, 2pi) with two derivatives.
    BoundaryCurve(MapFn position, MapFn d1, MapFn d2,
                  CurveKind kind = CurveKind::custom,
                  std::string label = "custom");

    CurveKind kind() const { return kind_; }
    const std::string &label() const { return label_; }

    // Raw-parameter accessors (t in radians on [0, 2pi), wrapped).
    Vec2 raw_point(double t) const { return pos_(wrap_raw(t)); }
    Vec2 raw_d1(double t) const { return d1_(wrap_raw(t)); }
    Vec2 raw_d2(double t) const { return d2_(wrap_raw(t)); }
    double raw_speed(double t) const { return raw_d1(t).norm(); }
    double raw_curvature(double t) const;

    // Arc-length interface; valid only after arc_length_reparam.
    bool reparameterized() const { return reparameterized_; }
    double length() const;           // total length L
    double anchor() const;           // raw parameter t0 where alpha.nu = 1
    Vec2 gamma(double s) const;      // position at arc length s (L-periodic)
    Vec2 gamma_s(double s) const;    // unit tangent
    Vec2 normal(double s) const;     // outward unit normal, rotate(gamma_s, -90 deg)
    double curvature(double s) const;

    // Conversions between raw parameter and anchored arc length.
    double raw_param_of(double s) const;
    double arc_of_raw(double t) const;

    friend BoundaryCurve arc_length_reparam(const BoundaryCurve &curve,
                                            const Vec2 &alpha);

  private:
    double wrap_raw(double t) const;
    double cumulative(double t) const; // arc length from raw 0 to t
    void build_table();
    void require_reparam(const char *op) const;

    MapFn pos_, d1_, d2_;
    CurveKind kind_;
    std::string label_;
    bool reparameterized_ = false;
    double length_ = 0.0;
    double anchor_t0_ = 0.0;
    double anchor_arc_ = 0.0; // cumulative(anchor_t0_)
    std::vector<double> cum_; // cumulative length at uniform raw samples
};

// Shape parameters for make_curve; unused fields are ignored per kind.
struct ShapeParams {
    double radius = 1.0; // circle
    double a = 2.0;      // ellipse semi-axes, a > b > 0
    double b = 1.0;
};

// circle: (R cos t, R sin t); ellipse: (a cos t, b sin t);
// kite: (cos t + 0.65 cos 2t - 0.65, 1.5 sin t).
// Throws std::invalid_argument for non-positive shape parameters.
BoundaryCurve make_curve(CurveKind kind, const ShapeParams &params = {});

// Returns a copy of the curve carrying the anchored arc-length accessors:
// s = 0 is placed where alpha . nu(gamma(0)) = 1.  Throws numerical_error if
// the normal field never aligns with alpha (broken normal computation).
BoundaryCurve arc_length_reparam(const BoundaryCurve &curve, const Vec2 &alpha);

// Locates the two roots of alpha . nu(gamma(s)) = 0 for an anchored curve.
// Postcondition: 0 < t1 < t2 < L with alpha.nu < 0 on (t1, t2) (illuminated
// side) and > 0 on (t2, t1 + L).  More than two sign changes throw
// numerical_error listing every root found.
std::pair<double, double> shadow_boundaries(const BoundaryCurve &curve,
                                            const Vec2 &alpha);

// Incidence problem: anchored curve, wavenumber, unit direction, and the
// shadow boundaries for that direction.
struct ScatteringConfig {
    std::shared_ptr<const BoundaryCurve> curve;
    double k = 0.0;
    Vec2 alpha = Vec2(1.0, 0.0);
    double t1 = 0.0;
    double t2 = 0.0;
};

// Validates k > 0 and |alpha| = 1 (within 1e-14; pass exact-norm input),
// anchors the curve for alpha, and fills t1, t2.
ScatteringConfig make_scattering_config(const BoundaryCurve &curve, double k,
                                        const Vec2 &alpha);

} // namespace hfbem
