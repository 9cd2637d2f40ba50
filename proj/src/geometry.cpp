#include "hfbem/geometry.hpp"

#include "hfbem/errors.hpp"
#include "hfbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hfbem {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr int kTableCells = 2048;

double wrap_into(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0)
        r += period;
    return r;
}

Vec2 rotate_minus90(const Vec2 &v) { return Vec2(v.y(), -v.x()); }

} // namespace

BoundaryCurve::BoundaryCurve(MapFn position, MapFn d1, MapFn d2, CurveKind kind,
                             std::string label)
    : pos_(std::move(position)), d1_(std::move(d1)), d2_(std::move(d2)),
      kind_(kind), label_(std::move(label)) {
    // Closure check: position and derivatives must match at 0 and 2pi.
    for (const auto *f : {&pos_, &d1_, &d2_}) {
        const Vec2 gap = (*f)(0.0) - (*f)(kTwoPi);
        if (gap.norm() > 1e-12)
            throw std::invalid_argument("BoundaryCurve: parametrization is not closed "
                                        "(mismatch at t = 0 vs t = 2pi)");
    }
    build_table();
    // Orientation check via the shoelace integral (1/2) closed-int (x y' - y x') dt.
    double area = 0.0;
    const double h = kTwoPi / kTableCells;
    for (int i = 0; i < kTableCells; ++i)
        area += gauss_integrate(
            [&](double t) {
                const Vec2 p = pos_(t), d = d1_(t);
                return p.x() * d.y() - p.y() * d.x();
            },
            i * h, (i + 1) * h);
    if (area <= 0.0)
        throw std::invalid_argument("BoundaryCurve: orientation must be "
                                    "counterclockwise (enclosed area > 0)");
}

void BoundaryCurve::build_table() {
    cum_.assign(kTableCells + 1, 0.0);
    const double h = kTwoPi / kTableCells;
    for (int i = 0; i < kTableCells; ++i)
        cum_[i + 1] = cum_[i] + gauss_integrate(
                                    [&](double t) { return d1_(t).norm(); },
                                    i * h, (i + 1) * h);
}

double BoundaryCurve::wrap_raw(double t) const { return wrap_into(t, kTwoPi); }

double BoundaryCurve::cumulative(double t) const {
    t = wrap_raw(t);
    const double h = kTwoPi / kTableCells;
    int cell = std::min(static_cast<int>(t / h), kTableCells - 1);
    return cum_[cell] +
           gauss_integrate([&](double u) { return d1_(u).norm(); }, cell * h, t);
}

double BoundaryCurve::raw_curvature(double t) const {
    const Vec2 d = raw_d1(t), dd = raw_d2(t);
    const double sp = d.norm();
    return (d.x() * dd.y() - d.y() * dd.x()) / (sp * sp * sp);
}

void BoundaryCurve::require_reparam(const char *op) const {
    if (!reparameterized_)
        throw std::logic_error(std::string(op) +
                               ": curve has no arc-length parameterization yet "
                               "(call arc_length_reparam first)");
}

double BoundaryCurve::length() const {
    require_reparam("length");
    return length_;
}

double BoundaryCurve::anchor() const {
    require_reparam("anchor");
    return anchor_t0_;
}

double BoundaryCurve::raw_param_of(double s) const {
    require_reparam("raw_param_of");
    const double target = wrap_into(anchor_arc_ + wrap_into(s, length_), length_);
    // Bracket from the cumulative table, then safeguarded Newton on
    // cumulative(t) = target.
    const auto hi = std::upper_bound(cum_.begin(), cum_.end(), target);
    int cell = std::max(0, static_cast<int>(hi - cum_.begin()) - 1);
    cell = std::min(cell, kTableCells - 1);
    const double h = kTwoPi / kTableCells;
    double lo = cell * h, up = (cell + 1) * h;
    const double frac = (target - cum_[cell]) /
                        std::max(cum_[cell + 1] - cum_[cell], 1e-300);
    double t = lo + frac * h;
    for (int it = 0; it < 60; ++it) {
        const double f = cumulative(t) - target;
        if (std::fabs(f) < 1e-13 * std::max(1.0, length_))
            break;
        if (f > 0.0)
            up = t;
        else
            lo = t;
        const double step = f / d1_(t).norm();
        t -= step;
        if (t <= lo || t >= up)
            t = 0.5 * (lo + up); // bisection fallback keeps the bracket
    }
    return t;
}

double BoundaryCurve::arc_of_raw(double t) const {
    require_reparam("arc_of_raw");
    return wrap_into(cumulative(t) - anchor_arc_, length_);
}

Vec2 BoundaryCurve::gamma(double s) const { return pos_(raw_param_of(s)); }

Vec2 BoundaryCurve::gamma_s(double s) const {
    return d1_(raw_param_of(s)).normalized();
}

Vec2 BoundaryCurve::normal(double s) const {
    return rotate_minus90(gamma_s(s));
}

double BoundaryCurve::curvature(double s) const {
    return raw_curvature(raw_param_of(s));
}

BoundaryCurve make_curve(CurveKind kind, const ShapeParams &params) {
    switch (kind) {
    case CurveKind::circle: {
        const double R = params.radius;
        if (!(R > 0.0))
            throw std::invalid_argument("make_curve: circle radius must be positive");
        return BoundaryCurve(
            [R](double t) { return Vec2(R * std::cos(t), R * std::sin(t)); },
            [R](double t) { return Vec2(-R * std::sin(t), R * std::cos(t)); },
            [R](double t) { return Vec2(-R * std::cos(t), -R * std::sin(t)); },
            CurveKind::circle, "circle");
    }
    case CurveKind::ellipse: {
        const double a = params.a, b = params.b;
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("make_curve: ellipse semi-axes must be positive");
        if (!(a > b))
            throw std::invalid_argument("make_curve: ellipse requires a > b");
        return BoundaryCurve(
            [a, b](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); },
            [a, b](double t) { return Vec2(-a * std::sin(t), b * std::cos(t)); },
            [a, b](double t) { return Vec2(-a * std::cos(t), -b * std::sin(t)); },
            CurveKind::ellipse, "ellipse");
    }
    case CurveKind::kite:
        return BoundaryCurve(
            [](double t) {
                return Vec2(std::cos(t) + 0.65 * std::cos(2 * t) - 0.65,
                            1.5 * std::sin(t));
            },
            [](double t) {
                return Vec2(-std::sin(t) - 1.3 * std::sin(2 * t),
                            1.5 * std::cos(t));
            },
            [](double t) {
                return Vec2(-std::cos(t) - 2.6 * std::cos(2 * t),
                            -1.5 * std::sin(t));
            },
            CurveKind::kite, "kite");
    case CurveKind::custom:
        throw std::invalid_argument("make_curve: custom curves use the "
                                    "BoundaryCurve constructor directly");
    }
    throw std::invalid_argument("make_curve: unknown curve kind");
}

BoundaryCurve arc_length_reparam(const BoundaryCurve &curve, const Vec2 &alpha) {
    BoundaryCurve out = curve;
    const auto align = [&](double t) {
        const Vec2 nu = rotate_minus90(out.d1_(wrap_into(t, kTwoPi)).normalized());
        return alpha.dot(nu);
    };
    // d/dt of alpha . nu: nu = rot(T), T = d1/|d1|, T' = (d2 - T (T.d2))/|d1|.
    const auto align_deriv = [&](double t) {
        t = wrap_into(t, kTwoPi);
        const Vec2 d1 = out.d1_(t), d2 = out.d2_(t);
        const double sp = d1.norm();
        const Vec2 T = d1 / sp;
        const Vec2 Tp = (d2 - T * T.dot(d2)) / sp;
        return alpha.dot(Vec2(Tp.y(), -Tp.x()));
    };
    // Coarse scan for the best-aligned normal, then bisect align' = 0; a
    // value-based search cannot resolve the flat maximum past ~1e-8.
    const int n = 8192;
    int best = 0;
    double best_val = align(0.0);
    for (int i = 1; i < n; ++i) {
        const double v = align(kTwoPi * i / n);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = kTwoPi * (best - 1) / n, up = kTwoPi * (best + 1) / n;
    double dlo = align_deriv(lo);
    for (int it = 0; it < 100 && up - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + up);
        const double dm = align_deriv(mid);
        if ((dlo > 0.0) == (dm > 0.0)) {
            lo = mid;
            dlo = dm;
        } else {
            up = mid;
        }
    }
    const double t0 = wrap_into(0.5 * (lo + up), kTwoPi);
    if (align(t0) < 1.0 - 1e-10)
        throw numerical_error("arc_length_reparam: alpha . nu = 1 has no solution; "
                              "normal field looks broken (max alignment " +
                              std::to_string(align(t0)) + ")");
    out.reparameterized_ = true;
    out.length_ = out.cum_.back();
    out.anchor_t0_ = t0;
    out.anchor_arc_ = out.cumulative(t0);
    return out;
}

std::pair<double, double> shadow_boundaries(const BoundaryCurve &curve,
                                            const Vec2 &alpha) {
    if (!curve.reparameterized())
        throw std::logic_error("shadow_boundaries: curve must be arc-length "
                               "parameterized (call arc_length_reparam first)");
    const auto g_raw = [&](double t) {
        const Vec2 d = curve.raw_d1(t);
        return alpha.dot(Vec2(d.y(), -d.x())) / d.norm();
    };
    const int n = 8192;
    std::vector<double> roots_raw;
    double prev = g_raw(0.0);
    for (int i = 1; i <= n; ++i) {
        const double t = kTwoPi * i / n;
        const double cur = g_raw(t);
        if ((prev < 0.0) != (cur < 0.0)) {
            double lo = kTwoPi * (i - 1) / n, up = t;
            double flo = prev;
            for (int it = 0; it < 100 && up - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + up);
                const double fm = g_raw(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    up = mid;
                }
            }
            roots_raw.push_back(0.5 * (lo + up));
        }
        prev = cur;
    }
    if (roots_raw.size() != 2) {
        std::ostringstream msg;
        msg << "shadow_boundaries: expected exactly two sign changes of "
               "alpha . nu, found "
            << roots_raw.size() << "; roots at raw t =";
        for (double r : roots_raw)
            msg << " " << r;
        throw numerical_error(msg.str());
    }
    double t1 = curve.arc_of_raw(roots_raw[0]);
    double t2 = curve.arc_of_raw(roots_raw[1]);
    if (t1 > t2)
        std::swap(t1, t2);
    return {t1, t2};
}

ScatteringConfig make_scattering_config(const BoundaryCurve &curve, double k,
                                        const Vec2 &alpha) {
    if (!(k > 0.0))
        throw std::invalid_argument("make_scattering_config: k must be positive");
    if (std::fabs(alpha.norm() - 1.0) > 1e-14)
        throw std::invalid_argument("make_scattering_config: alpha must be a "
                                    "unit vector");
    auto anchored = std::make_shared<BoundaryCurve>(
        curve.reparameterized() ? curve : arc_length_reparam(curve, alpha));
    if (std::fabs(alpha.dot(anchored->normal(0.0)) - 1.0) > 1e-10)
        throw numerical_error("make_scattering_config: anchor convention "
                              "alpha . nu(gamma(0)) = 1 violated");
    const auto [t1, t2] = shadow_boundaries(*anchored, alpha);
    ScatteringConfig cfg;
    cfg.curve = std::move(anchored);
    cfg.k = k;
    cfg.alpha = alpha;
    cfg.t1 = t1;
    cfg.t2 = t2;
    return cfg;
}

} // namespace hfbem
