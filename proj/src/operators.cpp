#include "hfbem/operators.hpp"

#include "hfbem/errors.hpp"
#include "hfbem/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hfbem {

namespace {

constexpr double kGammaE = 0.57721566490153286;

// Signed periodic parameter difference in (-L/2, L/2].
double wrap_signed(double u, double L) {
    u = std::fmod(u, L);
    if (u > 0.5 * L)
        u -= L;
    else if (u <= -0.5 * L)
        u += L;
    return u;
}

// nu(s) . (gamma(s) - gamma(t)) / r^2 degenerates to 0/0 at the diagonal;
// below |u| ~ 5e-3 (L/2pi) the Taylor series in u = s - t is more accurate
// than the direct quotient.
double w2_value(const CurveSample &row, const CurveSample &col, double u,
                double L, double r2) {
    if (std::fabs(u) < 5e-3 * (L / (2.0 * M_PI)))
        return 0.5 * row.kappa - row.kappa_p * u / 6.0 +
               row.kappa_pp * u * u / 24.0;
    return row.nu.dot(row.x - col.x) / r2;
}

} // namespace

CurveSample sample_curve(const BoundaryCurve &curve, double s) {
    CurveSample p;
    p.s = s;
    p.x = curve.gamma(s);
    p.nu = curve.normal(s);
    p.kappa = curve.curvature(s);
    // Curvature derivatives by fourth/second order central differences; the
    // step balances truncation against the inversion noise in curvature().
    const double e = 1e-2 * (curve.length() / (2.0 * M_PI));
    const double km2 = curve.curvature(s - 2 * e), km1 = curve.curvature(s - e);
    const double kp1 = curve.curvature(s + e), kp2 = curve.curvature(s + 2 * e);
    p.kappa_p = (-kp2 + 8 * kp1 - 8 * km1 + km2) / (12 * e);
    p.kappa_pp = (kp1 - 2 * p.kappa + km1) / (e * e);
    return p;
}

cplx incident_wave(const ScatteringConfig &config, const Vec2 &x) {
    return std::exp(cplx(0.0, config.k * config.alpha.dot(x)));
}

cplx incident_rhs_at(const ScatteringConfig &config, const CurveSample &p) {
    const cplx ik(0.0, config.k);
    return ik * (config.alpha.dot(p.nu) - 1.0) * incident_wave(config, p.x);
}

cplx incident_rhs(const ScatteringConfig &config, double s) {
    return incident_rhs_at(config, sample_curve(*config.curve, s));
}

cplx cfie_kernel_direct(double k, const CurveSample &row, const CurveSample &col) {
    const Vec2 d = row.x - col.x;
    const double r = d.norm();
    if (r == 0.0)
        throw std::domain_error("cfie_kernel_direct: coincident points; use "
                                "the split's diagonal limit");
    const double w = row.nu.dot(d) / r;
    const Jy01 b = bessel_jy01(k * r);
    const cplx h0(b.j0, b.y0), h1(b.j1, b.y1);
    return -cplx(0.0, 0.25 * k) * h1 * w + 0.25 * k * h0;
}

KernelSplit cfie_kernel_split_at(double k, double L, const CurveSample &row,
                                 const CurveSample &col) {
    const double u = wrap_signed(row.s - col.s, L);
    if (std::fabs(u) < 1e-14 * L) {
        KernelSplit d;
        d.A = cplx(-row.kappa / (4.0 * M_PI) + 0.25 * k,
                   k / (2.0 * M_PI) * (kGammaE + std::log(k * L / (4.0 * M_PI))));
        d.B = cplx(0.0, k / (4.0 * M_PI));
        return d;
    }
    const Vec2 d = row.x - col.x;
    const double r2 = d.squaredNorm();
    const double r = std::sqrt(r2);
    const double w2 = w2_value(row, col, u, L, r2);
    const double w = w2 * r;
    const Jy01Reg b = bessel_jy01_reg(k * r);
    // m = ln(k rho1 / (2 rho2)) written as one quotient; numerator and
    // denominator vanish together at the diagonal, so no cancellation.
    const double m = std::log(k * r / (4.0 * std::fabs(std::sin(M_PI * u / L))));
    KernelSplit out;
    out.B = cplx(k / (4.0 * M_PI) * w * b.j1, k / (4.0 * M_PI) * b.j0);
    out.A = cplx(0.25 * k * (b.j0 + w2 * b.y1m / k) +
                     k / (2.0 * M_PI) * m * w * b.j1,
                 -0.25 * k * w * b.j1 + k / (2.0 * M_PI) * m * b.j0 +
                     0.25 * k * b.y0r);
    return out;
}

KernelSplit cfie_kernel_split(const ScatteringConfig &config,
                              const BoundaryCurve &curve, double s, double t) {
    return cfie_kernel_split_at(config.k, curve.length(), sample_curve(curve, s),
                                sample_curve(curve, t));
}

std::vector<double> kress_log_weights(int N) {
    if (N < 4 || N % 2 != 0)
        throw std::invalid_argument("kress_log_weights: N must be even and >= 4");
    const int n = N / 2;
    std::vector<double> R(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int m = 1; m < n; ++m)
            s += std::cos(m * j * M_PI / n) / m;
        R[static_cast<size_t>(j)] =
            -(2.0 * M_PI / n) * (s + ((j % 2 == 0) ? 1.0 : -1.0) / (2.0 * n));
    }
    return R;
}

Eigen::MatrixXcd nystrom_matrix(const ScatteringConfig &config, int N) {
    if (N < 4 || N % 2 != 0)
        throw std::invalid_argument("nystrom_matrix: N must be even and >= 4");
    const BoundaryCurve &curve = *config.curve;
    const double L = curve.length();
    const double h = L / N;
    std::vector<CurveSample> nodes(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i)
        nodes[static_cast<size_t>(i)] = sample_curve(curve, i * h);
    const std::vector<double> R = kress_log_weights(N);
    Eigen::MatrixXcd M(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const KernelSplit ks = cfie_kernel_split_at(
                config.k, L, nodes[static_cast<size_t>(i)],
                nodes[static_cast<size_t>(j)]);
            M(i, j) = h * ks.A +
                      (L / (2.0 * M_PI)) * R[static_cast<size_t>(std::abs(i - j))] *
                          ks.B;
            if (i == j)
                M(i, j) += 0.5;
        }
    }
    return M;
}

DensityGrid::DensityGrid(std::vector<double> nodes, Eigen::VectorXcd values,
                         double k, std::shared_ptr<const BoundaryCurve> curve,
                         double condition_estimate)
    : nodes_(std::move(nodes)), values_(std::move(values)), k_(k),
      curve_(std::move(curve)), cond_(condition_estimate) {
    // Direct DFT: coefficients c_m, m = -N/2 .. N/2-1.
    const int N = static_cast<int>(nodes_.size());
    fourier_.resize(N);
    for (int m = -N / 2; m < N / 2; ++m) {
        cplx acc = 0.0;
        for (int j = 0; j < N; ++j)
            acc += values_[j] *
                   std::exp(cplx(0.0, -2.0 * M_PI * m * j / double(N)));
        fourier_[m + N / 2] = acc / double(N);
    }
}

cplx DensityGrid::interpolate(double s) const {
    const int N = static_cast<int>(nodes_.size());
    const double L = curve_->length();
    cplx acc = 0.0;
    for (int m = -N / 2; m < N / 2; ++m)
        acc += fourier_[m + N / 2] * std::exp(cplx(0.0, 2.0 * M_PI * m * s / L));
    return acc;
}

DensityGrid nystrom_solve(const ScatteringConfig &config, int N) {
    const Eigen::MatrixXcd M = nystrom_matrix(config, N);
    const double L = config.curve->length();
    Eigen::VectorXcd f(N);
    std::vector<double> nodes(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        nodes[static_cast<size_t>(i)] = i * L / N;
        f[i] = incident_rhs(config, nodes[static_cast<size_t>(i)]);
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
        std::ostringstream msg;
        msg << "nystrom_solve: dense system numerically singular "
               "(reciprocal condition estimate "
            << rc << ")";
        throw numerical_error(msg.str());
    }
    Eigen::VectorXcd eta = lu.solve(f);
    return DensityGrid(std::move(nodes), std::move(eta), config.k, config.curve,
                       1.0 / rc);
}

cplx circle_series_density(double k, double a, const Vec2 &alpha, double theta,
                           int n_terms, int *terms_used) {
    if (!(k > 0.0) || !(a > 0.0))
        throw std::invalid_argument("circle_series_density: k and a must be positive");
    const double ka = k * a;
    if (n_terms < 0)
        n_terms = static_cast<int>(std::ceil(ka)) +
                  std::max(40, static_cast<int>(std::ceil(12.0 * std::cbrt(ka))));
    if (n_terms < ka + 20)
        throw std::invalid_argument("circle_series_density: n_terms must be "
                                    ">= ka + 20 for a converged tail");
    const Hankel1Seq H = hankel1_seq(n_terms, ka);
    const int stop = (H.first_saturated >= 0) ? H.first_saturated - 1 : n_terms;
    const double rel = theta - std::atan2(alpha.y(), alpha.x());
    cplx sum = 1.0 / H.values[0];
    cplx i_pow(0.0, 1.0);
    for (int n = 1; n <= stop; ++n) {
        sum += 2.0 * i_pow * std::cos(n * rel) / H.values[static_cast<size_t>(n)];
        i_pow *= cplx(0.0, 1.0);
    }
    if (terms_used)
        *terms_used = stop;
    return cplx(0.0, -2.0 / (M_PI * a)) * sum;
}

} // namespace hfbem
