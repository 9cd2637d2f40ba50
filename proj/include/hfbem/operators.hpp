#pragma once

// CFIE kernels for sound-soft scattering, their smooth/log singularity
// split, the spectrally accurate log quadrature weights, the Nystrom
// reference solver, and the closed-form circle density.
//
// The operator equation is (1/2 I + D - ik S) eta = f with
//   S eta (x) = int Phi(x,y) eta(y) ds(y),   Phi = (i/4) H1_0(k|x-y|),
//   D eta (x) = int dPhi(x,y)/dnu(x) eta(y) ds(y),
//   f(s)     = ik (alpha . nu - 1) e^{ik alpha . gamma(s)},
// so the combined kernel away from the diagonal reads
//   K(s,t) = -(ik/4) H1_1(k r) (nu(s).(gamma(s)-gamma(t)))/r + (k/4) H1_0(k r).

#include "hfbem/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <vector>

namespace hfbem {

using cplx = std::complex<double>;

// Kernel value decomposed against the periodic log weight:
//   K(s,t) = A + B * ln(4 sin^2(pi (s - t) / L)),
// with A, B smooth and L-periodic in both arguments.
struct KernelSplit {
    cplx A;
    cplx B;
};

// Everything the kernels need at one boundary point; kappa_p / kappa_pp are
// arc-length derivatives of the curvature (used by the near-diagonal series).
struct CurveSample {
    double s = 0.0;
    Vec2 x = Vec2::Zero();
    Vec2 nu = Vec2::Zero();
    double kappa = 0.0;
    double kappa_p = 0.0;
    double kappa_pp = 0.0;
};

CurveSample sample_curve(const BoundaryCurve &curve, double s);

// Plane wave e^{ik alpha . x} and the CFIE right-hand side trace
// f(s) = ik (alpha . nu(s) - 1) e^{ik alpha . gamma(s)}.
cplx incident_wave(const ScatteringConfig &config, const Vec2 &x);
cplx incident_rhs(const ScatteringConfig &config, double s);
cplx incident_rhs_at(const ScatteringConfig &config, const CurveSample &p);

// Combined kernel of D - ik S by the direct Hankel formula; requires
// row.s != col.s (no diagonal limit taken here).
cplx cfie_kernel_direct(double k, const CurveSample &row, const CurveSample &col);

// Smooth/log split; valid for every (s, t) including the diagonal, where
//   A(s,s) = -kappa/(4 pi) + k/4 + (ik/(2 pi)) (gamma_E + ln(k L / (4 pi))),
//   B(s,s) = ik/(4 pi).
KernelSplit cfie_kernel_split(const ScatteringConfig &config,
                              const BoundaryCurve &curve, double s, double t);
KernelSplit cfie_kernel_split_at(double k, double L, const CurveSample &row,
                                 const CurveSample &col);

// Weights R_j such that sum_j R_{|i-j|} g(tau_j) approximates
// int_0^{2pi} ln(4 sin^2((tau_i - tau)/2)) g(tau) dtau on the uniform grid
// tau_j = 2 pi j / N, exactly for trigonometric polynomials of degree < N/2.
// N must be even and >= 4.
std::vector<double> kress_log_weights(int N);

// Dense Nystrom discretization of 1/2 I + D - ik S on the uniform N-point
// arc-length grid (trapezoid for the smooth part, Kress weights for the log
// part).  Row i applied to grid values approximates the operator at s_i.
Eigen::MatrixXcd nystrom_matrix(const ScatteringConfig &config, int N);

// Solution density on a uniform grid, with trigonometric off-grid evaluation.
class DensityGrid {
  public:
    DensityGrid(std::vector<double> nodes, Eigen::VectorXcd values, double k,
                std::shared_ptr<const BoundaryCurve> curve,
                double condition_estimate);

    const std::vector<double> &nodes() const { return nodes_; }
    const Eigen::VectorXcd &values() const { return values_; }
    double k() const { return k_; }
    const std::shared_ptr<const BoundaryCurve> &curve() const { return curve_; }
    double condition_estimate() const { return cond_; }

    // Trigonometric interpolation through the node values (exact at nodes).
    cplx interpolate(double s) const;

  private:
    std::vector<double> nodes_;
    Eigen::VectorXcd values_;
    double k_;
    std::shared_ptr<const BoundaryCurve> curve_;
    double cond_;
    Eigen::VectorXcd fourier_; // coefficients for interpolate()
};

// Solves the CFIE on the N-point grid.  N must be even; aim for
// N >= 10 * (L k / 2 pi) (ten points per wavelength) for resolved results.
// Throws numerical_error when the dense system is numerically singular.
DensityGrid nystrom_solve(const ScatteringConfig &config, int N);

// Separation-of-variables surface current on a circle of radius a:
//   eta(theta) = -(2i/(pi a)) sum_n i^n e^{i n (theta - theta_alpha)} / H1_n(ka).
// n_terms < 0 selects ceil(ka) + max(40, ceil(12 (ka)^{1/3})) terms.  The sum
// truncates early (harmlessly: terms ~ 1/|H_n| have already underflowed) if
// the Hankel sequence saturates; terms_used reports the count actually summed.
cplx circle_series_density(double k, double a, const Vec2 &alpha, double theta,
                           int n_terms = -1, int *terms_used = nullptr);

} // namespace hfbem
