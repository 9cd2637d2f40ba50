#pragma once

// Galerkin discretization of the combined field equation over an
// oscillation-weighted space: assembly of the stiffness matrix and load
// vector, the direct solve with iterative refinement, and the relative L2
// error metric against a reference density.

#include "hfbem/geometry.hpp"
#include "hfbem/hfspaces.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hfbem {

struct GalerkinSystem {
    Eigen::MatrixXcd M; // <b_i, (1/2 I + D - ik S) b_j>, conjugation on b_i
    Eigen::VectorXcd F; // <b_i, f>
    int quadrature_nodes = 0;
};

// Assembles the Galerkin system.  Non-overlapping (algebraic) spaces use
// composite Gauss panels roughly 7.5/ppw wavelengths wide, placed through
// the transition maps, with the log singularity integrated by product-log
// weights; overlapping (trigonometric) spaces use the global Kress grid
// sized to ppw points per local wavelength (incident plus basis).
// ppw < 6 is refused (std::invalid_argument).
GalerkinSystem assemble(const GalerkinSpace &space,
                        const ScatteringConfig &config, int ppw);

struct DensitySolution {
    Eigen::VectorXcd coefficients;
    double residual = 0.0; // relative residual |F - M c| / |F| of the solve
    double condition_estimate = 0.0;
    std::vector<std::string> warnings;
    std::shared_ptr<const GalerkinSpace> space;

    cplx eval(double s) const; // density value at arc length s
};

// LU solve plus up to three iterative-refinement steps with residuals
// accumulated in extended precision.  Throws numerical_error when the matrix
// is numerically singular or the relative residual cannot be brought below
// 1e-10; a condition estimate above 1e12 only attaches a warning.
DensitySolution solve(const GalerkinSpace &space, const GalerkinSystem &system);

enum class ErrorRegion { whole, shadow };

// Relative L2 distance between densities over the whole boundary or the
// shadow arc (t2, t1 + L), by trapezoid sums on a grid of at least ppw
// (>= 20) points per wavelength.  Throws std::invalid_argument when the
// reference vanishes on the region.
double relative_l2_error(const std::function<cplx(double)> &approx,
                         const std::function<cplx(double)> &reference,
                         const ScatteringConfig &config, ErrorRegion region,
                         int ppw = 20);

} // namespace hfbem
