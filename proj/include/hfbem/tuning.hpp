#pragma once

// Data-driven selection of the transition-map parameters.  Coordinate
// descent over (xi1, xi2, zeta1, zeta2) and, for J = 8, the primed interval
// extents, minimizing the measured density error of a small Galerkin solve
// against a trusted reference at the tuning wavenumber.

#include "hfbem/galerkin.hpp"
#include "hfbem/geometry.hpp"
#include "hfbem/hfspaces.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hfbem {

struct TuningOptions {
    int J = 6;                      // partition template (6 or 8 regions)
    BasisFamily family = BasisFamily::algebraic;
    int rounds = 6;                 // descent rounds; step halves per round
    double rel_tol = 0.02;          // stop when a round improves less than this
    int steps_per_sweep = 8;        // candidates tried per parameter sweep
    double initial_step_frac = 0.1; // first step size relative to the value
    int d = 4;                      // polynomial degree of the probe space
    int ppw = 10;                   // assembly points per wavelength
};

// State after one parameter sweep: the (possibly unchanged) accepted value,
// the error over the arc that parameter controls, and the error over the
// whole boundary.  The global column never increases along the history.
struct TuningRecord {
    int round = 0;
    std::string param;
    double value = 0.0;
    double local_err = 0.0;
    double global_err = 0.0;
};

struct TuningResult {
    CovParams params;
    double global_err = 0.0;
    int evaluations = 0; // Galerkin solves performed
    std::vector<TuningRecord> history;
};

// Merge-point template.  The interval extents fill the lit and shadow arcs:
// the IT pair merges at the illuminated pole (argmin of alpha . nu), the ST
// pair at the deep-shadow anchor s = 0, so xi1' + xi2' = t2 - t1 and
// zeta1' + zeta2' = L - (t2 - t1) hold exactly (J = 6).  For J = 8 the
// primed extents shrink to 80% of those distances, leaving IL and DS open.
// Unprimed values start at half the primed ones.
CovParams initial_cov_template(const ScatteringConfig &config, int J);

// Reference density the tuner (and the CLI) measures against: the analytic
// series for circles, otherwise a fine Nystrom solve (at least 12 points
// per wavelength, never fewer than 600).
std::function<cplx(double)> reference_density(const ScatteringConfig &config);

// Runs the descent from the merge-point template.  A candidate value is
// accepted only when it improves the error on the arc the parameter
// controls without increasing the whole-boundary error; infeasible
// candidates (violated parameter chains, empty intervals) are skipped.
TuningResult tune_parameters(const ScatteringConfig &config,
                             const TuningOptions &options = {});

} // namespace hfbem
