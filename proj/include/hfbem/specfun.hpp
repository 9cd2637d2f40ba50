#pragma once

// Bessel and Hankel function evaluation tuned for Helmholtz kernels.
//
// Everything here targets double precision over the argument range that
// matters for boundary integral work (roughly 1e-3 .. 1e4 after kernel
// scaling).  Small arguments use long-double power series, large arguments
// the Hankel asymptotic expansions; the crossover is chosen so both sides
// agree to ~1e-13 at the seam.

#include <complex>
#include <vector>

namespace hfbem {

// J0, Y0, J1, Y1 at a single positive argument.
struct Jy01 {
    double j0;
    double y0;
    double j1;
    double y1;
};

// Throws std::domain_error for x <= 0 (Y_n has a branch cut there).
Jy01 bessel_jy01(double x);

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);

// Regularized combinations that stay smooth through x = 0:
//   y0_reg(x)  = Y0(x) - (2/pi) ln(x/2) J0(x)        (even entire function)
//   y1_mreg(x) = x * (Y1(x) - (2/pi) ln(x/2) J1(x))  (even entire function)
// y0_reg(0) = 2*gamma/pi, y1_mreg(0) = -2/pi.  Both accept x = 0.
double y0_reg(double x);
double y1_mreg(double x);

// J0, J1 plus the two regularized parts, in one evaluation pass; this is the
// bundle every kernel entry needs.  Accepts x = 0 (diagonal limits).
struct Jy01Reg {
    double j0;
    double j1;
    double y0r;  // y0_reg(x)
    double y1m;  // y1_mreg(x)
};

Jy01Reg bessel_jy01_reg(double x);

// First-kind Hankel function H^(1)_n(x) = J_n(x) + i Y_n(x), n >= 0, x > 0.
std::complex<double> hankel1(int n, double x);

// H^(1)_0 .. H^(1)_n_max at one argument.  J_n comes from Miller's downward
// recurrence, Y_n from the (stable) upward recurrence.  When Y_n overflows,
// the remaining entries are set to +-inf and first_saturated records the
// first affected order; it is -1 if every entry is finite.
struct Hankel1Seq {
    std::vector<std::complex<double>> values;
    int first_saturated = -1;
};

Hankel1Seq hankel1_seq(int n_max, double x);

// J_0 .. J_n_max by Miller's algorithm (used by hankel1_seq, exposed for
// tests and for the circle reference solution).
std::vector<double> bessel_j_seq(int n_max, double x);

} // namespace hfbem
