#pragma once

// Small quadrature toolbox: fixed Gauss-Legendre rules and a product rule
// for integrands with a logarithmic factor against a polynomial basis.

#include <array>
#include <vector>

namespace hfbem {

// Nodes/weights of the q-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// q in {2..20}; values are tabulated for 10 and 16 and computed by
// Newton iteration on Legendre polynomials otherwise.
const GaussRule &gauss_legendre(int q);

// integrate f over [a, b] with the q-point rule
template <typename F>
double gauss_integrate(const F &f, double a, double b, int q = 10) {
    const GaussRule &g = gauss_legendre(q);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i)
        acc += g.w[i] * f(mid + half * g.x[i]);
    return acc * half;
}

// Moments mu_n(lam) = int_{-1}^{1} P_n(x) ln|lam - x| dx for n = 0..n_max.
// Used to build product rules exact for (polynomial deg <= n_max) * ln|lam-x|.
// Stable for every real lam, including |lam| <= 1 and lam = +-1.
std::vector<double> legendre_log_moments(double lam, int n_max);

// Weights v_q such that sum_q v_q f(x_q) = int_{-1}^1 f(x) ln|lam - x| dx
// exactly when f is a polynomial of degree < rule size, evaluated at the
// Gauss-Legendre nodes of `rule`.
std::vector<double> log_product_weights(double lam, const GaussRule &rule);

} // namespace hfbem
