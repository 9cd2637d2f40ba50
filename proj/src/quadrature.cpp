#include "hfbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace hfbem {

namespace {

// Legendre P_q and its derivative at x (for Newton root refinement).
void legendre_pd(int q, double x, double &p, double &dp) {
    double p0 = 1.0, p1 = x;
    if (q == 0) {
        p = p0;
        dp = 0.0;
        return;
    }
    for (int n = 1; n < q; ++n) {
        const double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = q * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule compute_rule(int q) {
    GaussRule r;
    r.x.resize(q);
    r.w.resize(q);
    for (int i = 0; i < q; ++i) {
        // Tricomi-style initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre_pd(q, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16)
                break;
        }
        legendre_pd(q, x, p, dp);
        r.x[q - 1 - i] = x;
        r.w[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

} // namespace

const GaussRule &gauss_legendre(int q) {
    if (q < 2 || q > 20)
        throw std::invalid_argument("gauss_legendre: order must be in [2, 20]");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(q);
    if (it == cache.end())
        it = cache.emplace(q, compute_rule(q)).first;
    return it->second;
}

std::vector<double> legendre_log_moments(double lam, int n_max) {
    if (n_max < 0)
        throw std::invalid_argument("legendre_log_moments: n_max must be >= 0");
    std::vector<double> mu(static_cast<size_t>(n_max) + 1);
    const double ad = std::fabs(lam - 1.0), as = std::fabs(lam + 1.0);

    // Exactly at the endpoints the generic recurrence divides by zero, but
    // the moments themselves are finite: mu_n(+-1) = (-+1)^n * (-2/(n(n+1))).
    if (ad < 1e-12 || as < 1e-12) {
        const double sgn = (as < ad) ? -1.0 : 1.0; // lam = -1 vs lam = +1
        mu[0] = 2.0 * std::log(2.0) - 2.0;
        for (int n = 1; n <= n_max; ++n)
            mu[static_cast<size_t>(n)] =
                ((sgn < 0 && n % 2 == 1) ? 1.0 : -1.0) * 2.0 / (double(n) * (n + 1));
        return mu;
    }

    mu[0] = (1.0 - lam) * std::log(ad) + (1.0 + lam) * std::log(as) - 2.0;
    if (n_max == 0)
        return mu;

    // mu_n = (p_{n+1} - p_{n-1})/(2n+1) where p_n = 2 Q_n (second-kind
    // Legendre).  Upward recurrence is fine while the companion solution P_n
    // stays small (|lam| <= 1.1); beyond that use Miller's downward pass.
    const int top = n_max + 1;
    std::vector<double> p(static_cast<size_t>(top) + 1);
    // p_0 = ln(|lam+1| / |lam-1|) carries the correct sign in every regime
    // (positive for lam > 1, negative for lam < -1, principal value inside).
    const double p0 = std::log(as / ad);
    if (std::fabs(lam) <= 1.1) {
        p[0] = p0;
        p[1] = lam * p0 - 2.0;
        for (int n = 1; n < top; ++n)
            p[static_cast<size_t>(n) + 1] =
                ((2 * n + 1) * lam * p[static_cast<size_t>(n)] -
                 n * p[static_cast<size_t>(n) - 1]) /
                (n + 1);
    } else {
        // Downward: decay ratio of Q relative to P is rho^2 per order with
        // rho = 1/(|lam| + sqrt(lam^2-1)); start high enough that the seed
        // error is suppressed below 1e-18.
        const double t = std::fabs(lam) + std::sqrt(lam * lam - 1.0);
        const int extra = static_cast<int>(std::ceil(42.0 / (2.0 * std::log(t)))) + 8;
        const int start = top + extra;
        double hi = 0.0, cur = 1e-280;
        std::vector<double> tmp(static_cast<size_t>(start) + 1);
        for (int n = start; n >= 1; --n) {
            const double lo = ((2 * n + 1) * lam * cur - (n + 1) * hi) / n;
            hi = cur;
            cur = lo;
            if (n - 1 <= top)
                tmp[static_cast<size_t>(n - 1)] = cur;
            if (std::fabs(cur) > 1e250) {
                hi /= 1e250;
                cur /= 1e250;
                for (auto &v : tmp)
                    v /= 1e250;
            }
        }
        const double scale = p0 / tmp[0];
        for (int n = 0; n <= top; ++n)
            p[static_cast<size_t>(n)] = tmp[static_cast<size_t>(n)] * scale;
    }
    for (int n = 1; n <= n_max; ++n)
        mu[static_cast<size_t>(n)] =
            (p[static_cast<size_t>(n) + 1] - p[static_cast<size_t>(n) - 1]) /
            (2 * n + 1);
    return mu;
}

std::vector<double> log_product_weights(double lam, const GaussRule &rule) {
    const int q = static_cast<int>(rule.x.size());
    const std::vector<double> mu = legendre_log_moments(lam, q - 1);
    std::vector<double> v(static_cast<size_t>(q), 0.0);
    for (int i = 0; i < q; ++i) {
        const double x = rule.x[static_cast<size_t>(i)];
        double pm = 1.0, pc = x;
        double acc = 0.5 * mu[0] * pm;
        if (q > 1)
            acc += 1.5 * mu[1] * pc;
        for (int n = 2; n < q; ++n) {
            const double pn = ((2 * n - 1) * x * pc - (n - 1) * pm) / n;
            pm = pc;
            pc = pn;
            acc += (2 * n + 1) * 0.5 * mu[static_cast<size_t>(n)] * pc;
        }
        v[static_cast<size_t>(i)] = acc * rule.w[static_cast<size_t>(i)];
    }
    return v;
}

} // namespace hfbem
