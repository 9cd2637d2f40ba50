#include "hfbem/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hfbem {

namespace {

constexpr long double kGammaE = 0.57721566490153286060651209008240243L;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;

// Power series / asymptotic crossover.  The optimally truncated asymptotic
// expansion bottoms out near exp(-2x); at x = 16 that is ~1e-14, which keeps
// the composite evaluation at the 1e-12 level the kernel code relies on.
constexpr double kSeriesCut = 16.0;

struct Jy01L {
    long double j0, y0, j1, y1;
};

// Ascending series (long double working precision).  With x <= 16 the
// largest term is ~ (x/2)^(2m)/(m!)^2 <= e^{2x}/(2 pi x) ~ 1e12, so the
// alternating-sum cancellation costs at most ~1e12 * 1e-19 = 1e-7 relative
// to the largest term, i.e. well below 1e-13 absolute for |J|,|Y| = O(0.1).
Jy01L jy01_series(long double x) {
    const long double q = x * x / 4.0L; // (x/2)^2
    // J0 = sum (-q)^m / (m!)^2 ; J1 = (x/2) sum (-q)^m / (m!(m+1)!)
    long double t0 = 1.0L, t1 = 1.0L;
    long double j0 = 1.0L, j1 = 1.0L;
    // Regularized Y-series:
    //   y0_reg  = (2/pi)[ gamma J0 + sum_{m>=1} (-1)^{m+1} h_m q^m/(m!)^2 ]
    //   y1_mreg = -(2/pi) + (2/pi) gamma (x/2) x J1/x ... assembled below via
    //   y1_mreg = x*Y1 - (2/pi) x ln(x/2) J1 with the DLMF 10.8.2 sum.
    long double h = 0.0L;              // h_m = 1 + 1/2 + ... + 1/m
    long double s0 = 0.0L;             // sum for Y0
    long double s1 = 0.0L;             // sum_{m>=0} (-1)^m (h_m + h_{m+1}) q^m / (m!(m+1)!)
    long double u1 = 1.0L;             // q^m / (m!(m+1)!)
    s1 = 1.0L; // m = 0 term: h_0 + h_1 = 1
    long double sign = 1.0L;
    for (int m = 1; m <= 60; ++m) {
        t0 *= q / (static_cast<long double>(m) * m);
        t1 *= q / (static_cast<long double>(m) * (m + 1));
        u1 *= q / (static_cast<long double>(m) * (m + 1));
        sign = -sign;
        h += 1.0L / m;
        j0 += sign * t0;
        j1 += sign * t1;
        s0 += -sign * h * t0; // (-1)^{m+1} h_m q^m/(m!)^2
        s1 += sign * (2.0L * h + 1.0L / (m + 1)) * u1;
        if (t0 < 1e-22L * std::fabs(j0) && m > 4)
            break;
    }
    j1 *= x / 2.0L;
    const long double lg = std::log(x / 2.0L);
    Jy01L r;
    r.j0 = j0;
    r.j1 = j1;
    r.y0 = (2.0L / kPiL) * ((lg + kGammaE) * j0 + s0);
    // DLMF 10.8.2 for n=1:
    //   Y1 = -(2/(pi x)) + (2/pi) ln(x/2) J1 - (x/(2 pi)) sum (-1)^m (h_m+h_{m+1}) q^m/(m!(m+1)!)
    //        + (2 gamma/pi) J1  folded into the sum via h-terms handled above
    r.y1 = -2.0L / (kPiL * x) + (2.0L / kPiL) * (lg + kGammaE) * j1
           - (x / (2.0L * kPiL)) * s1;
    return r;
}

// Hankel's large-argument expansions (DLMF 10.17): with chi = x-(2n+1)pi/4,
//   J_n = sqrt(2/(pi x)) [P cos chi - Q sin chi]
//   Y_n = sqrt(2/(pi x)) [P sin chi + Q cos chi]
// P, Q are the usual asymptotic sums in 1/(8x)^2; truncated once terms grow.
Jy01L jy01_asymptotic(long double x) {
    // With a_0 = 1 and a_k = a_{k-1} (mu - (2k-1)^2) / (8k), mu = 4n^2:
    //   P = sum_{k even} (-1)^{k/2}     a_k / x^k
    //   Q = sum_{k odd } (-1)^{(k-1)/2} a_k / x^k
    auto pq = [&](int n, long double &P, long double &Q) {
        const long double mu = 4.0L * n * n;
        P = 1.0L;
        Q = 0.0L;
        long double t = 1.0L; // a_k / x^k
        long double prev = 1.0L;
        for (int k = 1; k <= 40; ++k) {
            t *= (mu - (2.0L * k - 1.0L) * (2.0L * k - 1.0L)) /
                 (8.0L * k * x);
            if (std::fabs(t) > prev)
                break; // asymptotic series started diverging
            prev = std::fabs(t);
            if (k % 2 == 1)
                Q += (((k - 1) / 2) % 2 == 0) ? t : -t;
            else
                P += ((k / 2) % 2 == 0) ? t : -t;
        }
    };
    Jy01L r;
    const long double amp = std::sqrt(2.0L / (kPiL * x));
    for (int n = 0; n <= 1; ++n) {
        long double P, Q;
        pq(n, P, Q);
        const long double chi = x - (2 * n + 1) * kPiL / 4.0L;
        const long double c = std::cos(chi), s = std::sin(chi);
        const long double jn = amp * (P * c - Q * s);
        const long double yn = amp * (P * s + Q * c);
        if (n == 0) {
            r.j0 = jn;
            r.y0 = yn;
        } else {
            r.j1 = jn;
            r.y1 = yn;
        }
    }
    return r;
}

Jy01L jy01_impl(double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_jy01: argument must be positive");
    if (x < kSeriesCut)
        return jy01_series(static_cast<long double>(x));
    return jy01_asymptotic(static_cast<long double>(x));
}

} // namespace

Jy01 bessel_jy01(double x) {
    const Jy01L r = jy01_impl(x);
    return {static_cast<double>(r.j0), static_cast<double>(r.y0),
            static_cast<double>(r.j1), static_cast<double>(r.y1)};
}

double bessel_j0(double x) { return bessel_jy01(x).j0; }
double bessel_j1(double x) { return bessel_jy01(x).j1; }
double bessel_y0(double x) { return bessel_jy01(x).y0; }
double bessel_y1(double x) { return bessel_jy01(x).y1; }

double y0_reg(double x) {
    if (x < 0.0)
        x = -x; // even function
    if (x == 0.0)
        return static_cast<double>(2.0L * kGammaE / kPiL);
    const Jy01L r = jy01_impl(x);
    const long double lg = std::log(static_cast<long double>(x) / 2.0L);
    // Long-double subtraction keeps the ln*J0 cancellation below 1e-17.
    return static_cast<double>(r.y0 - (2.0L / kPiL) * lg * r.j0);
}

double y1_mreg(double x) {
    if (x < 0.0)
        x = -x; // even function
    if (x == 0.0)
        return static_cast<double>(-2.0L / kPiL);
    const Jy01L r = jy01_impl(x);
    const long double lg = std::log(static_cast<long double>(x) / 2.0L);
    return static_cast<double>(static_cast<long double>(x) *
                               (r.y1 - (2.0L / kPiL) * lg * r.j1));
}

Jy01Reg bessel_jy01_reg(double x) {
    if (x < 0.0)
        x = -x;
    if (x == 0.0)
        return {1.0, 0.0, static_cast<double>(2.0L * kGammaE / kPiL),
                static_cast<double>(-2.0L / kPiL)};
    const Jy01L r = jy01_impl(x);
    const long double lg = std::log(static_cast<long double>(x) / 2.0L);
    return {static_cast<double>(r.j0), static_cast<double>(r.j1),
            static_cast<double>(r.y0 - (2.0L / kPiL) * lg * r.j0),
            static_cast<double>(static_cast<long double>(x) *
                                (r.y1 - (2.0L / kPiL) * lg * r.j1))};
}

std::vector<double> bessel_j_seq(int n_max, double x) {
    if (n_max < 0)
        throw std::domain_error("bessel_j_seq: n_max must be >= 0");
    if (!(x > 0.0))
        throw std::domain_error("bessel_j_seq: argument must be positive");
    std::vector<double> out(static_cast<size_t>(n_max) + 1);
    // Downward (Miller) recurrence from a start order comfortably above both
    // n_max and x; normalize with J0 + 2 sum J_{2m} = 1.
    const int start = std::max(n_max, static_cast<int>(std::ceil(x))) + 40 +
                      15 * static_cast<int>(std::ceil(std::cbrt(x)));
    long double fp = 0.0L, fc = 1e-30L;
    long double norm = 0.0L;
    for (int n = start; n >= 1; --n) {
        long double fm = (2.0L * n / static_cast<long double>(x)) * fc - fp;
        fp = fc;
        fc = fm;
        if (((n - 1) % 2) == 0)
            norm += (n - 1 == 0) ? fc : 2.0L * fc;
        if (n - 1 <= n_max)
            out[static_cast<size_t>(n - 1)] = static_cast<double>(fc);
        if (std::fabs(fc) > 1e250L) {
            fp /= 1e250L;
            fc /= 1e250L;
            norm /= 1e250L;
            for (auto &v : out)
                v /= 1e250;
        }
    }
    for (auto &v : out)
        v = static_cast<double>(static_cast<long double>(v) / norm);
    return out;
}

Hankel1Seq hankel1_seq(int n_max, double x) {
    if (n_max < 0)
        throw std::domain_error("hankel1_seq: n_max must be >= 0");
    if (!(x > 0.0))
        throw std::domain_error("hankel1_seq: argument must be positive");
    Hankel1Seq out;
    out.values.resize(static_cast<size_t>(n_max) + 1);
    const std::vector<double> j = bessel_j_seq(n_max, x);
    const Jy01 base = bessel_jy01(x);
    // Y_n upward: dominant solution, stable in this direction.
    long double yp = base.y0, yc = base.y1;
    out.values[0] = {j[0], base.y0};
    if (n_max >= 1)
        out.values[1] = {j[1], base.y1};
    for (int n = 2; n <= n_max; ++n) {
        long double yn = (2.0L * (n - 1) / static_cast<long double>(x)) * yc - yp;
        yp = yc;
        yc = yn;
        double yd = static_cast<double>(yn);
        if (!std::isfinite(yd)) {
            yd = -std::numeric_limits<double>::infinity();
            if (out.first_saturated < 0)
                out.first_saturated = n;
        }
        out.values[static_cast<size_t>(n)] = {j[static_cast<size_t>(n)], yd};
    }
    return out;
}

std::complex<double> hankel1(int n, double x) {
    if (n < 0)
        throw std::domain_error("hankel1: order must be >= 0");
    if (n <= 1) {
        const Jy01 r = bessel_jy01(x);
        return n == 0 ? std::complex<double>{r.j0, r.y0}
                      : std::complex<double>{r.j1, r.y1};
    }
    return hankel1_seq(n, x).values.back();
}

} // namespace hfbem
