#include "hfbem/galerkin.hpp"

#include "hfbem/errors.hpp"
#include "hfbem/operators.hpp"
#include "hfbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

namespace hfbem {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_signed(double u, double L) {
    u = std::fmod(u, L);
    if (u > 0.5 * L) {
        u -= L;
    } else if (u <= -0.5 * L) {
        u += L;
    }
    return u;
}

// ln(4 sin^2(pi u / L)) - 2 ln|u|, the smooth even remainder once the
// straight log is pulled out of the periodic one.  Finite at u = 0.
double log_sin_ratio(double u, double L) {
    const double x = kPi * std::abs(u) / L;
    if (x < 1e-6) {
        return 2.0 * std::log(2.0 * kPi / L) +
               2.0 * std::log1p(-x * x / 6.0 * (1.0 - x * x / 20.0));
    }
    return 2.0 * std::log(2.0 * std::sin(x) / std::abs(u));
}

struct Node {
    double v = 0.0;   // quadrature variable (mapped coordinate)
    double s = 0.0;   // arc length phi(v)
    double jac = 1.0; // phi'(v)
    double gwh = 0.0; // gauss weight times panel half-width (dv measure)
    double rho = 0.0; // affine image of v in [-1, 1] over the interval
    cplx wv;          // plane-wave weight at s
    CurveSample sample;
};

struct Panel {
    int lo = 0;
    int hi = 0;
    double half = 0.0; // in v units
    double mid = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
};

struct IntervalQuad {
    std::vector<Node> nodes;
    std::vector<Panel> panels;
};

// Panel breakpoints in the quadrature variable, clustered so that every
// panel spans roughly `target` units of arc length.  Mapped intervals march
// by monotone bisection through phi; plain intervals subdivide uniformly.
// The first and last panels are then refined geometrically: the exact inner
// integrals carry x ln x kinks at interval endpoints (the log kernel is
// truncated there), which plain Gauss panels resolve only at rate q^-4.
std::vector<double> panel_breaks(const Interval &I, double target) {
    std::vector<double> brk{I.a};
    if (!I.mapped) {
        const int n = std::max(1, static_cast<int>(std::ceil(I.width() / target)));
        for (int i = 1; i < n; ++i) {
            brk.push_back(I.a + I.width() * i / n);
        }
        brk.push_back(I.b);
    } else {
        const ChangeOfVariables &cov = *I.cov;
        double vcur = I.a;
        for (int guard = 0; guard < 200000; ++guard) {
            const double scur = cov.forward(vcur);
            if (scur >= I.b - 1.25 * target) {
                break;
            }
            const double starget = scur + target;
            double lo = vcur;
            double hi = I.b;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (cov.forward(mid) < starget) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            vcur = 0.5 * (lo + hi);
            brk.push_back(vcur);
        }
        brk.push_back(I.b);
    }

    if (brk.size() == 2) {
        brk.insert(brk.begin() + 1, 0.5 * (brk[0] + brk[1]));
    }
    constexpr int kLevels = 5;
    constexpr double kRatio = 0.25;
    std::vector<double> graded;
    graded.push_back(brk[0]);
    const double w0 = brk[1] - brk[0];
    for (int g = kLevels - 1; g >= 1; --g) {
        graded.push_back(brk[0] + w0 * std::pow(kRatio, g));
    }
    graded.insert(graded.end(), brk.begin() + 1, brk.end() - 1);
    const size_t m = brk.size();
    const double w1 = brk[m - 1] - brk[m - 2];
    for (int g = 1; g <= kLevels - 1; ++g) {
        graded.push_back(brk[m - 1] - w1 * std::pow(kRatio, g));
    }
    graded.push_back(brk[m - 1]);
    return graded;
}

IntervalQuad build_quad(const Interval &I, const ScatteringConfig &config,
                        double target, const GaussRule &g) {
    IntervalQuad q;
    const auto brk = panel_breaks(I, target);
    const BoundaryCurve &curve = *config.curve;
    for (size_t pi = 0; pi + 1 < brk.size(); ++pi) {
        Panel P;
        P.lo = static_cast<int>(q.nodes.size());
        const double v0 = brk[pi];
        const double v1 = brk[pi + 1];
        P.half = 0.5 * (v1 - v0);
        P.mid = 0.5 * (v1 + v0);
        P.s0 = I.mapped ? I.cov->forward(v0) : v0;
        P.s1 = I.mapped ? I.cov->forward(v1) : v1;
        for (size_t i = 0; i < g.x.size(); ++i) {
            Node nd;
            nd.v = P.mid + P.half * g.x[i];
            nd.s = I.mapped ? I.cov->forward(nd.v) : nd.v;
            nd.jac = I.mapped ? I.cov->derivative(nd.v) : 1.0;
            nd.gwh = g.w[i] * P.half;
            nd.rho = (2.0 * nd.v - I.a - I.b) / (I.b - I.a);
            nd.sample = sample_curve(curve, nd.s);
            const double ph = config.k * config.alpha.dot(nd.sample.x);
            nd.wv = cplx(std::cos(ph), std::sin(ph));
            q.nodes.push_back(nd);
        }
        P.hi = static_cast<int>(q.nodes.size());
        q.panels.push_back(P);
    }
    return q;
}

GalerkinSystem assemble_panel(const GalerkinSpace &space,
                              const ScatteringConfig &config, int ppw) {
    const auto &iv = space.partition().intervals();
    const int n = static_cast<int>(iv.size());
    const double L = space.partition().L();
    const double k = config.k;

    int dmax = 0;
    for (const int d : space.degrees()) {
        dmax = std::max(dmax, d);
    }
    if (dmax > 19) {
        throw std::invalid_argument(
            "panel quadrature supports degrees up to 19");
    }
    const GaussRule &g = gauss_legendre(dmax <= 15 ? 16 : 20);
    const double target = 7.5 * (2.0 * kPi / k) / ppw;

    std::vector<IntervalQuad> quads;
    quads.reserve(static_cast<size_t>(n));
    int total_nodes = 0;
    for (int j = 0; j < n; ++j) {
        quads.push_back(build_quad(iv[static_cast<size_t>(j)], config, target, g));
        total_nodes += static_cast<int>(quads.back().nodes.size());
    }

    const int dim = space.dimension();
    GalerkinSystem sys;
    sys.M = Eigen::MatrixXcd::Zero(dim, dim);
    sys.F = Eigen::VectorXcd::Zero(dim);
    sys.quadrature_nodes = total_nodes;

    // load vector: the plane-wave bracket cancels the incident oscillation
    for (int j = 0; j < n; ++j) {
        const int dj = space.degrees()[static_cast<size_t>(j)];
        const int off = space.global_index(j, 0);
        for (const Node &nd : quads[static_cast<size_t>(j)].nodes) {
            const cplx cf = std::conj(nd.wv) * incident_rhs_at(config, nd.sample) *
                            (nd.gwh * nd.jac);
            double prho = 1.0;
            for (int r = 0; r <= dj; ++r) {
                sys.F[off + r] += cf * prho;
                prho *= nd.rho;
            }
        }
    }

    for (int jo = 0; jo < n; ++jo) {
        const int dout = space.degrees()[static_cast<size_t>(jo)];
        const int oo = space.global_index(jo, 0);
        const auto &outer = quads[static_cast<size_t>(jo)];
        for (int ji = 0; ji < n; ++ji) {
            const int din = space.degrees()[static_cast<size_t>(ji)];
            const int oi = space.global_index(ji, 0);
            const auto &inner = quads[static_cast<size_t>(ji)];
            const Interval &II = iv[static_cast<size_t>(ji)];
            Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(dout + 1, din + 1);
            Eigen::VectorXcd rowv(din + 1);

            for (const Node &no : outer.nodes) {
                rowv.setZero();
                for (const Panel &P : inner.panels) {
                    const double d0 = wrap_signed(no.s - P.s0, L);
                    const double d1 = wrap_signed(no.s - P.s1, L);
                    const double dist = (d0 >= 0.0 && d1 <= 0.0)
                                            ? 0.0
                                            : std::min(std::abs(d0), std::abs(d1));
                    if (dist > (P.s1 - P.s0)) {
                        for (int i = P.lo; i < P.hi; ++i) {
                            const Node &ni = inner.nodes[static_cast<size_t>(i)];
                            const cplx kw =
                                ni.wv *
                                cfie_kernel_direct(k, no.sample, ni.sample) *
                                (ni.gwh * ni.jac);
                            double prho = 1.0;
                            for (int p = 0; p <= din; ++p) {
                                rowv[p] += kw * prho;
                                prho *= ni.rho;
                            }
                        }
                        continue;
                    }
                    // near panel: peel off ln|v - mu| in the quadrature
                    // variable and integrate it with product-log weights
                    const double smid = 0.5 * (P.s0 + P.s1);
                    const double su = smid + wrap_signed(no.s - smid, L);
                    const double mu =
                        II.mapped ? II.cov->inverse_extended(su) : su;
                    const double lam = (mu - P.mid) / P.half;
                    const std::vector<double> vlog = log_product_weights(lam, g);
                    const double lnh = std::log(P.half);
                    for (int i = P.lo; i < P.hi; ++i) {
                        const Node &ni = inner.nodes[static_cast<size_t>(i)];
                        const KernelSplit ks =
                            cfie_kernel_split_at(k, L, no.sample, ni.sample);
                        const double u = wrap_signed(no.s - ni.s, L);
                        const double dv = mu - ni.v;
                        // near a node collision both distances sit at the
                        // noise floor of the map inversion; use the limit
                        const bool collided =
                            std::abs(dv) <= 1e-8 * P.half ||
                            std::abs(u) <= 1e-8 * (P.s1 - P.s0);
                        const double ratio =
                            collided ? ni.jac : std::abs(u / dv);
                        const cplx asm_part =
                            ks.A + ks.B * (log_sin_ratio(u, L) +
                                           2.0 * std::log(ratio));
                        const cplx kw =
                            ni.wv * ni.jac *
                            (ni.gwh * (asm_part + 2.0 * ks.B * lnh) +
                             (P.half * vlog[static_cast<size_t>(i - P.lo)]) *
                                 2.0 * ks.B);
                        double prho = 1.0;
                        for (int p = 0; p <= din; ++p) {
                            rowv[p] += kw * prho;
                            prho *= ni.rho;
                        }
                    }
                }
                const cplx cf = std::conj(no.wv) * (no.gwh * no.jac);
                cplx crho = cf;
                for (int r = 0; r <= dout; ++r) {
                    block.row(r) += crho * rowv.transpose();
                    crho *= no.rho;
                }
            }

            if (jo == ji) {
                // the 1/2 I term, integrated in the quadrature variable
                std::vector<double> rpow(static_cast<size_t>(2 * dout + 1));
                for (const Node &nd : outer.nodes) {
                    rpow[0] = 1.0;
                    for (int p = 1; p <= 2 * dout; ++p) {
                        rpow[static_cast<size_t>(p)] =
                            rpow[static_cast<size_t>(p - 1)] * nd.rho;
                    }
                    const double jw = 0.5 * nd.gwh * nd.jac;
                    for (int r = 0; r <= dout; ++r) {
                        for (int p = 0; p <= dout; ++p) {
                            block(r, p) += jw * rpow[static_cast<size_t>(r + p)];
                        }
                    }
                }
            }

            sys.M.block(oo, oi, dout + 1, din + 1) += block;
        }
    }
    return sys;
}

GalerkinSystem assemble_grid(const GalerkinSpace &space,
                             const ScatteringConfig &config, int ppw) {
    const auto &iv = space.partition().intervals();
    const double L = space.partition().L();
    const double k = config.k;
    const double ov = space.pou_overlap();

    // grid density: incident oscillation, basis oscillation through the
    // (possibly compressed) angle map, and the mollifier ramps
    double extra = 0.0;
    for (size_t j = 0; j < iv.size(); ++j) {
        const Interval &I = iv[j];
        const int d = space.degrees()[j];
        if (d == 0) {
            continue;
        }
        double vlo = I.a - ov;
        double vhi = I.b + ov;
        double minjac = 1.0;
        if (I.mapped) {
            vlo = I.cov->inverse_extended(I.a - ov);
            vhi = I.cov->inverse_extended(I.b + ov);
            minjac = std::numeric_limits<double>::infinity();
            for (int gi = 0; gi <= 64; ++gi) {
                const double v = I.a + (I.b - I.a) * gi / 64.0;
                minjac = std::min(minjac, I.cov->derivative(v));
            }
        }
        extra = std::max(extra, (0.5 * d) * 2.0 * kPi / ((vhi - vlo) * minjac));
    }
    const double numax = k + extra + 4.0 / ov;
    int N = static_cast<int>(std::ceil(ppw * L * numax / (2.0 * kPi)));
    N += N % 2;
    N = std::max(N, 64);

    const double h = L / N;
    const BoundaryCurve &curve = *config.curve;
    std::vector<CurveSample> samples(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        samples[static_cast<size_t>(i)] = sample_curve(curve, i * h);
    }

    const int dim = space.dimension();
    Eigen::MatrixXcd C(N, dim);
    std::vector<cplx> row(static_cast<size_t>(dim));
    Eigen::VectorXcd f(N);
    for (int i = 0; i < N; ++i) {
        space.basis_row(i * h, row.data());
        for (int c = 0; c < dim; ++c) {
            C(i, c) = row[static_cast<size_t>(c)];
        }
        f[i] = incident_rhs_at(config, samples[static_cast<size_t>(i)]);
    }

    const std::vector<double> R = kress_log_weights(N);
    Eigen::MatrixXcd NMC = Eigen::MatrixXcd::Zero(N, dim);
    for (int i = 0; i < N; ++i) {
        for (int jn = 0; jn < N; ++jn) {
            const KernelSplit ks =
                cfie_kernel_split_at(k, L, samples[static_cast<size_t>(i)],
                                     samples[static_cast<size_t>(jn)]);
            cplx val = h * ks.A +
                       (L / (2.0 * kPi)) *
                           R[static_cast<size_t>(std::abs(i - jn))] * ks.B;
            if (i == jn) {
                val += 0.5;
            }
            NMC.row(i) += val * C.row(jn);
        }
    }

    GalerkinSystem sys;
    sys.M = h * C.adjoint() * NMC;
    sys.F = h * C.adjoint() * f;
    sys.quadrature_nodes = N;
    return sys;
}

Eigen::VectorXcd residual_extended(const Eigen::MatrixXcd &M,
                                   const Eigen::VectorXcd &x,
                                   const Eigen::VectorXcd &F) {
    const int n = static_cast<int>(M.rows());
    Eigen::VectorXcd r(n);
    for (int i = 0; i < n; ++i) {
        std::complex<long double> acc(F[i].real(), F[i].imag());
        for (int j = 0; j < n; ++j) {
            const std::complex<long double> m(M(i, j).real(), M(i, j).imag());
            const std::complex<long double> xj(x[j].real(), x[j].imag());
            acc -= m * xj;
        }
        r[i] = cplx(static_cast<double>(acc.real()),
                    static_cast<double>(acc.imag()));
    }
    return r;
}

} // namespace

GalerkinSystem assemble(const GalerkinSpace &space,
                        const ScatteringConfig &config, int ppw) {
    if (ppw < 6) {
        throw std::invalid_argument(
            "ppw must be at least 6 points per wavelength");
    }
    if (std::abs(space.k() - config.k) > 1e-12 * config.k) {
        throw std::invalid_argument(
            "space partition was built for a different wavenumber");
    }
    if (std::abs(space.partition().L() - config.curve->length()) >
        1e-12 * config.curve->length()) {
        throw std::invalid_argument(
            "space partition was built for a different curve");
    }
    return space.overlapping() ? assemble_grid(space, config, ppw)
                               : assemble_panel(space, config, ppw);
}

DensitySolution solve(const GalerkinSpace &space,
                      const GalerkinSystem &system) {
    const int n = static_cast<int>(system.M.rows());
    if (system.M.cols() != n || system.F.size() != n ||
        n != space.dimension()) {
        throw std::invalid_argument(
            "system dimensions do not match the space");
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system.M);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
        throw numerical_error("Galerkin matrix is numerically singular");
    }

    Eigen::VectorXcd x = lu.solve(system.F);
    const double fnorm = system.F.norm();
    double rel = 0.0;
    if (fnorm > 0.0) {
        for (int step = 0; step < 4; ++step) {
            const Eigen::VectorXcd r = residual_extended(system.M, x, system.F);
            rel = r.norm() / fnorm;
            if (rel <= 1e-12 || step == 3) {
                break;
            }
            x += lu.solve(r);
        }
        if (!(rel <= 1e-10)) {
            std::ostringstream os;
            os << "linear solve stalled at relative residual " << rel;
            throw numerical_error(os.str());
        }
    }

    DensitySolution sol;
    sol.coefficients = std::move(x);
    sol.residual = rel;
    sol.condition_estimate = 1.0 / rc;
    if (sol.condition_estimate > 1e12) {
        std::ostringstream os;
        os << "ill-conditioned Galerkin matrix (condition estimate "
           << sol.condition_estimate << ")";
        sol.warnings.push_back(os.str());
    }
    sol.space = std::make_shared<GalerkinSpace>(space);
    return sol;
}

cplx DensitySolution::eval(double s) const {
    if (!space) {
        throw std::invalid_argument("solution has no attached space");
    }
    return space->expand(coefficients, s);
}

double relative_l2_error(const std::function<cplx(double)> &approx,
                         const std::function<cplx(double)> &reference,
                         const ScatteringConfig &config, ErrorRegion region,
                         int ppw) {
    if (ppw < 4) {
        throw std::invalid_argument("error metric needs at least 4 points per wavelength");
    }
    const double L = config.curve->length();
    double lo = 0.0;
    double hi = L;
    const bool periodic = region == ErrorRegion::whole;
    if (region == ErrorRegion::shadow) {
        lo = config.t2;
        hi = config.t1 + L;
    }
    int N = static_cast<int>(std::ceil((hi - lo) * config.k * ppw / (2.0 * kPi)));
    N = std::max(N, 400);
    const double h = (hi - lo) / N;
    double num = 0.0;
    double den = 0.0;
    const int last = periodic ? N - 1 : N;
    for (int i = 0; i <= last; ++i) {
        const double s = lo + i * h;
        const cplx a = approx(s);
        const cplx r = reference(s);
        const double wgt = (!periodic && (i == 0 || i == N)) ? 0.5 : 1.0;
        num += wgt * std::norm(a - r);
        den += wgt * std::norm(r);
    }
    num *= h;
    den *= h;
    if (!(den > 0.0) || !std::isfinite(den)) {
        throw std::invalid_argument(
            "reference density vanishes on the requested region");
    }
    return std::sqrt(num / den);
}

} // namespace hfbem
