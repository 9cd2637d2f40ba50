#include "hfbem/tuning.hpp"

#include "hfbem/errors.hpp"
#include "hfbem/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace hfbem {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Relative L2 error restricted to the arc [lo, hi] (may wrap past L).
double arc_error(const std::function<cplx(double)> &approx,
                 const std::function<cplx(double)> &reference, double k,
                 double lo, double hi) {
    const int N = std::max(
        200, static_cast<int>(std::ceil((hi - lo) * k * 20.0 / (2.0 * kPi))));
    const double h = (hi - lo) / N;
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double wgt = (i == 0 || i == N) ? 0.5 : 1.0;
        const double s = lo + i * h;
        const cplx a = approx(s);
        const cplx r = reference(s);
        num += wgt * std::norm(a - r);
        den += wgt * std::norm(r);
    }
    if (!(den > 0.0)) {
        return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return std::sqrt(num / den);
}

// Illuminated pole: minimizer of alpha . nu on the lit arc (t1, t2).
// d(alpha . nu)/ds = kappa * (alpha . gamma_s), so the pole is the sign
// change of the tangential component, which bisection pins exactly.
double illuminated_pole(const ScatteringConfig &config) {
    const auto dot = [&](double s) {
        return config.alpha.dot(config.curve->normal(s));
    };
    const auto tang = [&](double s) {
        return config.alpha.dot(config.curve->gamma_s(s));
    };
    const int samples = 2048;
    double best_s = 0.5 * (config.t1 + config.t2);
    double best = dot(best_s);
    for (int i = 1; i < samples; ++i) {
        const double s = config.t1 + (config.t2 - config.t1) * i / samples;
        const double v = dot(s);
        if (v < best) {
            best = v;
            best_s = s;
        }
    }
    const double step = (config.t2 - config.t1) / samples;
    double lo = std::max(config.t1, best_s - step);
    double hi = std::min(config.t2, best_s + step);
    if (tang(lo) < 0.0 && tang(hi) > 0.0) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (tang(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    return 0.5 * (lo + hi);
}

enum class Param { xi1, xi2, zeta1, zeta2, xi1p, xi2p, zeta1p, zeta2p };

const char *param_name(Param p) {
    switch (p) {
    case Param::xi1:
        return "xi1";
    case Param::xi2:
        return "xi2";
    case Param::zeta1:
        return "zeta1";
    case Param::zeta2:
        return "zeta2";
    case Param::xi1p:
        return "xi1p";
    case Param::xi2p:
        return "xi2p";
    case Param::zeta1p:
        return "zeta1p";
    default:
        return "zeta2p";
    }
}

double field_value(const CovParams &p, Param which) {
    switch (which) {
    case Param::xi1:
        return p.xi1;
    case Param::xi2:
        return p.xi2;
    case Param::zeta1:
        return p.zeta1;
    case Param::zeta2:
        return p.zeta2;
    case Param::xi1p:
        return p.xi1p;
    case Param::xi2p:
        return p.xi2p;
    case Param::zeta1p:
        return p.zeta1p;
    default:
        return p.zeta2p;
    }
}

double &field(CovParams &p, Param which) {
    switch (which) {
    case Param::xi1:
        return p.xi1;
    case Param::xi2:
        return p.xi2;
    case Param::zeta1:
        return p.zeta1;
    case Param::zeta2:
        return p.zeta2;
    case Param::xi1p:
        return p.xi1p;
    case Param::xi2p:
        return p.xi2p;
    case Param::zeta1p:
        return p.zeta1p;
    default:
        return p.zeta2p;
    }
}

// Arc whose error the parameter controls: the two intervals sharing the
// layer edge that the parameter moves.  The endpoints depend only on the
// other parameters, so every candidate in a sweep is measured on the same
// arc.
std::array<double, 2> local_arc(const ScatteringConfig &config,
                                const CovParams &p, Param which) {
    const double L = config.curve->length();
    const double r = std::pow(config.k, -1.0 / 3.0);
    switch (which) {
    case Param::xi1: // SB1 + IT1
        return {config.t1 - p.zeta1 * r, config.t1 + p.xi1p};
    case Param::xi2: // IT2 + SB2
        return {config.t2 - p.xi2p, config.t2 + p.zeta2 * r};
    case Param::zeta1: // ST1 + SB1
        return {config.t1 - p.zeta1p, config.t1 + p.xi1 * r};
    case Param::zeta2: // SB2 + ST2
        return {config.t2 - p.xi2 * r, config.t2 + p.zeta2p};
    case Param::xi1p: // IT1 + IL
        return {config.t1 + p.xi1 * r, config.t2 - p.xi2p};
    case Param::xi2p: // IL + IT2
        return {config.t1 + p.xi1p, config.t2 - p.xi2 * r};
    case Param::zeta1p: // DS + ST1
        return {config.t2 + p.zeta2p, L + config.t1 - p.zeta1 * r};
    default: // zeta2p: ST2 + DS
        return {config.t2 + p.zeta2 * r, L + config.t1 - p.zeta1p};
    }
}

struct Evaluation {
    bool feasible = false;
    double global = 0.0;
    double local = 0.0;
};

class Objective {
  public:
    Objective(const ScatteringConfig &config, const TuningOptions &opts)
        : config_(config), opts_(opts),
          reference_(reference_density(config)) {}

    Evaluation operator()(const CovParams &p,
                          const std::array<double, 2> &arc) {
        for (const double v : {p.xi1, p.xi2, p.zeta1, p.zeta2, p.xi1p, p.xi2p,
                               p.zeta1p, p.zeta2p}) {
            if (!(v > 0.0)) {
                return {};
            }
        }
        try {
            const RegionPartition part =
                build_cov_partition(config_, p, opts_.J);
            const std::vector<int> degrees(part.intervals().size(), opts_.d);
            const GalerkinSpace space(part, opts_.family, degrees,
                                      config_.curve, config_.alpha);
            const GalerkinSystem sys = assemble(space, config_, opts_.ppw);
            const DensitySolution sol = solve(space, sys);
            ++evaluations_;
            const auto approx = [&sol](double s) { return sol.eval(s); };
            Evaluation e;
            e.feasible = true;
            e.global = relative_l2_error(approx, reference_, config_,
                                         ErrorRegion::whole);
            e.local = arc_error(approx, reference_, config_.k, arc[0], arc[1]);
            return e;
        } catch (const std::invalid_argument &) {
            return {};
        } catch (const numerical_error &) {
            return {};
        }
    }

    int evaluations() const { return evaluations_; }

  private:
    const ScatteringConfig &config_;
    const TuningOptions &opts_;
    std::function<cplx(double)> reference_;
    int evaluations_ = 0;
};

} // namespace

CovParams initial_cov_template(const ScatteringConfig &config, int J) {
    if (J != 6 && J != 8) {
        throw std::invalid_argument("partition template needs J = 6 or J = 8");
    }
    const double L = config.curve->length();
    const double pole = illuminated_pole(config);
    const double shrink = (J == 8) ? 0.8 : 1.0;
    CovParams p;
    p.xi1p = shrink * (pole - config.t1);
    p.xi2p = shrink * (config.t2 - pole);
    p.zeta1p = shrink * config.t1;
    p.zeta2p = shrink * (L - config.t2);
    p.xi1 = 0.5 * p.xi1p;
    p.xi2 = 0.5 * p.xi2p;
    p.zeta1 = 0.5 * p.zeta1p;
    p.zeta2 = 0.5 * p.zeta2p;
    return p;
}

std::function<cplx(double)> reference_density(const ScatteringConfig &config) {
    if (config.curve->kind() == CurveKind::circle) {
        const double radius = config.curve->gamma(0.0).norm();
        const double k = config.k;
        const Vec2 alpha = config.alpha;
        const auto curve = config.curve;
        return [k, radius, alpha, curve](double s) {
            const Vec2 x = curve->gamma(s);
            return circle_series_density(k, radius, alpha,
                                         std::atan2(x.y(), x.x()));
        };
    }
    const double L = config.curve->length();
    int N = std::max(
        600, static_cast<int>(std::ceil(12.0 * config.k * L / (2.0 * kPi))));
    N += N % 2;
    const auto grid = std::make_shared<DensityGrid>(nystrom_solve(config, N));
    return [grid](double s) { return grid->interpolate(s); };
}

TuningResult tune_parameters(const ScatteringConfig &config,
                             const TuningOptions &options) {
    if (options.rounds < 1 || options.steps_per_sweep < 1 ||
        options.d < 0 || !(options.initial_step_frac > 0.0) ||
        !(options.rel_tol >= 0.0)) {
        throw std::invalid_argument("invalid tuning options");
    }
    std::vector<Param> sweep{Param::xi1, Param::xi2, Param::zeta1,
                             Param::zeta2};
    if (options.J == 8) {
        sweep.insert(sweep.end(), {Param::xi1p, Param::xi2p, Param::zeta1p,
                                   Param::zeta2p});
    }

    Objective objective(config, options);
    CovParams params = initial_cov_template(config, options.J);

    TuningResult result;
    const std::array<double, 2> whole{0.0, config.curve->length()};
    Evaluation cur = objective(params, whole);
    if (!cur.feasible) {
        throw numerical_error(
            "tuning template is infeasible for this incidence");
    }
    result.history.push_back(
        {0, "init", 0.0, cur.global, cur.global});

    const CovParams init = params;
    double step_scale = options.initial_step_frac;
    for (int round = 1; round <= options.rounds; ++round) {
        const double round_start = cur.global;
        for (const Param which : sweep) {
            const std::array<double, 2> arc =
                local_arc(config, params, which);
            const Evaluation here = objective(params, arc);
            if (!here.feasible) {
                throw numerical_error("tuning state became infeasible");
            }
            const CovParams frozen = params;
            const double delta = step_scale * field_value(init, which);
            double best_value = field(params, which);
            Evaluation best = here;
            bool moved = false;
            const int up = (options.steps_per_sweep + 1) / 2;
            const int down = options.steps_per_sweep / 2;
            for (int m = -down; m <= up; ++m) {
                if (m == 0) {
                    continue;
                }
                CovParams cand = frozen;
                field(cand, which) += m * delta;
                const Evaluation e = objective(cand, arc);
                if (!e.feasible || e.global > here.global ||
                    e.local >= best.local) {
                    continue;
                }
                best = e;
                best_value = field(cand, which);
                moved = true;
            }
            if (moved) {
                field(params, which) = best_value;
                cur = best;
            } else {
                cur = here;
            }
            result.history.push_back({round, param_name(which),
                                      field(params, which), cur.local,
                                      cur.global});
        }
        step_scale *= 0.5;
        if (round_start - cur.global < options.rel_tol * round_start) {
            break;
        }
    }

    result.params = params;
    result.global_err = cur.global;
    result.evaluations = objective.evaluations();
    return result;
}

} // namespace hfbem
