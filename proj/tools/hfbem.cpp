// Command line driver: solve one scattering problem and dump the density,
// sweep wavenumbers and degrees into a study table, tune transition-map
// parameters, or describe a geometry and its region partition.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include "CLI11.hpp"

#include "hfbem/config.hpp"
#include "hfbem/errors.hpp"
#include "hfbem/galerkin.hpp"
#include "hfbem/geometry.hpp"
#include "hfbem/hfspaces.hpp"
#include "hfbem/tuning.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace hfbem;

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Flags {
    std::string config;
    std::string out;
    std::string family;
    std::string params;
    std::string klist;
    std::string dlist;
    int ppw = 0;
};

void add_common_flags(CLI::App *cmd, Flags &flags) {
    cmd->add_option("--config", flags.config, "experiment configuration file")
        ->required();
    cmd->add_option("--out", flags.out, "output file (default: stdout)");
    cmd->add_option("--ppw", flags.ppw, "quadrature points per wavelength");
    cmd->add_option("--family", flags.family,
                    "approximation family: alg-cov, trig-cov, alg-freq, "
                    "trig-freq");
    cmd->add_option("--k", flags.klist, "wavenumber list (comma separated)");
    cmd->add_option("--degrees", flags.dlist,
                    "polynomial degree list (comma separated)");
    cmd->add_option("--params", flags.params,
                    "partition parameter file (output path for tune)");
}

void validate_family(const std::string &f) {
    if (f != "alg-cov" && f != "trig-cov" && f != "alg-freq" &&
        f != "trig-freq") {
        throw std::invalid_argument(
            "family must be one of alg-cov, trig-cov, alg-freq, trig-freq; "
            "got '" +
            f + "'");
    }
}

ExperimentConfig load_config(const Flags &flags) {
    ExperimentConfig ec = parse_experiment_file(flags.config);
    if (!flags.klist.empty()) {
        ec.ks = parse_double_list(flags.klist);
        for (const double k : ec.ks) {
            if (!(k > 0.0)) {
                throw std::invalid_argument("wavenumbers must be positive");
            }
        }
    }
    if (!flags.dlist.empty()) {
        ec.degrees = parse_int_list(flags.dlist);
        for (const int d : ec.degrees) {
            if (d < 0) {
                throw std::invalid_argument("degrees must be >= 0");
            }
        }
    }
    if (flags.ppw != 0) {
        if (flags.ppw < 6) {
            throw std::invalid_argument("ppw must be at least 6");
        }
        ec.ppw = flags.ppw;
    }
    if (!flags.family.empty()) {
        ec.family = flags.family;
    }
    validate_family(ec.family);
    if (!flags.params.empty()) {
        ec.params_path = flags.params;
    }
    if (!flags.out.empty()) {
        ec.out_path = flags.out;
    }
    return ec;
}

BasisFamily family_of(const ExperimentConfig &ec) {
    return ec.family.rfind("trig", 0) == 0 ? BasisFamily::trigonometric
                                           : BasisFamily::algebraic;
}

PartitionMode mode_of(const ExperimentConfig &ec) {
    return ec.family.size() >= 4 &&
                   ec.family.compare(ec.family.size() - 4, 4, "freq") == 0
               ? PartitionMode::freq_adapted
               : PartitionMode::cov;
}

ScatteringConfig scattering_from(const ExperimentConfig &ec, double k) {
    return make_scattering_config(make_curve(ec.geometry, ec.shape), k,
                                  ec.alpha.normalized());
}

std::optional<PartitionSpec> load_params(const ExperimentConfig &ec) {
    if (ec.params_path.empty()) {
        return std::nullopt;
    }
    return parse_partition_file(ec.params_path);
}

RegionPartition partition_for(const ExperimentConfig &ec,
                              const ScatteringConfig &sc,
                              const std::optional<PartitionSpec> &spec) {
    const PartitionMode mode = mode_of(ec);
    if (spec && spec->mode != mode) {
        throw std::invalid_argument(
            "partition parameter file mode does not match family '" +
            ec.family + "'");
    }
    if (mode == PartitionMode::cov) {
        const int J = spec ? spec->J : ec.J;
        const CovParams p =
            spec ? spec->params : initial_cov_template(sc, J);
        return build_cov_partition(sc, p, J);
    }
    const int m = spec ? spec->m : ec.m;
    const CovParams p = spec ? spec->params : initial_cov_template(sc, 6);
    const std::vector<double> eps = spec ? spec->eps : std::vector<double>{};
    return build_freq_adapted_partition(sc, p, m, eps);
}

std::vector<int> degrees_for(const ExperimentConfig &ec,
                             const std::optional<PartitionSpec> &spec,
                             size_t intervals) {
    std::vector<int> d = ec.degrees;
    if (d.empty() && spec && !spec->degrees.empty()) {
        d = spec->degrees;
    }
    if (d.empty()) {
        d = {4};
    }
    if (d.size() == 1) {
        return std::vector<int>(intervals, d[0]);
    }
    if (d.size() != intervals) {
        throw std::invalid_argument(
            "degrees list has " + std::to_string(d.size()) +
            " entries but the partition has " + std::to_string(intervals) +
            " intervals");
    }
    return d;
}

class Output {
  public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw std::invalid_argument("cannot open output file: " +
                                            path);
            }
        }
    }

    std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

    void finish() {
        stream().flush();
        if (file_.is_open() && !file_) {
            throw std::invalid_argument("failed writing output file");
        }
    }

  private:
    std::ofstream file_;
};

int cmd_solve(const Flags &flags) {
    const ExperimentConfig ec = load_config(flags);
    if (ec.ks.size() != 1) {
        throw std::invalid_argument(
            "solve expects exactly one wavenumber; use sweep for lists");
    }
    const double k = ec.ks.front();
    const ScatteringConfig sc = scattering_from(ec, k);
    const auto spec = load_params(ec);
    const RegionPartition part = partition_for(ec, sc, spec);
    const std::vector<int> degrees =
        degrees_for(ec, spec, part.intervals().size());
    const GalerkinSpace space(part, family_of(ec), degrees, sc.curve,
                              sc.alpha);
    const GalerkinSystem sys = assemble(space, sc, ec.ppw);
    const DensitySolution sol = solve(space, sys);
    for (const auto &w : sol.warnings) {
        std::cerr << "warning: " << w << "\n";
    }

    const auto reference = reference_density(sc);
    const auto approx = [&sol](double s) { return sol.eval(s); };
    const double global =
        relative_l2_error(approx, reference, sc, ErrorRegion::whole);
    const double shadow =
        relative_l2_error(approx, reference, sc, ErrorRegion::shadow);

    Output out(ec.out_path);
    std::ostream &os = out.stream();
    const double L = sc.curve->length();
    const int N = std::max(
        400, static_cast<int>(std::ceil(L * k * 20.0 / (2.0 * kPi))));
    os << "s,re_eta,im_eta,re_ref,im_ref\n";
    for (int i = 0; i < N; ++i) {
        const double s = i * L / N;
        const cplx e = sol.eval(s);
        const cplx r = reference(s);
        os << fmt17(s) << "," << fmt17(e.real()) << "," << fmt17(e.imag())
           << "," << fmt17(r.real()) << "," << fmt17(r.imag()) << "\n";
    }
    os << "# dof = " << space.dimension() << "\n";
    os << "# global_relerr = " << fmt17(global) << "\n";
    os << "# shadow_relerr = " << fmt17(shadow) << "\n";
    out.finish();
    return 0;
}

int cmd_sweep(const Flags &flags) {
    const ExperimentConfig ec = load_config(flags);
    std::vector<int> dlist = ec.degrees;
    if (dlist.empty()) {
        dlist = {4};
    }

    Output out(ec.out_path);
    std::ostream &os = out.stream();
    os << "k,d,dof,global_relerr,shadow_relerr,wall_seconds\n";
    for (const double k : ec.ks) {
        const ScatteringConfig sc = scattering_from(ec, k);
        const auto spec = load_params(ec);
        const RegionPartition part = partition_for(ec, sc, spec);
        const auto reference = reference_density(sc);
        for (const int d : dlist) {
            const std::vector<int> degrees(part.intervals().size(), d);
            const GalerkinSpace space(part, family_of(ec), degrees, sc.curve,
                                      sc.alpha);
            const auto start = std::chrono::steady_clock::now();
            const GalerkinSystem sys = assemble(space, sc, ec.ppw);
            const DensitySolution sol = solve(space, sys);
            const auto stop = std::chrono::steady_clock::now();
            const double wall =
                std::chrono::duration<double>(stop - start).count();
            const auto approx = [&sol](double s) { return sol.eval(s); };
            const double global =
                relative_l2_error(approx, reference, sc, ErrorRegion::whole);
            const double shadow =
                relative_l2_error(approx, reference, sc, ErrorRegion::shadow);
            os << fmt17(k) << "," << d << "," << space.dimension() << ","
               << fmt17(global) << "," << fmt17(shadow) << ","
               << fmt17(wall) << "\n";
        }
    }
    out.finish();
    return 0;
}

int cmd_tune(const Flags &flags) {
    const ExperimentConfig ec = load_config(flags);
    if (ec.ks.size() != 1) {
        throw std::invalid_argument("tune expects exactly one wavenumber");
    }
    if (mode_of(ec) != PartitionMode::cov) {
        throw std::invalid_argument(
            "tune applies to cov families; freq-adapted partitions reuse "
            "tuned cov parameters");
    }
    const ScatteringConfig sc = scattering_from(ec, ec.ks.front());

    TuningOptions opts;
    opts.J = ec.J;
    opts.family = family_of(ec);
    opts.rounds = ec.tune_rounds;
    opts.steps_per_sweep = ec.tune_steps;
    opts.d = ec.tune_d;
    opts.ppw = ec.ppw;
    const TuningResult result = tune_parameters(sc, opts);

    Output out(ec.out_path);
    std::ostream &os = out.stream();
    os << "round,param,value,local_err,global_err\n";
    for (const TuningRecord &rec : result.history) {
        os << rec.round << "," << rec.param << "," << fmt17(rec.value) << ","
           << fmt17(rec.local_err) << "," << fmt17(rec.global_err) << "\n";
    }
    os << "# evaluations = " << result.evaluations << "\n";
    os << "# final_global_relerr = " << fmt17(result.global_err) << "\n";
    out.finish();

    if (!ec.params_path.empty()) {
        PartitionSpec spec;
        spec.mode = PartitionMode::cov;
        spec.J = ec.J;
        spec.params = result.params;
        write_partition_file(ec.params_path, spec);
    }
    return 0;
}

int cmd_geometry_info(const Flags &flags) {
    const ExperimentConfig ec = load_config(flags);
    const double k = ec.ks.front();
    const ScatteringConfig sc = scattering_from(ec, k);
    const auto spec = load_params(ec);
    const RegionPartition part = partition_for(ec, sc, spec);

    Output out(ec.out_path);
    std::ostream &os = out.stream();
    os << "geometry = " << sc.curve->label() << "\n";
    os << "L = " << fmt17(sc.curve->length()) << "\n";
    os << "t1 = " << fmt17(sc.t1) << "\n";
    os << "t2 = " << fmt17(sc.t2) << "\n";
    os << "k = " << fmt17(k) << "\n";
    os << "intervals = " << part.intervals().size() << "\n";
    for (const Interval &I : part.intervals()) {
        os << "interval = " << region_tag_name(I.tag) << " " << I.sub << " "
           << fmt17(I.a) << " " << fmt17(I.b) << " "
           << (I.mapped ? "mapped" : "plain") << "\n";
    }
    out.finish();
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"high-frequency Galerkin solver for sound-soft scattering"};
    app.require_subcommand(1);

    Flags flags;
    CLI::App *solve_cmd = app.add_subcommand(
        "solve", "solve one problem and write the density table");
    CLI::App *sweep_cmd = app.add_subcommand(
        "sweep", "run a wavenumber/degree study and write error rows");
    CLI::App *tune_cmd = app.add_subcommand(
        "tune", "tune transition-map parameters; --params stores the result");
    CLI::App *info_cmd = app.add_subcommand(
        "geometry-info", "describe the geometry and its region partition");
    for (CLI::App *cmd : {solve_cmd, sweep_cmd, tune_cmd, info_cmd}) {
        add_common_flags(cmd, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) {
            return cmd_solve(flags);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(flags);
        }
        if (tune_cmd->parsed()) {
            return cmd_tune(flags);
        }
        return cmd_geometry_info(flags);
    } catch (const numerical_error &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
