#include "doctest.h"

#include "hfbem/config.hpp"
#include "hfbem/hfspaces.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace hfbem;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("hfbem_cli_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_text(const std::string &stem, const std::string &text) {
    const fs::path p = scratch_dir() / stem;
    std::ofstream out(p, std::ios::binary);
    out << text;
    REQUIRE(static_cast<bool>(out));
    return p.string();
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

// Runs the CLI with the given arguments; stdout and stderr land in `output`.
RunResult run_cli(const std::string &args) {
    static int counter = 0;
    const fs::path log = scratch_dir() / ("run_" + std::to_string(counter++));
    const std::string cmd = std::string("\"") + HFBEM_CLI_PATH + "\" " + args +
                            " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = read_text(log.string());
    return r;
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

const std::string kCircleCfg = "geometry = circle\n"
                               "radius = 1.0\n"
                               "alpha = 1 0\n"
                               "k = 20\n"
                               "family = alg-cov\n"
                               "J = 6\n"
                               "degrees = 3\n"
                               "ppw = 8\n";

} // namespace

TEST_CASE("partition file round-trips bit-exactly") {
    PartitionSpec spec;
    spec.mode = PartitionMode::cov;
    spec.J = 8;
    spec.params.xi1 = 0.73123456789012341;
    spec.params.xi2 = 1.0 / 3.0;
    spec.params.zeta1 = 0.12345678901234567;
    spec.params.zeta2 = 2.7182818284590452;
    spec.params.xi1p = 1.4623456789012345;
    spec.params.xi2p = 2.0 / 3.0;
    spec.params.zeta1p = 0.24691357802469134;
    spec.params.zeta2p = 1.1234567890123457;
    spec.degrees = {2, 3, 4, 5, 6, 7, 8, 9};

    const fs::path p = scratch_dir() / "roundtrip.params";
    write_partition_file(p.string(), spec);
    const PartitionSpec back = parse_partition_file(p.string());

    CHECK(back.mode == PartitionMode::cov);
    CHECK(back.J == 8);
    CHECK(back.params.xi1 == spec.params.xi1);
    CHECK(back.params.xi2 == spec.params.xi2);
    CHECK(back.params.zeta1 == spec.params.zeta1);
    CHECK(back.params.zeta2 == spec.params.zeta2);
    CHECK(back.params.xi1p == spec.params.xi1p);
    CHECK(back.params.xi2p == spec.params.xi2p);
    CHECK(back.params.zeta1p == spec.params.zeta1p);
    CHECK(back.params.zeta2p == spec.params.zeta2p);
    CHECK(back.degrees == spec.degrees);

    PartitionSpec freq;
    freq.mode = PartitionMode::freq_adapted;
    freq.m = 3;
    freq.params.xi1 = 0.31;
    freq.params.xi2 = 0.29;
    freq.params.zeta1 = 0.83;
    freq.params.zeta2 = 0.79;
    freq.eps = {5.0 / 11.0, 3.0 / 11.0, 1.0 / 11.0};
    const fs::path q = scratch_dir() / "roundtrip_freq.params";
    write_partition_file(q.string(), freq);
    const PartitionSpec fback = parse_partition_file(q.string());
    CHECK(fback.mode == PartitionMode::freq_adapted);
    CHECK(fback.m == 3);
    CHECK(fback.eps == freq.eps);
    CHECK(fback.degrees.empty());
}

TEST_CASE("partition parsing reports file name and line number") {
    auto message_of = [](const std::string &text) {
        try {
            parse_partition_text(text, "p.cfg");
        } catch (const std::invalid_argument &e) {
            return std::string(e.what());
        }
        return std::string();
    };

    const std::string dup = message_of("mode = cov\nJ = 6\nJ = 8\n");
    CHECK(dup.find("p.cfg:3") != std::string::npos);
    CHECK(dup.find("duplicate key 'J'") != std::string::npos);

    const std::string unknown = message_of(
        "mode = cov\nJ = 6\nxi1 = 1\nxi2 = 1\nzeta1 = 1\nzeta2 = 1\n"
        "xi1p = 2\nxi2p = 2\nzeta1p = 2\nzeta2p = 2\nbogus = 1\n");
    CHECK(unknown.find("p.cfg:11") != std::string::npos);
    CHECK(unknown.find("unknown key 'bogus'") != std::string::npos);

    const std::string badnum = message_of(
        "mode = cov\nJ = six\nxi1 = 1\nxi2 = 1\nzeta1 = 1\nzeta2 = 1\n"
        "xi1p = 2\nxi2p = 2\nzeta1p = 2\nzeta2p = 2\n");
    CHECK(badnum.find("p.cfg:2") != std::string::npos);
    CHECK(badnum.find("'six'") != std::string::npos);

    const std::string noeq = message_of("mode cov\n");
    CHECK(noeq.find("p.cfg:1") != std::string::npos);
    CHECK(noeq.find("key = value") != std::string::npos);

    CHECK(message_of("mode = orbit\n").find("'cov' or 'freq'") !=
          std::string::npos);
    CHECK_THROWS_AS(parse_partition_text("mode = freq\nm = 0\n", "p.cfg"),
                    std::invalid_argument);
}

TEST_CASE("experiment parsing validates keys and values") {
    const ExperimentConfig ec = parse_experiment_text(
        "geometry = kite\n"
        "alpha = 4 1\n"
        "k = 25 50 100   # sweep points\n"
        "family = trig-freq\n"
        "m = 2\n"
        "degrees = 3 4\n"
        "ppw = 12\n"
        "params = tuned.params\n"
        "out = run.csv\n",
        "e.cfg");
    CHECK(ec.geometry == CurveKind::kite);
    CHECK(ec.alpha.x() == 4.0);
    CHECK(ec.ks == std::vector<double>{25.0, 50.0, 100.0});
    CHECK(ec.family == "trig-freq");
    CHECK(ec.m == 2);
    CHECK(ec.degrees == std::vector<int>{3, 4});
    CHECK(ec.ppw == 12);
    CHECK(ec.params_path == "tuned.params");
    CHECK(ec.out_path == "run.csv");

    auto message_of = [](const std::string &text) {
        try {
            parse_experiment_text(text, "e.cfg");
        } catch (const std::invalid_argument &e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of("k = 5\n").find("'geometry'") != std::string::npos);
    CHECK(message_of("geometry = torus\nk = 5\n").find("torus") !=
          std::string::npos);
    CHECK(message_of("geometry = circle\nk = -5\n").find("positive") !=
          std::string::npos);
    CHECK(message_of("geometry = circle\nk = 5\nalpha = 1\n")
              .find("two numbers") != std::string::npos);
    CHECK(message_of("geometry = circle\nk = 5\nalpha = 0 0\n")
              .find("nonzero") != std::string::npos);
    CHECK(message_of("geometry = circle\nk = 5\nfamily = alg\n")
              .find("alg-cov") != std::string::npos);
    CHECK(message_of("geometry = circle\nk = 5\nppw = 4\n").find("ppw") !=
          std::string::npos);
    CHECK(message_of("geometry = circle\nk = 5\nJ = 7\n").find("6 or 8") !=
          std::string::npos);
}

TEST_CASE("list flags parse commas and spaces") {
    CHECK(parse_double_list("50,100,200") ==
          std::vector<double>{50.0, 100.0, 200.0});
    CHECK(parse_double_list(" 50 100 , 200 ") ==
          std::vector<double>{50.0, 100.0, 200.0});
    CHECK(parse_int_list("2,4,8") == std::vector<int>{2, 4, 8});
    CHECK_THROWS_AS(parse_double_list(" , "), std::invalid_argument);
    CHECK_THROWS_AS(parse_int_list("2,x"), std::invalid_argument);
}

TEST_CASE("cli: geometry-info describes the partition") {
    const std::string cfg = write_text("info.cfg", kCircleCfg);
    const RunResult r = run_cli("geometry-info --config " + cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("geometry = circle") != std::string::npos);
    CHECK(r.output.find("intervals = 6") != std::string::npos);

    double length = 0.0;
    for (const auto &line : lines_of(r.output)) {
        std::sscanf(line.c_str(), "L = %lf", &length);
    }
    CHECK(length == doctest::Approx(2.0 * 3.14159265358979323846)
                        .epsilon(1e-13));

    size_t mapped = 0;
    for (const auto &line : lines_of(r.output)) {
        if (line.rfind("interval = ", 0) == 0 &&
            line.find(" mapped") != std::string::npos) {
            ++mapped;
        }
    }
    CHECK(mapped == 4); // two illuminated and two shadow transitions
}

TEST_CASE("cli: solve writes a deterministic density table") {
    const std::string cfg = write_text("solve.cfg", kCircleCfg);
    const fs::path out1 = scratch_dir() / "solve1.csv";
    const fs::path out2 = scratch_dir() / "solve2.csv";

    const RunResult r1 =
        run_cli("solve --config " + cfg + " --out " + out1.string());
    REQUIRE(r1.exit_code == 0);
    const RunResult r2 =
        run_cli("solve --config " + cfg + " --out " + out2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(read_text(out1.string()) == read_text(out2.string()));

    const auto lines = lines_of(read_text(out1.string()));
    REQUIRE(lines.size() > 400);
    CHECK(lines[0] == "s,re_eta,im_eta,re_ref,im_ref");
    CHECK(split_csv(lines[1]).size() == 5);

    double global = -1.0, shadow = -1.0;
    int dof = 0;
    for (const auto &line : lines) {
        std::sscanf(line.c_str(), "# dof = %d", &dof);
        std::sscanf(line.c_str(), "# global_relerr = %lf", &global);
        std::sscanf(line.c_str(), "# shadow_relerr = %lf", &shadow);
    }
    CHECK(dof == 24); // six intervals, degree 3
    CHECK(global > 0.0);
    CHECK(global < 0.05);
    CHECK(shadow > 0.0);
    CHECK(shadow < 0.5);
}

TEST_CASE("cli: sweep emits one row per wavenumber and degree") {
    const std::string cfg = write_text("sweep.cfg", kCircleCfg);
    const fs::path out = scratch_dir() / "sweep.csv";
    const RunResult r = run_cli("sweep --config " + cfg +
                                " --k 12,20 --degrees 1,2 --out " +
                                out.string());
    REQUIRE(r.exit_code == 0);

    const auto lines = lines_of(read_text(out.string()));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "k,d,dof,global_relerr,shadow_relerr,wall_seconds");
    const std::vector<std::pair<double, int>> want = {
        {12.0, 1}, {12.0, 2}, {20.0, 1}, {20.0, 2}};
    for (size_t i = 0; i < want.size(); ++i) {
        const auto cols = split_csv(lines[i + 1]);
        REQUIRE(cols.size() == 6);
        CHECK(std::stod(cols[0]) == want[i].first);
        CHECK(std::stoi(cols[1]) == want[i].second);
        CHECK(std::stoi(cols[2]) == 6 * (want[i].second + 1));
        CHECK(std::stod(cols[3]) > 0.0);
        CHECK(std::stod(cols[5]) > 0.0);
    }
}

TEST_CASE("cli: tune writes a monotone history and a reusable params file") {
    const std::string cfg = write_text("tune.cfg",
                                       "geometry = circle\n"
                                       "alpha = 1 0\n"
                                       "k = 15\n"
                                       "family = alg-cov\n"
                                       "J = 6\n"
                                       "ppw = 8\n"
                                       "tune_rounds = 1\n"
                                       "tune_steps = 2\n"
                                       "tune_d = 2\n");
    const fs::path hist = scratch_dir() / "tune.csv";
    const fs::path params = scratch_dir() / "tuned.params";
    const RunResult r = run_cli("tune --config " + cfg + " --out " +
                                hist.string() + " --params " +
                                params.string());
    REQUIRE(r.exit_code == 0);

    const auto lines = lines_of(read_text(hist.string()));
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0] == "round,param,value,local_err,global_err");
    double prev = 0.0;
    bool first = true;
    int evaluations = 0;
    for (const auto &line : lines) {
        std::sscanf(line.c_str(), "# evaluations = %d", &evaluations);
        if (line.empty() || line[0] == '#' || line == lines[0]) {
            continue;
        }
        const auto cols = split_csv(line);
        REQUIRE(cols.size() == 5);
        const double global = std::stod(cols[4]);
        if (!first) {
            CHECK(global <= prev * (1.0 + 1e-12));
        }
        prev = global;
        first = false;
    }
    CHECK(evaluations > 4);

    const PartitionSpec spec = parse_partition_file(params.string());
    CHECK(spec.mode == PartitionMode::cov);
    CHECK(spec.J == 6);
    CHECK(spec.params.xi1 > 0.0);
    CHECK(spec.params.zeta2p > 0.0);

    // The stored file must drive a solve directly.
    const std::string cfg2 = write_text("tune_reuse.cfg", kCircleCfg);
    const fs::path out = scratch_dir() / "reuse.csv";
    const RunResult reuse =
        run_cli("solve --config " + cfg2 + " --k 15 --params " +
                params.string() + " --out " + out.string());
    CHECK(reuse.exit_code == 0);
}

TEST_CASE("cli: configuration problems exit with code 2") {
    const RunResult noconf = run_cli("solve");
    CHECK(noconf.exit_code == 2);

    const RunResult missing = run_cli("solve --config /nonexistent.cfg");
    CHECK(missing.exit_code == 2);
    CHECK(missing.output.find("config error") != std::string::npos);

    const std::string nogeom = write_text("nogeom.cfg", "k = 5\n");
    const RunResult g = run_cli("solve --config " + nogeom);
    CHECK(g.exit_code == 2);
    CHECK(g.output.find("geometry") != std::string::npos);

    const std::string cfg = write_text("exit.cfg", kCircleCfg);
    const RunResult fam = run_cli("solve --config " + cfg + " --family alg");
    CHECK(fam.exit_code == 2);
    CHECK(fam.output.find("family") != std::string::npos);

    const RunResult two = run_cli("solve --config " + cfg + " --k 10,20");
    CHECK(two.exit_code == 2);
    CHECK(two.output.find("exactly one wavenumber") != std::string::npos);

    const RunResult degs =
        run_cli("solve --config " + cfg + " --degrees 1,2,3");
    CHECK(degs.exit_code == 2);
    CHECK(degs.output.find("6 intervals") != std::string::npos);

    // A cov params file cannot back a freq-adapted family.
    PartitionSpec spec;
    spec.mode = PartitionMode::cov;
    spec.J = 6;
    spec.params.xi1 = spec.params.xi2 = 0.4;
    spec.params.xi1p = spec.params.xi2p = 0.8;
    spec.params.zeta1 = spec.params.zeta2 = 0.8;
    spec.params.zeta1p = spec.params.zeta2p = 1.6;
    const fs::path p = scratch_dir() / "cov.params";
    write_partition_file(p.string(), spec);
    const RunResult mode = run_cli("solve --config " + cfg +
                                   " --family alg-freq --params " +
                                   p.string());
    CHECK(mode.exit_code == 2);
    CHECK(mode.output.find("does not match family") != std::string::npos);

    const RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("solve") != std::string::npos);
}
