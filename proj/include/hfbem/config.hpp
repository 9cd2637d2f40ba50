#pragma once

// Flat key-value configuration files for the command line driver: an
// experiment description (geometry, incidence, wavenumbers, space family)
// and a partition parameter file (the tuned interval extents).  Lines are
// "key = value [value...]"; '#' starts a comment.  Unknown keys, duplicate
// keys, and malformed numbers raise std::invalid_argument carrying the file
// name and line number.

#include "hfbem/geometry.hpp"
#include "hfbem/hfspaces.hpp"

#include <string>
#include <vector>

namespace hfbem {

struct PartitionSpec {
    PartitionMode mode = PartitionMode::cov;
    int J = 6;                 // cov partitions
    int m = 1;                 // frequency-adapted module count
    CovParams params;          // primed fields ignored for freq mode
    std::vector<double> eps;   // optional custom exponent schedule (freq)
    std::vector<int> degrees;  // optional per-interval degrees
};

// Keys: mode (cov | freq); J or m; xi1 xi2 zeta1 zeta2 and, for cov,
// xi1p xi2p zeta1p zeta2p; optional eps (freq) and degrees.
PartitionSpec parse_partition_text(const std::string &text,
                                   const std::string &name);
PartitionSpec parse_partition_file(const std::string &path);
void write_partition_file(const std::string &path, const PartitionSpec &spec);

struct ExperimentConfig {
    CurveKind geometry = CurveKind::circle;
    ShapeParams shape;
    Vec2 alpha = Vec2(1.0, 0.0);     // normalized by the driver
    std::vector<double> ks;          // one or more wavenumbers
    std::string family = "alg-cov";  // alg-cov | trig-cov | alg-freq | trig-freq
    int J = 6;
    int m = 1;
    std::vector<int> degrees;        // empty = driver default
    int ppw = 10;
    std::string params_path;         // partition parameter file, optional
    std::string out_path;            // output file, optional
    int tune_rounds = 6;             // tune subcommand only
    int tune_steps = 8;
    int tune_d = 4;
};

// Keys: geometry (circle | ellipse | kite), radius, a, b, alpha (two
// numbers), k (list), family, J, m, degrees (list), ppw, params, out,
// tune_rounds, tune_steps, tune_d.  geometry and k are required.
ExperimentConfig parse_experiment_text(const std::string &text,
                                       const std::string &name);
ExperimentConfig parse_experiment_file(const std::string &path);

// List parsing shared with the command line flags: comma or whitespace
// separated numbers, at least one entry required.
std::vector<double> parse_double_list(const std::string &text);
std::vector<int> parse_int_list(const std::string &text);

} // namespace hfbem
