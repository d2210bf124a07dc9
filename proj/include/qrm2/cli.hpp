// cli.hpp — Batch front-end: range parsing, run configuration, and the
// sweep-and-export commands behind each CLI subcommand.

#pragma once

#include "qrm2/io.hpp"

#include <string>
#include <vector>

namespace qrm2::cli {

// "start:stop:count" with stop >= start; a single value is a 1-point range.
// Scalar tokens accept a pi literal: "pi", "2pi", "-pi/2", "0.25pi".
struct Range {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> grid() const;
};

double parse_scalar(const std::string& token);
Range parse_range(const std::string& text);

struct RunConfig {
    Range f{0.0, 0.0, 1};
    Range phi{0.0, 0.0, 1};
    double delta = 1.0;
    double omega = 1.0;
    double nbar = 25.0;
    double mu = 100.0;
    double t_final = 400.0;
    double conv_tol = 1e-9;
    int nu = 0;
    int nu2 = 3;
    int n_max = -1;  // < 0: per-command default (20 start cutoff; 120 for dynamics)
    int hard_cap = 400;
    int samples = 1 << 14;
    int levels = 8;
    int channel = 4;
    int grid_points = 512;
    double peak_max_freq = 1.5;
    double peak_rel_threshold = 0.15;
    std::string observable = "term";  // term | photon | entanglement
    std::string out = "out.csv";
    std::string format = "csv";       // csv | json
};

// Each command writes its table(s) and returns the process exit code:
// 0 when every grid point succeeded; 1 after partial failures, in which case
// the completed rows are still written together with a "<out>.errors.json"
// manifest listing the failed coordinates.
int run_surface(const RunConfig& config);
int run_transition(const RunConfig& config);
int run_dynamics(const RunConfig& config);
int run_compare(const RunConfig& config);
int run_relmotion(const RunConfig& config);

}  // namespace qrm2::cli
