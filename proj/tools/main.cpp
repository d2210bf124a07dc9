// qrm2 — batch CLI for the two-qubit cavity model: potential and observable
// surfaces, transition frequencies, coherent-state dynamics, the analytic
// approximation comparison, and the relative-motion spectrum.

#include "qrm2/cli.hpp"
#include "qrm2/version.hpp"

#include <CLI11.hpp>

#include <exception>
#include <functional>
#include <iostream>
#include <string>

namespace {

using qrm2::cli::RunConfig;

struct RangeFlags {
    std::string f = "0";
    std::string phi = "0";
};

void add_common(CLI::App* cmd, RunConfig& config, RangeFlags& ranges) {
    cmd->fallthrough();  // app-level flags like --config may follow the subcommand
    cmd->add_option("--f", ranges.f, "coupling constant, value or start:stop:count");
    cmd->add_option("--phi", ranges.phi,
                    "inter-qubit coordinate in radians (pi literals ok), value or range");
    cmd->add_option("--delta", config.delta, "detuning ratio")->check(CLI::NonNegativeNumber);
    cmd->add_option("--omega", config.omega, "photon energy scale")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--nmax", config.n_max, "Fock cutoff (start value where convergence runs)");
    cmd->add_option("--cap", config.hard_cap, "hard cap on the convergence cutoff")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", config.conv_tol, "eigenvalue convergence tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", config.out, "output path");
    cmd->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

void finalize_ranges(const RangeFlags& ranges, RunConfig& config) {
    try {
        config.f = qrm2::cli::parse_range(ranges.f);
    } catch (const std::exception& err) {
        throw CLI::ValidationError("--f", err.what());
    }
    try {
        config.phi = qrm2::cli::parse_range(ranges.phi);
    } catch (const std::exception& err) {
        throw CLI::ValidationError("--phi", err.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qrm2: spectra, radiation-induced interaction potential, dynamics and "
        "correlation observables of two qubits coupled to one cavity mode "
        "beyond the rotating-wave approximation"};
    app.set_version_flag("--version", std::string(qrm2::kVersion));
    app.set_config("--config", "", "configuration file whose keys mirror the flags");
    app.require_subcommand(1);

    int exit_code = 0;
    RunConfig config;
    RangeFlags ranges;

    auto* surface = app.add_subcommand(
        "surface", "term / photon-number / entanglement surface over (f, phi)");
    add_common(surface, config, ranges);
    surface->add_option("--observable", config.observable, "term | photon | entanglement")
        ->check(CLI::IsMember({"term", "photon", "entanglement"}));
    surface->add_option("--nu", config.nu, "state index")->check(CLI::NonNegativeNumber);
    surface->callback([&] {
        finalize_ranges(ranges, config);
        exit_code = qrm2::cli::run_surface(config);
    });

    auto* transition = app.add_subcommand(
        "transition", "transition frequency omega*(u_nu2 - u_nu1) over (f, phi)");
    add_common(transition, config, ranges);
    transition->add_option("--nu", config.nu, "lower state index")
        ->check(CLI::NonNegativeNumber);
    transition->add_option("--nu2", config.nu2, "upper state index")
        ->check(CLI::NonNegativeNumber);
    transition->callback([&] {
        finalize_ranges(ranges, config);
        exit_code = qrm2::cli::run_transition(config);
    });

    auto* dynamics = app.add_subcommand(
        "dynamics", "coherent-state evolution: population series and spectra per f");
    add_common(dynamics, config, ranges);
    dynamics->add_option("--nbar", config.nbar, "mean photon number of the initial state")
        ->check(CLI::NonNegativeNumber);
    dynamics->add_option("--T", config.t_final, "time window in units of 1/omega")
        ->check(CLI::PositiveNumber);
    dynamics->add_option("--samples", config.samples, "number of time samples")
        ->check(CLI::PositiveNumber);
    dynamics->add_option("--channel", config.channel, "initial spin channel 1..4")
        ->check(CLI::Range(1, 4));
    dynamics->add_option("--peak-maxfreq", config.peak_max_freq,
                         "upper edge of the fundamental-peak search band");
    dynamics->add_option("--peak-threshold", config.peak_rel_threshold,
                         "relative prominence for the fundamental peak");
    dynamics->callback([&] {
        finalize_ranges(ranges, config);
        exit_code = qrm2::cli::run_dynamics(config);
    });

    auto* compare = app.add_subcommand(
        "compare", "numeric vs analytic ground term along phi at fixed f");
    add_common(compare, config, ranges);
    compare->callback([&] {
        finalize_ranges(ranges, config);
        exit_code = qrm2::cli::run_compare(config);
    });

    auto* relmotion = app.add_subcommand(
        "relmotion", "relative-motion levels on term nu over one potential period");
    add_common(relmotion, config, ranges);
    relmotion->add_option("--nu", config.nu, "term index")->check(CLI::NonNegativeNumber);
    relmotion->add_option("--mu", config.mu, "dimensionless mass parameter")
        ->check(CLI::PositiveNumber);
    relmotion->add_option("--levels", config.levels, "number of levels to report")
        ->check(CLI::PositiveNumber);
    relmotion->add_option("--grid", config.grid_points, "finite-difference grid points")
        ->check(CLI::PositiveNumber);
    relmotion->callback([&] {
        finalize_ranges(ranges, config);
        exit_code = qrm2::cli::run_relmotion(config);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return exit_code;
}
