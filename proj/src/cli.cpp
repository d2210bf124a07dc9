#include "qrm2/cli.hpp"

#include "qrm2/analytic.hpp"
#include "qrm2/dynamics.hpp"
#include "qrm2/linalg.hpp"
#include "qrm2/model.hpp"
#include "qrm2/observables.hpp"
#include "qrm2/surfaces.hpp"
#include "qrm2/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace qrm2::cli {

std::vector<double> Range::grid() const {
    if (count < 1) throw std::invalid_argument("Range: count must be >= 1");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = start;
        return g;
    }
    const double step = (stop - start) / (count - 1);
    for (int i = 0; i < count; ++i) g[i] = start + i * step;
    return g;
}

double parse_scalar(const std::string& token) {
    std::string s;
    for (char c : token)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty numeric token");

    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad numeric token '" + token + "'");
        return v;
    }

    const std::string prefix = s.substr(0, pos);
    const std::string suffix = s.substr(pos + 2);
    double factor = 1.0;
    if (prefix == "-")
        factor = -1.0;
    else if (!prefix.empty() && prefix != "+") {
        std::size_t used = 0;
        factor = std::stod(prefix, &used);
        if (used != prefix.size())
            throw std::invalid_argument("bad numeric token '" + token + "'");
    }
    double denom = 1.0;
    if (!suffix.empty()) {
        if (suffix[0] != '/')
            throw std::invalid_argument("bad numeric token '" + token + "'");
        std::size_t used = 0;
        denom = std::stod(suffix.substr(1), &used);
        if (used != suffix.size() - 1 || denom == 0.0)
            throw std::invalid_argument("bad numeric token '" + token + "'");
    }
    return factor * std::numbers::pi / denom;
}

Range parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);

    Range r;
    if (parts.size() == 1) {
        r.start = r.stop = parse_scalar(parts[0]);
        r.count = 1;
        return r;
    }
    if (parts.size() != 3)
        throw std::invalid_argument("range must be 'value' or 'start:stop:count': '" + text + "'");
    r.start = parse_scalar(parts[0]);
    r.stop = parse_scalar(parts[1]);
    std::size_t used = 0;
    const long count = std::stol(parts[2], &used);
    if (used != parts[2].size() || count < 1)
        throw std::invalid_argument("range count must be a positive integer: '" + text + "'");
    r.count = static_cast<int>(count);
    if (r.stop < r.start)
        throw std::invalid_argument("range stop must be >= start: '" + text + "'");
    if (r.count > 1 && r.stop == r.start)
        throw std::invalid_argument("range with count > 1 needs stop > start: '" + text + "'");
    return r;
}

namespace {

struct GridFailure {
    double f;
    double phi;
    std::string message;
};

std::filesystem::path out_stem(const RunConfig& config) {
    std::filesystem::path p(config.out);
    const std::string ext = p.extension().string();
    if (ext == ".csv" || ext == ".json") p.replace_extension();
    return p;
}

std::filesystem::path out_path(const RunConfig& config) {
    std::filesystem::path stem = out_stem(config);
    stem += "." + config.format;
    return stem;
}

void write_error_manifest(const RunConfig& config, const std::vector<GridFailure>& failures) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& fail : failures)
        arr.push_back({{"f", fail.f}, {"phi", fail.phi}, {"error", fail.message}});
    std::filesystem::path p = out_stem(config);
    p += ".errors.json";
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write error manifest " + p.string());
    out << arr.dump(1) << "\n";
}

int start_cutoff(const RunConfig& config) { return config.n_max > 0 ? config.n_max : 20; }
int dynamics_cutoff(const RunConfig& config) { return config.n_max > 0 ? config.n_max : 120; }

void add_common_meta(DataTable& table, const RunConfig& config) {
    table.add_meta("tool", "qrm2");
    table.add_meta("version", kVersion);
    table.add_meta("command_delta", config.delta);
    table.add_meta("command_omega", config.omega);
    table.add_meta("format", config.format);
}

void require_single(const Range& r, const char* flag) {
    if (r.count != 1)
        throw std::invalid_argument(std::string(flag) + " must be a single value for this command");
}

}  // namespace

int run_surface(const RunConfig& config) {
    const std::vector<double> f_grid = config.f.grid();
    const std::vector<double> phi_grid = config.phi.grid();
    const ModelParams base(0.0, config.delta, 0.0, start_cutoff(config), config.omega);

    const bool is_term = config.observable == "term";
    const bool is_photon = config.observable == "photon";
    if (!is_term && !is_photon && config.observable != "entanglement")
        throw std::invalid_argument("surface: observable must be term, photon or entanglement");

    DataTable table;
    add_common_meta(table, config);
    table.add_meta("observable", config.observable);
    table.add_meta("nu", config.nu);
    table.add_meta("conv_tol", config.conv_tol);
    table.add_meta("n_max_start", start_cutoff(config));
    table.columns = {"f", "phi", "nu", "value"};

    std::vector<GridFailure> failures;
    int max_cutoff = 0;
    int degenerate_points = 0;
    for (double fval : f_grid) {
        for (double phival : phi_grid) {
            try {
                const ModelParams p = base.with_f(fval).with_phi(phival);
                double value = 0.0;
                if (is_term) {
                    ConvergedResult conv =
                        converged_ground(p, config.conv_tol, 8, 10, config.hard_cap);
                    if (config.nu >= conv.eig.dim())
                        throw std::invalid_argument("nu out of range");
                    value = conv.eig.values[config.nu];
                    max_cutoff = std::max(max_cutoff, conv.n_max_used);
                } else {
                    ObservableOptions opts;
                    opts.conv_tol = config.conv_tol;
                    opts.hard_cap = config.hard_cap;
                    const ObservablePoint pv = observable_at(
                        p, config.nu,
                        is_photon ? ObservableKind::photon : ObservableKind::entanglement, opts);
                    value = pv.value;
                    if (pv.degenerate) ++degenerate_points;
                }
                table.rows.push_back({fval, phival, double(config.nu), value});
            } catch (const std::exception& err) {
                failures.push_back({fval, phival, err.what()});
            }
        }
    }
    if (max_cutoff > 0) table.add_meta("n_max_used_max", max_cutoff);
    if (degenerate_points > 0) table.add_meta("degenerate_points", degenerate_points);

    write_table(out_path(config), table, config.format);
    if (!failures.empty()) {
        write_error_manifest(config, failures);
        return 1;
    }
    return 0;
}

int run_transition(const RunConfig& config) {
    if (config.nu < 0 || config.nu2 <= config.nu)
        throw std::invalid_argument("transition: need 0 <= nu < nu2");
    const std::vector<double> f_grid = config.f.grid();
    const std::vector<double> phi_grid = config.phi.grid();
    const ModelParams base(0.0, config.delta, 0.0, start_cutoff(config), config.omega);

    DataTable table;
    add_common_meta(table, config);
    table.add_meta("nu1", config.nu);
    table.add_meta("nu2", config.nu2);
    table.add_meta("conv_tol", config.conv_tol);
    table.columns = {"f", "phi", "nu", "value"};

    std::vector<GridFailure> failures;
    for (double fval : f_grid) {
        for (double phival : phi_grid) {
            try {
                const ConvergedResult conv = converged_ground(
                    base.with_f(fval).with_phi(phival), config.conv_tol, 8, 10, config.hard_cap);
                if (config.nu2 >= conv.eig.dim())
                    throw std::invalid_argument("nu2 out of range");
                const double value =
                    config.omega * (conv.eig.values[config.nu2] - conv.eig.values[config.nu]);
                table.rows.push_back({fval, phival, double(config.nu2), value});
            } catch (const std::exception& err) {
                failures.push_back({fval, phival, err.what()});
            }
        }
    }

    write_table(out_path(config), table, config.format);
    if (!failures.empty()) {
        write_error_manifest(config, failures);
        return 1;
    }
    return 0;
}

int run_compare(const RunConfig& config) {
    require_single(config.f, "--f");
    const std::vector<double> phi_grid = config.phi.grid();
    const ModelParams base(config.f.start, config.delta, 0.0, start_cutoff(config),
                           config.omega);

    DataTable table;
    add_common_meta(table, config);
    table.add_meta("f", config.f.start);
    table.add_meta("conv_tol", config.conv_tol);
    table.columns = {"phi", "numeric", "analytic", "deviation"};

    std::vector<GridFailure> failures;
    double max_dev = 0.0, dev_sum = 0.0;
    for (double phival : phi_grid) {
        try {
            const double numeric =
                converged_ground(base.with_phi(phival), config.conv_tol, 8, 10, config.hard_cap)
                    .eig.values[0];
            const double analytic =
                closed_form_energies(config.f.start, config.delta, phival).e1;
            const double dev = numeric - analytic;
            max_dev = std::max(max_dev, std::abs(dev));
            dev_sum += std::abs(dev);
            table.rows.push_back({phival, numeric, analytic, dev});
        } catch (const std::exception& err) {
            failures.push_back({config.f.start, phival, err.what()});
        }
    }
    table.add_meta("max_abs_dev", max_dev);
    if (!table.rows.empty())
        table.add_meta("mean_abs_dev", dev_sum / static_cast<double>(table.rows.size()));

    write_table(out_path(config), table, config.format);
    if (!failures.empty()) {
        write_error_manifest(config, failures);
        return 1;
    }
    return 0;
}

int run_relmotion(const RunConfig& config) {
    require_single(config.f, "--f");
    const ModelParams params(config.f.start, config.delta, 0.0, start_cutoff(config),
                             config.omega);
    const std::vector<double> u = term_on_period_grid(params, config.nu, config.grid_points,
                                                      config.conv_tol, config.hard_cap);
    const RelativeMotionResult res = solve_relative_motion_on(u, config.mu, config.levels);

    DataTable levels;
    add_common_meta(levels, config);
    levels.add_meta("f", config.f.start);
    levels.add_meta("nu", config.nu);
    levels.add_meta("mu", config.mu);
    levels.add_meta("grid_points", config.grid_points);
    levels.columns = {"level", "energy"};
    for (std::size_t m = 0; m < res.levels.size(); ++m)
        levels.rows.push_back({double(m), res.levels[m]});
    write_table(out_path(config), levels, config.format);

    DataTable waves;
    add_common_meta(waves, config);
    waves.add_meta("f", config.f.start);
    waves.add_meta("nu", config.nu);
    waves.add_meta("mu", config.mu);
    waves.columns = {"phi", "potential", "level", "psi"};
    for (int m = 0; m < static_cast<int>(res.levels.size()); ++m)
        for (std::size_t j = 0; j < res.grid.size(); ++j)
            waves.rows.push_back(
                {res.grid[j], res.potential[j], double(m), res.wavefunctions(j, m)});
    std::filesystem::path wpath = out_stem(config);
    wpath += ".wavefunctions." + config.format;
    write_table(wpath, waves, config.format);
    return 0;
}

int run_dynamics(const RunConfig& config) {
    require_single(config.phi, "--phi");
    if (config.nbar < 0.0) throw std::invalid_argument("dynamics: nbar must be >= 0");
    const std::vector<double> f_grid = config.f.grid();
    const double alpha = std::sqrt(config.nbar);
    const int n_max = dynamics_cutoff(config);

    DataTable summary;
    add_common_meta(summary, config);
    summary.add_meta("nbar", config.nbar);
    summary.add_meta("phi", config.phi.start);
    summary.add_meta("n_max", n_max);
    summary.add_meta("t_final", config.t_final);
    summary.add_meta("samples", config.samples);
    summary.add_meta("peak_max_freq", config.peak_max_freq);
    summary.add_meta("peak_rel_threshold", config.peak_rel_threshold);
    summary.columns = {"f", "peak_freq", "peak_magnitude", "n_peaks"};

    const std::vector<double> times = uniform_time_grid(config.t_final, config.samples);
    std::vector<GridFailure> failures;

    for (std::size_t i = 0; i < f_grid.size(); ++i) {
        try {
            const ModelParams params(f_grid[i], config.delta, config.phi.start, n_max,
                                     config.omega);
            const EigenSystem eig = eigendecompose(build_hamiltonian(params));
            const Eigen::VectorXcd amps =
                initial_amplitudes(eig, InitialCondition{alpha, config.channel});
            const TimeSeries series = population_series(eig, amps, times, config.channel);
            const SpectrumSeries spec = population_spectrum(series);

            DataTable ts;
            add_common_meta(ts, config);
            ts.add_meta("f", f_grid[i]);
            ts.add_meta("nbar", config.nbar);
            ts.add_meta("phi", config.phi.start);
            ts.add_meta("n_max", n_max);
            ts.columns = {"t", "population"};
            for (std::size_t j = 0; j < series.times.size(); ++j)
                ts.rows.push_back({series.times[j], series.values[j]});
            std::filesystem::path tpath = out_stem(config);
            tpath += ".f" + std::to_string(i) + ".series." + config.format;
            write_table(tpath, ts, config.format);

            DataTable sp;
            add_common_meta(sp, config);
            sp.add_meta("f", f_grid[i]);
            sp.add_meta("nbar", config.nbar);
            sp.add_meta("phi", config.phi.start);
            sp.columns = {"freq", "magnitude"};
            for (std::size_t j = 0; j < spec.freqs.size(); ++j)
                sp.rows.push_back({spec.freqs[j], spec.magnitudes[j]});
            std::filesystem::path spath = out_stem(config);
            spath += ".f" + std::to_string(i) + ".spectrum." + config.format;
            write_table(spath, sp, config.format);

            PeakOptions opts;
            opts.max_freq = config.peak_max_freq;
            opts.rel_threshold = config.peak_rel_threshold;
            const auto peak = dominant_peak(spec, opts);
            summary.rows.push_back({f_grid[i], peak ? peak->freq : 0.0,
                                    peak ? peak->magnitude : 0.0,
                                    double(count_peaks(spec))});
        } catch (const std::exception& err) {
            failures.push_back({f_grid[i], config.phi.start, err.what()});
        }
    }

    write_table(out_path(config), summary, config.format);
    if (!failures.empty()) {
        write_error_manifest(config, failures);
        return 1;
    }
    return 0;
}

}  // namespace qrm2::cli
