#include "qrm2/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrm2 {

double coherent_norm_deficit(double alpha, int n_max) {
    if (alpha < 0.0 || !std::isfinite(alpha))
        throw std::invalid_argument("coherent_norm_deficit: alpha must be finite and >= 0");
    if (n_max < 0) throw std::invalid_argument("coherent_norm_deficit: n_max must be >= 0");
    if (alpha == 0.0) return 0.0;
    double mass = 0.0;
    for (int k = 0; k <= n_max; ++k)
        mass += std::exp(2.0 * k * std::log(alpha) - std::lgamma(k + 1.0) - alpha * alpha);
    return std::max(0.0, 1.0 - mass);
}

Eigen::VectorXd coherent_coefficients(double alpha, int n_max) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
    if (alpha == 0.0) {
        c[0] = 1.0;
        return c;
    }
    for (int k = 0; k <= n_max; ++k)
        c[k] = std::exp(k * std::log(alpha) - 0.5 * std::lgamma(k + 1.0) - 0.5 * alpha * alpha);
    return c;
}

Eigen::VectorXcd initial_amplitudes(const EigenSystem& eig, const InitialCondition& init,
                                    double deficit_tol) {
    if (init.channel < 1 || init.channel > 4)
        throw std::invalid_argument("initial_amplitudes: channel must be 1..4");
    if (init.alpha < 0.0 || !std::isfinite(init.alpha))
        throw std::invalid_argument("initial_amplitudes: alpha must be finite and >= 0");
    const int n_max = eig.fock_levels() - 1;

    const double deficit = coherent_norm_deficit(init.alpha, n_max);
    if (deficit > deficit_tol)
        throw std::invalid_argument(
            "initial_amplitudes: truncated coherent-state norm deficit " +
            std::to_string(deficit) + " exceeds tolerance; increase the Fock cutoff");

    const Eigen::VectorXd c = coherent_coefficients(init.alpha, n_max);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(eig.dim());
    for (int k = 0; k <= n_max; ++k) psi0[4 * k + (init.channel - 1)] = c[k];

    Eigen::VectorXcd amps = eig.vectors.adjoint() * psi0;
    const double norm2 = amps.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-10 + deficit)
        throw std::runtime_error("initial_amplitudes: completeness violated, sum |A|^2 = " +
                                 std::to_string(norm2));
    return amps;
}

std::vector<double> uniform_time_grid(double t_final, int n_samples) {
    if (!(t_final > 0.0) || n_samples < 1)
        throw std::invalid_argument("uniform_time_grid: need t_final > 0 and n_samples >= 1");
    std::vector<double> t(n_samples);
    const double dt = t_final / n_samples;
    for (int j = 0; j < n_samples; ++j) t[j] = j * dt;
    return t;
}

namespace {

void require_uniform(const std::vector<double>& times) {
    if (times.size() < 2) return;
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw std::invalid_argument("time grid must be strictly increasing");
    for (std::size_t j = 1; j < times.size(); ++j) {
        const double step = times[j] - times[j - 1];
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("time grid must be uniform");
    }
}

}  // namespace

Eigen::VectorXcd state_at(const EigenSystem& eig, const Eigen::VectorXcd& amps, double t) {
    if (amps.size() != eig.dim())
        throw std::invalid_argument("state_at: amplitude size mismatch");
    Eigen::VectorXcd w(amps.size());
    for (Eigen::Index k = 0; k < amps.size(); ++k)
        w[k] = amps[k] * std::polar(1.0, -eig.values[k] * t);
    return eig.vectors * w;
}

TimeSeries population_series(const EigenSystem& eig, const Eigen::VectorXcd& amps,
                             const std::vector<double>& times, int channel) {
    if (channel < 1 || channel > 4)
        throw std::invalid_argument("population_series: channel must be 1..4");
    if (amps.size() != eig.dim())
        throw std::invalid_argument("population_series: amplitude size mismatch");
    if (times.empty()) throw std::invalid_argument("population_series: empty time grid");
    require_uniform(times);

    const int d = eig.dim();
    const int levels = eig.fock_levels();

    // rows of V belonging to the requested spin channel
    Eigen::MatrixXcd chan(levels, d);
    for (int n = 0; n < levels; ++n) chan.row(n) = eig.vectors.row(4 * n + (channel - 1));

    TimeSeries out;
    out.times = times;
    out.values.resize(times.size());

    const int chunk = 1024;
    Eigen::MatrixXcd w(d, chunk);
    for (std::size_t base = 0; base < times.size(); base += chunk) {
        const int m = static_cast<int>(std::min<std::size_t>(chunk, times.size() - base));
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < d; ++k)
                w(k, j) = amps[k] * std::polar(1.0, -eig.values[k] * times[base + j]);
        const Eigen::MatrixXcd proj = chan * w.leftCols(m);
        for (int j = 0; j < m; ++j) {
            const double p = proj.col(j).squaredNorm();
            if (p < -1e-12 || p > 1.0 + 1e-12)
                throw std::runtime_error("population_series: population out of [0, 1]");
            out.values[base + j] = p;
        }
    }
    return out;
}

Eigen::Matrix4cd reduced_density_matrix(const EigenSystem& eig, const Eigen::VectorXcd& amps,
                                        double t) {
    const Eigen::VectorXcd psi = state_at(eig, amps, t);
    const int levels = eig.fock_levels();
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int n = 0; n < levels; ++n) {
        const Eigen::Vector4cd block = psi.segment<4>(4 * n);
        rho += block * block.adjoint();
    }
    return rho;
}

SpectrumSeries population_spectrum(const TimeSeries& series) {
    const std::size_t n0 = series.values.size();
    if (n0 < 16) throw std::invalid_argument("population_spectrum: need at least 16 samples");
    if (series.times.size() != n0)
        throw std::invalid_argument("population_spectrum: times/values size mismatch");
    require_uniform(series.times);
    const double dt = series.times[1] - series.times[0];

    std::size_t n = 1;
    while (n < n0) n <<= 1;

    std::vector<double> buf(n, 0.0);
    double mean = 0.0;
    for (double v : series.values) mean += v;
    mean /= static_cast<double>(n0);
    for (std::size_t j = 0; j < n0; ++j) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * j / static_cast<double>(n0 - 1)));
        buf[j] = (series.values[j] - mean) * hann;
    }

    std::vector<cplx> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error("population_spectrum: FFT plan failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    SpectrumSeries spec;
    spec.freqs.resize(n / 2 + 1);
    spec.magnitudes.resize(n / 2 + 1);
    const double df = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    for (std::size_t j = 0; j <= n / 2; ++j) {
        spec.freqs[j] = j * df;
        spec.magnitudes[j] = std::abs(out[j]);
    }
    return spec;
}

namespace {

bool is_local_max(const std::vector<double>& m, std::size_t i) {
    return i > 0 && i + 1 < m.size() && m[i] >= m[i - 1] && m[i] > m[i + 1];
}

double refine_peak(const SpectrumSeries& spec, std::size_t i) {
    const auto& m = spec.magnitudes;
    if (i == 0 || i + 1 >= m.size()) return spec.freqs[i];
    const double denom = m[i - 1] - 2.0 * m[i] + m[i + 1];
    if (denom == 0.0) return spec.freqs[i];
    const double shift = 0.5 * (m[i - 1] - m[i + 1]) / denom;
    return spec.freqs[i] + shift * (spec.freqs[1] - spec.freqs[0]);
}

}  // namespace

std::optional<Peak> dominant_peak(const SpectrumSeries& spec, PeakOptions opts) {
    if (spec.freqs.size() != spec.magnitudes.size() || spec.freqs.size() < 3) return std::nullopt;

    double band_max = 0.0;
    for (std::size_t i = 1; i + 1 < spec.freqs.size(); ++i)
        if (spec.freqs[i] > opts.min_freq && spec.freqs[i] <= opts.max_freq &&
            is_local_max(spec.magnitudes, i))
            band_max = std::max(band_max, spec.magnitudes[i]);
    if (band_max <= 0.0) return std::nullopt;

    for (std::size_t i = 1; i + 1 < spec.freqs.size(); ++i) {
        if (spec.freqs[i] <= opts.min_freq || spec.freqs[i] > opts.max_freq) continue;
        if (!is_local_max(spec.magnitudes, i)) continue;
        if (spec.magnitudes[i] < opts.rel_threshold * band_max) continue;
        return Peak{refine_peak(spec, i), spec.magnitudes[i]};
    }
    return std::nullopt;
}

int count_peaks(const SpectrumSeries& spec, double rel_threshold) {
    if (spec.magnitudes.size() < 3) return 0;
    const double global = *std::max_element(spec.magnitudes.begin(), spec.magnitudes.end());
    if (global <= 0.0) return 0;
    int count = 0;
    for (std::size_t i = 1; i + 1 < spec.magnitudes.size(); ++i)
        if (is_local_max(spec.magnitudes, i) && spec.magnitudes[i] > rel_threshold * global)
            ++count;
    return count;
}

}  // namespace qrm2
