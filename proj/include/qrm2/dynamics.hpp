// dynamics.hpp — Spectral time evolution from a coherent-state initial
// condition: population of the both-down channel, reduced two-qubit density
// matrix, and the Fourier spectrum of the population signal.

#pragma once

#include "qrm2/linalg.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace qrm2 {

// Field in a coherent state of amplitude alpha = sqrt(nbar), both qubits in
// the spin channel `channel` (default 4, both down).
struct InitialCondition {
    double alpha = 0.0;
    int channel = 4;  // 1..4
};

// Poisson mass above the cutoff: 1 - sum_{k<=n_max} e^{-a^2} a^{2k} / k!
double coherent_norm_deficit(double alpha, int n_max);

// c_k = e^{-a^2/2} a^k / sqrt(k!), k = 0..n_max (evaluated in log space)
Eigen::VectorXd coherent_coefficients(double alpha, int n_max);

// Stationary-state amplitudes A_kappa = <psi_kappa | Psi(0)>. Requires the
// truncated coherent norm deficit at the eigensystem's cutoff to be at most
// `deficit_tol`, otherwise throws asking for a larger cutoff.
Eigen::VectorXcd initial_amplitudes(const EigenSystem& eig, const InitialCondition& init,
                                    double deficit_tol = 1e-12);

struct TimeSeries {
    std::vector<double> times;   // uniform grid, units 1/omega
    std::vector<double> values;  // population, within [0, 1] up to roundoff
};

struct SpectrumSeries {
    std::vector<double> freqs;       // non-negative, spacing 2*pi / (N * dt)
    std::vector<double> magnitudes;  // |DFT| of the windowed, mean-free signal
};

// t_j = j * t_final / n_samples, j = 0..n_samples-1
std::vector<double> uniform_time_grid(double t_final, int n_samples);

// Full state at time t in the flattened basis, V * (A .* exp(-i E t)).
Eigen::VectorXcd state_at(const EigenSystem& eig, const Eigen::VectorXcd& amps, double t);

// P(t) = sum_n |<n, chi_channel | Psi(t)>|^2, evaluated exactly from the
// eigensystem (no integrator).
TimeSeries population_series(const EigenSystem& eig, const Eigen::VectorXcd& amps,
                             const std::vector<double>& times, int channel = 4);

// Two-qubit density matrix at time t, field traced out. Hermitian, positive
// semidefinite, unit trace up to the eigensystem tolerances.
Eigen::Matrix4cd reduced_density_matrix(const EigenSystem& eig, const Eigen::VectorXcd& amps,
                                        double t);

// Magnitudes of the DFT of the mean-subtracted, Hann-windowed series, padded
// to a power of two; non-negative frequencies only. Needs >= 16 samples.
SpectrumSeries population_spectrum(const TimeSeries& series);

struct Peak {
    double freq = 0.0;
    double magnitude = 0.0;
};

// Fundamental-line detector: among local maxima with freq in
// (min_freq, max_freq], keep those reaching rel_threshold of the strongest
// one, and return the lowest-frequency member, parabolically refined. The
// defaults target the slow (envelope) dynamics below the field-harmonic
// lines near 2*delta.
struct PeakOptions {
    double min_freq = 0.0;
    double max_freq = 1.5;
    double rel_threshold = 0.15;
};

std::optional<Peak> dominant_peak(const SpectrumSeries& spec, PeakOptions opts = {});

// Local maxima above rel_threshold of the global maximum magnitude.
int count_peaks(const SpectrumSeries& spec, double rel_threshold = 0.05);

}  // namespace qrm2
