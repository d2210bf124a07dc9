#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qrm2/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace qrm2;
constexpr double pi = std::numbers::pi;

TEST_CASE("coherent norm deficit") {
    CHECK(coherent_norm_deficit(0.0, 5) == 0.0);
    CHECK(coherent_norm_deficit(5.0, 120) <= 1e-12);
    CHECK(coherent_norm_deficit(5.0, 30) > 1e-12);
    CHECK(coherent_norm_deficit(2.0, 60) <= 1e-12);
}

TEST_CASE("vacuum initial state projects onto a single stationary state") {
    const ModelParams p(0.0, 1.0, 0.0, 10);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{0.0, 4});
    int nonzero = 0;
    double largest = 0.0;
    for (int k = 0; k < amps.size(); ++k) {
        if (std::abs(amps[k]) > 1e-12) ++nonzero;
        largest = std::max(largest, std::abs(amps[k]));
    }
    CHECK(nonzero == 1);
    CHECK(largest == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decoupled amplitudes carry Poisson weights") {
    const int n_max = 60;
    const double alpha = 2.0;
    const ModelParams p(0.0, 1.0, 0.0, n_max);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{alpha, 4});
    CHECK(std::abs(amps.squaredNorm() - 1.0) < 1e-10);

    std::vector<double> weights;
    for (int k = 0; k < amps.size(); ++k)
        if (std::norm(amps[k]) > 1e-16) weights.push_back(std::norm(amps[k]));
    std::vector<double> poisson;
    for (int k = 0; k <= n_max; ++k) {
        const double w =
            std::exp(2.0 * k * std::log(alpha) - std::lgamma(k + 1.0) - alpha * alpha);
        if (w > 1e-16) poisson.push_back(w);
    }
    std::sort(weights.rbegin(), weights.rend());
    std::sort(poisson.rbegin(), poisson.rend());
    REQUIRE(weights.size() == poisson.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        CHECK(weights[i] == doctest::Approx(poisson[i]).epsilon(1e-10));
}

TEST_CASE("amplitude completeness at finite coupling") {
    const ModelParams p(0.3, 1.0, pi / 4, 120);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{5.0, 4});
    CHECK(std::abs(amps.squaredNorm() - 1.0) < 1e-10);
}

TEST_CASE("a short cutoff is rejected with a cutoff hint") {
    const ModelParams p(0.1, 1.0, 0.0, 30);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    try {
        initial_amplitudes(eig, InitialCondition{5.0, 4});
        FAIL("expected a norm-deficit error");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("cutoff") != std::string::npos);
    }
}

TEST_CASE("population starts at one and stays within bounds") {
    const ModelParams p(0.5, 1.0, 0.9, 60);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{3.0, 4});
    const TimeSeries series = population_series(eig, amps, uniform_time_grid(50.0, 512));
    CHECK(std::abs(series.values[0] - 1.0) < 1e-10);
    for (double v : series.values) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("decoupled population is frozen at one") {
    const ModelParams p(0.0, 1.0, 0.0, 40);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{2.0, 4});
    const TimeSeries series = population_series(eig, amps, uniform_time_grid(80.0, 256));
    for (double v : series.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("norm is conserved along the evolution") {
    const ModelParams p(0.5, 1.0, 0.3, 60);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{3.0, 4});
    for (double t : {0.0, 1.7, 25.0, 400.0}) {
        const double norm2 = state_at(eig, amps, t).squaredNorm();
        CHECK(std::abs(norm2 - 1.0) < 1e-9);
    }
}

TEST_CASE("reduced density matrix is a projector at t = 0 and stays physical") {
    const ModelParams p(0.5, 1.0, pi / 4, 60);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{3.0, 4});

    const Eigen::Matrix4cd rho0 = reduced_density_matrix(eig, amps, 0.0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const double expect = (a == 3 && b == 3) ? 1.0 : 0.0;
            CHECK(std::abs(rho0(a, b) - expect) < 1e-10);
        }

    const Eigen::Matrix4cd rho = reduced_density_matrix(eig, amps, 10.0);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
        CHECK(es.eigenvalues()[a] >= -1e-12);
        CHECK(es.eigenvalues()[a] <= 1.0 + 1e-12);
        sum += es.eigenvalues()[a];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("decoupled density matrix stays the down-down projector") {
    const ModelParams p(0.0, 1.0, 0.0, 40);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{2.0, 4});
    const Eigen::Matrix4cd rho = reduced_density_matrix(eig, amps, 37.0);
    CHECK(std::abs(rho(3, 3).real() - 1.0) < 1e-10);
}

TEST_CASE("spectrum of a pure tone peaks within one bin") {
    const double omega0 = 1.3;
    const int n = 2048;
    TimeSeries series;
    series.times = uniform_time_grid(200.0, n);
    series.values.resize(n);
    for (int j = 0; j < n; ++j) series.values[j] = 0.5 + 0.4 * std::cos(omega0 * series.times[j]);

    const SpectrumSeries spec = population_spectrum(series);
    const double bin = spec.freqs[1] - spec.freqs[0];
    CHECK(bin == doctest::Approx(2 * pi / 200.0));

    std::size_t imax = 1;
    for (std::size_t i = 1; i < spec.magnitudes.size(); ++i)
        if (spec.magnitudes[i] > spec.magnitudes[imax]) imax = i;
    CHECK(std::abs(spec.freqs[imax] - omega0) <= bin);
}

TEST_CASE("constant series transforms to silence") {
    TimeSeries series;
    series.times = uniform_time_grid(10.0, 64);
    series.values.assign(64, 0.777);
    const SpectrumSeries spec = population_spectrum(series);
    for (double m : spec.magnitudes) CHECK(m < 1e-12);
}

TEST_CASE("spectrum rejects short input") {
    TimeSeries series;
    series.times = uniform_time_grid(1.0, 8);
    series.values.assign(8, 0.0);
    CHECK_THROWS_AS(population_spectrum(series), std::invalid_argument);
}

TEST_CASE("fundamental peak detection on a synthetic spectrum") {
    SpectrumSeries spec;
    for (int i = 0; i <= 400; ++i) {
        spec.freqs.push_back(i * 0.01);
        spec.magnitudes.push_back(0.0);
    }
    spec.magnitudes[30] = 40.0;   // fundamental at 0.30
    spec.magnitudes[60] = 55.0;   // stronger first harmonic at 0.60
    spec.magnitudes[200] = 90.0;  // out-of-band line at 2.0
    spec.magnitudes[350] = 20.0;  // beyond the band edge

    const auto peak = dominant_peak(spec, PeakOptions{0.0, 1.5, 0.15});
    REQUIRE(peak.has_value());
    CHECK(peak->freq == doctest::Approx(0.30).epsilon(1e-12));

    const auto strict = dominant_peak(spec, PeakOptions{0.0, 1.5, 0.9});
    REQUIRE(strict.has_value());
    CHECK(strict->freq == doctest::Approx(0.60).epsilon(1e-12));

    const auto global = dominant_peak(spec, PeakOptions{0.0, 1e9, 1.0});
    REQUIRE(global.has_value());
    CHECK(global->freq == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(count_peaks(spec, 0.05) == 4);
    CHECK(count_peaks(spec, 0.5) == 2);
}

TEST_CASE("small-coupling fundamental matches the rotating-wave reference") {
    const int n_max = 80;
    const double f = 0.02;
    const ModelParams p(f, 1.0, 0.0, n_max);
    const std::vector<double> times = uniform_time_grid(400.0, 4096);

    const EigenSystem full = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps_full = initial_amplitudes(full, InitialCondition{5.0, 4});
    const auto peak_full =
        dominant_peak(population_spectrum(population_series(full, amps_full, times)));

    const EigenSystem rwa = eigendecompose(oracles::build_hamiltonian_rwa(p));
    const Eigen::VectorXcd amps_rwa = initial_amplitudes(rwa, InitialCondition{5.0, 4});
    const auto peak_rwa =
        dominant_peak(population_spectrum(population_series(rwa, amps_rwa, times)));

    REQUIRE(peak_full.has_value());
    REQUIRE(peak_rwa.has_value());
    CHECK(std::abs(peak_full->freq - peak_rwa->freq) <= 0.1 * peak_rwa->freq);
}

TEST_CASE("population is insensitive to cutoff growth past convergence") {
    const std::vector<double> times = uniform_time_grid(50.0, 1024);
    const InitialCondition init{5.0, 4};

    const ModelParams p80(0.1, 1.0, 0.3, 80);
    const EigenSystem e80 = eigendecompose(build_hamiltonian(p80));
    const TimeSeries s80 = population_series(e80, initial_amplitudes(e80, init), times);

    const ModelParams p100(0.1, 1.0, 0.3, 100);
    const EigenSystem e100 = eigendecompose(build_hamiltonian(p100));
    const TimeSeries s100 = population_series(e100, initial_amplitudes(e100, init), times);

    double worst = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j)
        worst = std::max(worst, std::abs(s80.values[j] - s100.values[j]));
    CHECK(worst < 1e-6);
}

TEST_CASE("sorted peak list is invariant under the quarter-period shift") {
    const int n_max = 80;
    const ModelParams p(0.05, 1.0, 0.6, n_max);
    const std::vector<double> times = uniform_time_grid(200.0, 4096);

    auto peak_freqs = [&](const ModelParams& params) {
        const EigenSystem eig = eigendecompose(build_hamiltonian(params));
        const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{5.0, 4});
        const SpectrumSeries spec = population_spectrum(population_series(eig, amps, times));
        const double thr =
            0.1 * *std::max_element(spec.magnitudes.begin(), spec.magnitudes.end());
        std::vector<double> freqs;
        for (std::size_t i = 1; i + 1 < spec.magnitudes.size(); ++i)
            if (spec.magnitudes[i] > thr && spec.magnitudes[i] >= spec.magnitudes[i - 1] &&
                spec.magnitudes[i] > spec.magnitudes[i + 1])
                freqs.push_back(spec.freqs[i]);
        return freqs;
    };

    const std::vector<double> a = peak_freqs(p);
    const std::vector<double> b = peak_freqs(symmetry_partner(p));
    const double bin = 2 * pi / 200.0;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= bin + 1e-12);
}

TEST_CASE("time grids must be uniform") {
    const ModelParams p(0.1, 1.0, 0.0, 20);
    const EigenSystem eig = eigendecompose(build_hamiltonian(p));
    const Eigen::VectorXcd amps = initial_amplitudes(eig, InitialCondition{0.0, 4});
    std::vector<double> times{0.0, 1.0, 2.5, 3.0};
    CHECK_THROWS_AS(population_series(eig, amps, times), std::invalid_argument);
}
