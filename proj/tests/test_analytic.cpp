#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qrm2/analytic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace qrm2;
constexpr double pi = std::numbers::pi;

TEST_CASE("displacement parameters and their sign structure") {
    const Displacements zero = displacement_params(0.0, 1.234);
    CHECK(std::abs(zero.u1) == 0.0);
    CHECK(std::abs(zero.u2) == 0.0);

    const Displacements d = displacement_params(0.5, 0.0);
    CHECK(std::abs(d.u1) == doctest::Approx(1.0));
    CHECK(std::abs(d.u2) == doctest::Approx(0.0));
    CHECK(std::abs(d.u3) == doctest::Approx(0.0));

    const Displacements e = displacement_params(1.0, pi / 4);
    CHECK(std::abs(e.u1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(e.u2) == doctest::Approx(std::sqrt(2.0)));

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uf(0.0, 1.5), up(0.0, 2 * pi);
    for (int i = 0; i < 20; ++i) {
        const double f = uf(rng), phi = up(rng);
        const Displacements g = displacement_params(f, phi);
        CHECK(g.u1.imag() == 0.0);
        CHECK(g.u4.imag() == 0.0);
        CHECK(g.u2.real() == 0.0);
        CHECK(g.u3.real() == 0.0);
        CHECK(g.u1 == -g.u4);
        CHECK(g.u2 == -g.u3);
        CHECK(std::abs(g.u1) == doctest::Approx(2 * f * std::abs(std::cos(phi))));
        CHECK(std::abs(g.u2) == doctest::Approx(2 * f * std::abs(std::sin(phi))));
    }
}

TEST_CASE("displacements cancel the linear field terms branch by branch") {
    // branch couplings to (a + a^dag) and i(a - a^dag) derived from the model:
    // qubit channels see +-2f cos(phi) and +-2f sin(phi); the displaced frame
    // shifts a -> a + u, so the linear term vanishes iff u matches the sign
    // convention of displacement_params.
    const double f = 0.7, phi = 0.9;
    const Displacements d = displacement_params(f, phi);
    const double c = 2 * f * std::cos(phi), s = 2 * f * std::sin(phi);
    // branch 1: H = a^dag a + c (a + a^dag); linear coefficient after D(u): u + c
    CHECK(d.u1.real() + c == doctest::Approx(0.0));
    // branch 4: coupling -c
    CHECK(d.u4.real() - c == doctest::Approx(0.0));
    // branch 2: H = a^dag a + i s (a - a^dag); a^dag coefficient after D(u): u - i s
    CHECK((d.u2 - cplx(0, s)) == cplx(0.0, 0.0));
    CHECK((d.u3 + cplx(0, s)) == cplx(0.0, 0.0));
}

TEST_CASE("coherent overlap closed form") {
    CHECK(std::abs(coherent_overlap(cplx(0.3, -0.7), cplx(0.3, -0.7)) - 1.0) < 1e-15);
    const cplx u(0.8, 0.45);
    CHECK(std::abs(coherent_overlap(cplx(0, 0), u) - std::exp(-0.5 * std::norm(u))) < 1e-15);

    std::mt19937 rng(314159);
    std::uniform_real_distribution<double> dist(-1.2, 1.2);
    for (int i = 0; i < 25; ++i) {
        const cplx v(dist(rng), dist(rng)), w(dist(rng), dist(rng));
        const cplx direct = coherent_overlap(v, w);
        const cplx expansion = oracles::overlap_by_fock_expansion(v, w);
        CHECK(std::abs(direct - expansion) < 1e-10);
        CHECK(std::abs(std::abs(direct) - std::exp(-0.5 * std::norm(w - v))) < 1e-14);
        // conjugate symmetry, and the symplectic phase is exactly the
        // exponent of the displayed formula
        const cplx other = coherent_overlap(w, v);
        CHECK(std::abs(direct - std::conj(other)) < 1e-12);
        const cplx dephased = direct * std::exp(-0.5 * (w * std::conj(v) - v * std::conj(w)));
        CHECK(std::abs(dephased.imag()) < 1e-14);
        CHECK(dephased.real() > 0.0);
        CHECK(std::abs(direct) <= 1.0 + 1e-15);
    }
}

TEST_CASE("laguerre recurrence against explicit low orders") {
    for (double x : {0.0, 0.4, 1.7, 3.2}) {
        CHECK(laguerre(0, x) == 1.0);
        CHECK(laguerre(1, x) == doctest::Approx(1.0 - x).epsilon(1e-14));
        CHECK(laguerre(2, x) == doctest::Approx(1.0 - 2 * x + 0.5 * x * x).epsilon(1e-13));
        CHECK(laguerre(3, x) ==
              doctest::Approx(1.0 - 3 * x + 1.5 * x * x - x * x * x / 6.0).epsilon(1e-13));
    }
}

TEST_CASE("displaced number-state overlaps match the operator oracle") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int n : {0, 1, 2, 3}) {
        for (int i = 0; i < 6; ++i) {
            const cplx v(dist(rng), dist(rng)), u(dist(rng), dist(rng));
            const cplx closed = displaced_number_overlap(n, v, u);
            const cplx matrix = oracles::displaced_number_overlap_by_matrix(n, v, u);
            CHECK(std::abs(closed - matrix) < 1e-9);
        }
    }
    const cplx v(0.3, -0.2), u(-0.6, 0.1);
    CHECK(std::abs(displaced_number_overlap(0, v, u) - coherent_overlap(v, u)) < 1e-15);
}

TEST_CASE("analytic matrix limits") {
    const AnalyticManifold diag = analytic_matrix(0.6, 0.0, 0.8);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a != b) CHECK(std::abs(diag.matrix(a, b)) == 0.0);
    const double c2 = std::pow(std::cos(0.8), 2), s2 = std::pow(std::sin(0.8), 2);
    std::vector<double> expect{-4 * 0.36 * c2, -4 * 0.36 * s2, -4 * 0.36 * s2, -4 * 0.36 * c2};
    std::sort(expect.begin(), expect.end());
    for (int a = 0; a < 4; ++a)
        CHECK(diag.energies[a] == doctest::Approx(expect[a]).epsilon(1e-12));

    const AnalyticManifold free = analytic_matrix(0.0, 1.0, 0.3);
    CHECK(free.energies[0] == doctest::Approx(-1.0));
    CHECK(free.energies[1] == doctest::Approx(0.0));
    CHECK(free.energies[2] == doctest::Approx(0.0));
    CHECK(free.energies[3] == doctest::Approx(1.0));
}

TEST_CASE("usc lowest analytic energy at phi = 0") {
    const AnalyticManifold man = analytic_matrix(0.8, 1.0, 0.0);
    const double f2 = 0.64;
    const double expect = -2 * f2 - std::sqrt(4 * f2 * f2 + std::exp(-4 * f2));
    CHECK(std::abs(man.energies[0] - expect) < 1e-10);
    CHECK(expect == doctest::Approx(-2.590).epsilon(2e-4));
}

TEST_CASE("closed forms evaluate as printed") {
    const ClosedFormEnergies free = closed_form_energies(0.0, 0.7, 1.1);
    CHECK(free.e1 == doctest::Approx(-0.7));
    CHECK(free.e2 == doctest::Approx(0.0));
    CHECK(free.e3 == doctest::Approx(0.0));
    CHECK(free.e4 == doctest::Approx(0.7));

    const auto sorted = closed_form_energies(0.6, 0.0, 0.0).sorted();
    CHECK(sorted[0] == doctest::Approx(-4 * 0.36));
    CHECK(sorted[1] == doctest::Approx(-4 * 0.36));
    CHECK(sorted[2] == doctest::Approx(0.0));
    CHECK(sorted[3] == doctest::Approx(0.0));

    const ClosedFormEnergies usc = closed_form_energies(0.8, 1.0, pi / 4);
    CHECK(usc.e1 == doctest::Approx(-1.28 - std::exp(-1.28)).epsilon(1e-12));
    CHECK(usc.e1 == doctest::Approx(-1.558).epsilon(1e-4));
}

TEST_CASE("closed forms coincide with the 4x4 eigenvalues") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uf(0.0, 1.5), ud(0.0, 2.0), up(0.0, 2 * pi);
    for (int i = 0; i < 30; ++i) {
        const double f = uf(rng), delta = ud(rng), phi = up(rng);
        const auto sorted = closed_form_energies(f, delta, phi).sorted();
        const AnalyticManifold man = analytic_matrix(f, delta, phi);
        for (int a = 0; a < 4; ++a) CHECK(std::abs(man.energies[a] - sorted[a]) < 1e-10);
    }
}

TEST_CASE("closed-form ordering and quarter-period swap") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> uf(0.0, 2.0), ud(0.0, 2.0), up(0.0, 2 * pi);
    for (int i = 0; i < 40; ++i) {
        const double f = uf(rng), delta = ud(rng), phi = up(rng);
        const ClosedFormEnergies e = closed_form_energies(f, delta, phi);
        CHECK(e.e1 <= std::min(e.e2, e.e3) + 1e-14);
        CHECK(std::max(e.e2, e.e3) <= e.e4 + 1e-14);

        const ClosedFormEnergies shifted = closed_form_energies(f, delta, phi + pi / 2);
        CHECK(shifted.e2 == doctest::Approx(e.e3).epsilon(1e-12));
        CHECK(shifted.e3 == doctest::Approx(e.e2).epsilon(1e-12));
        const auto a = e.sorted(), b = shifted.sorted();
        for (int q = 0; q < 4; ++q) CHECK(std::abs(a[q] - b[q]) < 1e-10);
    }
}

TEST_CASE("strong-coupling asymptote of the analytic ground energy") {
    const double f = 3.0, f2 = 9.0;
    for (double phi : {0.0, 0.4, pi / 4, 1.2}) {
        const double e1 = closed_form_energies(f, 1.0, phi).e1;
        const double asym = -2 * f2 * (1.0 + std::abs(std::cos(2 * phi)));
        CHECK(std::abs(e1 - asym) < 1e-6);
    }
}

TEST_CASE("excited manifolds keep the structure with laguerre-weighted couplings") {
    const AnalyticManifold man = analytic_matrix(0.5, 1.0, 0.7, 2);
    CHECK((man.matrix - man.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    for (int a = 0; a < 3; ++a) CHECK(man.energies[a] <= man.energies[a + 1] + 1e-14);
    // delta = 0: diagonal n + branch wells
    const AnalyticManifold d0 = analytic_matrix(0.5, 0.0, 0.7, 2);
    const double c2 = std::pow(std::cos(0.7), 2), s2 = std::pow(std::sin(0.7), 2);
    std::vector<double> expect{2 - c2, 2 - s2, 2 - s2, 2 - c2};
    std::sort(expect.begin(), expect.end());
    for (int a = 0; a < 4; ++a) CHECK(d0.energies[a] == doctest::Approx(expect[a]));
    // expected coupling magnitude (delta/2) e^{-2f^2} L_n(4 f^2)
    const double g = 0.5 * std::exp(-0.5) * laguerre(2, 1.0);
    CHECK(std::abs(man.matrix(0, 1)) == doctest::Approx(std::abs(g)).epsilon(1e-12));
}

TEST_CASE("deviation report at the exact limits") {
    std::vector<double> grid;
    for (int j = 0; j < 9; ++j) grid.push_back(j * pi / 8);

    const DeviationReport free = compare_analytic_numeric(0.0, 1.0, grid);
    CHECK(free.max_abs_dev < 1e-9);

    const DeviationReport solvable = compare_analytic_numeric(0.5, 0.0, grid, 1e-10);
    CHECK(solvable.max_abs_dev < 1e-7);
}
