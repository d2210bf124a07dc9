#include "qrm2/analytic.hpp"

#include "qrm2/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrm2 {

Displacements displacement_params(double f, double phi) {
    if (!(f >= 0.0) || !std::isfinite(f))
        throw std::invalid_argument("displacement_params: f must be finite and >= 0");
    const double c = 2.0 * f * std::cos(phi);
    const double s = 2.0 * f * std::sin(phi);
    return Displacements{cplx(-c, 0.0), cplx(0.0, s), cplx(0.0, -s), cplx(c, 0.0)};
}

cplx coherent_overlap(cplx v, cplx u) {
    const cplx w = u - v;
    return std::exp(-0.5 * std::norm(w)) * std::exp(0.5 * (u * std::conj(v) - v * std::conj(u)));
}

double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: n must be >= 0");
    double prev = 1.0;            // L_0
    if (n == 0) return prev;
    double cur = 1.0 - x;         // L_1
    for (int k = 2; k <= n; ++k) {
        const double next = ((2.0 * k - 1.0 - x) * cur - (k - 1.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx displaced_number_overlap(int n, cplx v, cplx u) {
    return coherent_overlap(v, u) * laguerre(n, std::norm(u - v));
}

namespace {

// Real part of the branch coupling: exp(-|w|^2/2) L_n(|w|^2) with the
// symplectic phase dropped, which is what the printed closed forms
// diagonalize.
double coupling_factor(int n, cplx v, cplx u) {
    const double w2 = std::norm(u - v);
    return std::exp(-0.5 * w2) * laguerre(n, w2);
}

}  // namespace

AnalyticManifold analytic_matrix(double f, double delta, double phi, int n) {
    if (n < 0) throw std::invalid_argument("analytic_matrix: n must be >= 0");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("analytic_matrix: delta must be finite and >= 0");
    const Displacements d = displacement_params(f, phi);
    const double c = std::cos(phi);
    const double s = std::sin(phi);

    const double u1 = d.u1.real();
    const double u2 = d.u2.imag();
    const double u3 = d.u3.imag();
    const double u4 = d.u4.real();

    AnalyticManifold man;
    man.n = n;
    Eigen::Matrix4cd& h = man.matrix;
    h.setZero();
    h(0, 0) = n + u1 * u1 + 4.0 * f * u1 * c;
    h(1, 1) = n + u2 * u2 - 4.0 * f * u2 * s;
    h(2, 2) = n + u3 * u3 + 4.0 * f * u3 * s;
    h(3, 3) = n + u4 * u4 - 4.0 * f * u4 * c;

    const double half_delta = 0.5 * delta;
    h(0, 1) = half_delta * coupling_factor(n, d.u1, d.u2);
    h(0, 2) = half_delta * coupling_factor(n, d.u1, d.u3);
    h(1, 3) = half_delta * coupling_factor(n, d.u2, d.u4);
    h(2, 3) = half_delta * coupling_factor(n, d.u3, d.u4);
    h(1, 0) = std::conj(h(0, 1));
    h(2, 0) = std::conj(h(0, 2));
    h(3, 1) = std::conj(h(1, 3));
    h(3, 2) = std::conj(h(2, 3));

    if (((h - h.adjoint()).cwiseAbs().maxCoeff()) > 1e-14 * std::max(1.0, h.cwiseAbs().maxCoeff()))
        throw std::runtime_error("analytic_matrix: constructed matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("analytic_matrix: 4x4 eigensolve failed");
    man.energies = solver.eigenvalues();
    return man;
}

std::array<double, 4> ClosedFormEnergies::sorted() const {
    std::array<double, 4> v{e1, e2, e3, e4};
    std::sort(v.begin(), v.end());
    return v;
}

ClosedFormEnergies closed_form_energies(double f, double delta, double phi) {
    const double f2 = f * f;
    const double root =
        std::sqrt(4.0 * f2 * f2 * std::pow(std::cos(2.0 * phi), 2) +
                  delta * delta * std::exp(-4.0 * f2));
    const double s2 = std::pow(std::sin(phi), 2);
    const double c2 = std::pow(std::cos(phi), 2);
    return ClosedFormEnergies{-2.0 * f2 - root, -4.0 * f2 * s2, -4.0 * f2 * c2,
                              -2.0 * f2 + root};
}

DeviationReport compare_analytic_numeric(double f, double delta,
                                         std::span<const double> phi_grid, double tol) {
    if (phi_grid.empty())
        throw std::invalid_argument("compare_analytic_numeric: empty phi grid");

    DeviationReport rep;
    rep.phi_grid.assign(phi_grid.begin(), phi_grid.end());
    rep.numeric.resize(phi_grid.size());
    rep.analytic.resize(phi_grid.size());

    const ModelParams base(f, delta, 0.0, 20);
    double dev_sum = 0.0;
    for (std::size_t j = 0; j < phi_grid.size(); ++j) {
        rep.numeric[j] = converged_ground(base.with_phi(phi_grid[j]), tol).eig.values[0];
        rep.analytic[j] = closed_form_energies(f, delta, phi_grid[j]).e1;
        const double dev = std::abs(rep.numeric[j] - rep.analytic[j]);
        rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
        dev_sum += dev;
        if (rep.numeric[j] < rep.numeric[rep.numeric_min_index]) rep.numeric_min_index = int(j);
        if (rep.analytic[j] < rep.analytic[rep.analytic_min_index]) rep.analytic_min_index = int(j);
    }
    rep.mean_abs_dev = dev_sum / static_cast<double>(phi_grid.size());
    return rep;
}

}  // namespace qrm2
