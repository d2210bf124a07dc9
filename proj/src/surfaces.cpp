#include "qrm2/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrm2 {

GridPointError::GridPointError(double f_, double phi_, const std::string& what_)
    : std::runtime_error("at grid point f=" + std::to_string(f_) + ", phi=" +
                         std::to_string(phi_) + ": " + what_),
      f(f_),
      phi(phi_) {}

void Surface::check_shape() const {
    if (f_grid.empty() || phi_grid.empty())
        throw std::invalid_argument("Surface: empty grid");
    if (values.rows() != static_cast<Eigen::Index>(f_grid.size()) ||
        values.cols() != static_cast<Eigen::Index>(phi_grid.size()))
        throw std::invalid_argument("Surface: values shape does not match grids");
    if (!values.allFinite())
        throw std::invalid_argument("Surface: non-finite values");
}

namespace {

// Eigenvalues of the converged Hamiltonian at one grid point, rethrown with
// the point's coordinates on failure.
Eigen::VectorXd converged_values_at(const ModelParams& params, double tol, int hard_cap) {
    try {
        return converged_ground(params, tol, 8, 10, hard_cap).eig.values;
    } catch (const std::exception& err) {
        throw GridPointError(params.f, params.phi, err.what());
    }
}

}  // namespace

std::vector<Surface> term_values(const ModelParams& params, int nu_max,
                                 std::span<const double> phi_grid, double tol, int hard_cap) {
    params.validate();
    if (phi_grid.empty()) throw std::invalid_argument("term_values: empty phi grid");
    if (nu_max < 0 || nu_max >= 8)
        throw std::invalid_argument("term_values: nu_max out of tracked range [0, 8)");

    Eigen::MatrixXd levels(nu_max + 1, phi_grid.size());
    for (std::size_t j = 0; j < phi_grid.size(); ++j) {
        const Eigen::VectorXd vals =
            converged_values_at(params.with_phi(phi_grid[j]), tol, hard_cap);
        levels.col(j) = vals.head(nu_max + 1);
    }

    std::vector<Surface> out;
    out.reserve(nu_max + 1);
    for (int nu = 0; nu <= nu_max; ++nu) {
        Surface s;
        s.f_grid = {params.f};
        s.phi_grid.assign(phi_grid.begin(), phi_grid.end());
        s.values = levels.row(nu);
        s.label = "term";
        s.nu = nu;
        s.check_shape();
        out.push_back(std::move(s));
    }
    return out;
}

Surface term_surface(const ModelParams& base, int nu, std::span<const double> f_grid,
                     std::span<const double> phi_grid, double tol, int hard_cap) {
    base.validate();
    if (f_grid.empty() || phi_grid.empty())
        throw std::invalid_argument("term_surface: empty grid");
    if (nu < 0 || nu >= 8) throw std::invalid_argument("term_surface: nu out of tracked range");

    Surface s;
    s.f_grid.assign(f_grid.begin(), f_grid.end());
    s.phi_grid.assign(phi_grid.begin(), phi_grid.end());
    s.values.resize(f_grid.size(), phi_grid.size());
    s.label = "term";
    s.nu = nu;
    for (std::size_t i = 0; i < f_grid.size(); ++i) {
        const ModelParams pf = base.with_f(f_grid[i]);
        for (std::size_t j = 0; j < phi_grid.size(); ++j)
            s.values(i, j) = converged_values_at(pf.with_phi(phi_grid[j]), tol, hard_cap)[nu];
    }
    s.check_shape();
    return s;
}

Surface transition_frequency(const ModelParams& params, int nu1, int nu2,
                             std::span<const double> phi_grid, double tol, int hard_cap) {
    if (nu1 < 0 || nu2 < nu1 || nu2 >= 8)
        throw std::invalid_argument("transition_frequency: need 0 <= nu1 <= nu2 < 8");
    const std::vector<Surface> terms = term_values(params, nu2, phi_grid, tol, hard_cap);
    Surface s = terms[nu2];
    s.values = params.omega * (terms[nu2].values - terms[nu1].values);
    s.label = "transition";
    s.nu = nu2;
    return s;
}

Surface transition_surface(const ModelParams& base, int nu1, int nu2,
                           std::span<const double> f_grid, std::span<const double> phi_grid,
                           double tol) {
    if (nu1 < 0 || nu2 < nu1 || nu2 >= 8)
        throw std::invalid_argument("transition_surface: need 0 <= nu1 <= nu2 < 8");
    Surface lo = term_surface(base, nu1, f_grid, phi_grid, tol);
    Surface hi = term_surface(base, nu2, f_grid, phi_grid, tol);
    hi.values = base.omega * (hi.values - lo.values);
    hi.label = "transition";
    return hi;
}

std::vector<double> term_on_period_grid(const ModelParams& params, int nu, int n_grid,
                                        double tol, int hard_cap) {
    params.validate();
    if (nu < 0 || nu >= 8) throw std::invalid_argument("term_on_period_grid: nu out of range");
    if (n_grid < 2) throw std::invalid_argument("term_on_period_grid: grid too small");

    const double period = std::numbers::pi / 2.0;
    const double h = period / n_grid;

    // Fix the cutoff once: converge at phi = 0 and at an interior point, keep
    // the larger cutoff plus one step of margin.
    const int n_a = converged_ground(params.with_phi(0.0), tol, 8, 10, hard_cap).n_max_used;
    const int n_b =
        converged_ground(params.with_phi(period / 3.0), tol, 8, 10, hard_cap).n_max_used;
    const int n_use = std::max(n_a, n_b) + 10;
    const ModelParams fixed = params.with_n_max(n_use);

    std::vector<double> u(n_grid);
    for (int j = 0; j <= n_grid / 2; ++j) {
        const double phi = j * h;
        double val;
        try {
            val = eigendecompose(build_hamiltonian(fixed.with_phi(phi))).values[nu];
        } catch (const std::exception& err) {
            throw GridPointError(params.f, phi, err.what());
        }
        u[j] = val;
        const int mirror = (n_grid - j) % n_grid;  // u(phi) = u(pi/2 - phi)
        u[mirror] = val;
    }
    return u;
}

RelativeMotionResult solve_relative_motion_on(std::span<const double> potential, double mu,
                                              int n_levels) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("solve_relative_motion: mu must be positive and finite");
    const int n = static_cast<int>(potential.size());
    if (n < 64) throw std::invalid_argument("solve_relative_motion: need at least 64 grid points");
    if (n_levels < 1 || n_levels > n)
        throw std::invalid_argument("solve_relative_motion: bad level count");

    // Count oscillations of the sampled potential (local minima on the ring);
    // require at least 8 points per oscillation.
    int minima = 0;
    for (int j = 0; j < n; ++j) {
        const double prev = potential[(j + n - 1) % n];
        const double next = potential[(j + 1) % n];
        if (potential[j] < prev && potential[j] <= next) ++minima;
    }
    if (minima > 0 && n < 8 * minima)
        throw std::invalid_argument("solve_relative_motion: fewer than 8 points per potential oscillation");

    const double period = std::numbers::pi / 2.0;
    const double h = period / n;
    const double kin = 1.0 / (mu * h * h);

    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        op(j, j) = 2.0 * kin + potential[j];
        op(j, (j + 1) % n) = -kin;
        op(j, (j + n - 1) % n) = -kin;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
    if (solver.info() != Eigen::Success)
        throw EigenSolveError(n, std::nan(""), "solve_relative_motion: eigensolve failed");

    RelativeMotionResult res;
    res.mu = mu;
    res.levels.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n_levels);
    res.grid.resize(n);
    for (int j = 0; j < n; ++j) res.grid[j] = j * h;
    res.potential.assign(potential.begin(), potential.end());
    // l2-orthonormal columns -> orthonormal under the grid quadrature sum * h
    res.wavefunctions = solver.eigenvectors().leftCols(n_levels) / std::sqrt(h);
    return res;
}

RelativeMotionResult solve_relative_motion(const ModelParams& params, int nu, double mu,
                                           int n_grid, int n_levels, double tol) {
    const std::vector<double> u = term_on_period_grid(params, nu, n_grid, tol);
    return solve_relative_motion_on(u, mu, n_levels);
}

}  // namespace qrm2
