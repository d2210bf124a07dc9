// surfaces.hpp — Interaction-potential terms u_nu(phi), transition
// frequencies, observable surfaces over (f, phi), and the relative-motion
// spectrum on a chosen term.

#pragma once

#include "qrm2/linalg.hpp"
#include "qrm2/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qrm2 {

// Scalar observable sampled on an (f, phi) grid. values(i, j) belongs to
// (f_grid[i], phi_grid[j]). flags, when non-empty, marks grid points with a
// near-degenerate target state (gap below the degeneracy tolerance).
struct Surface {
    std::vector<double> f_grid;
    std::vector<double> phi_grid;
    Eigen::MatrixXd values;
    std::string label;
    int nu = 0;
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> flags;

    void check_shape() const;  // grids non-empty, dims match, values finite
};

// Thrown when a per-point computation fails; carries the grid coordinates.
struct GridPointError : std::runtime_error {
    double f;
    double phi;
    GridPointError(double f_, double phi_, const std::string& what_);
};

// Terms u_0..u_nu_max along a phi grid at fixed params.f, each as a
// single-f-row Surface. Eigenvalues come from the converged cutoff.
std::vector<Surface> term_values(const ModelParams& params, int nu_max,
                                 std::span<const double> phi_grid, double tol = 1e-9,
                                 int hard_cap = 400);

// Term nu over a full (f, phi) grid.
Surface term_surface(const ModelParams& base, int nu, std::span<const double> f_grid,
                     std::span<const double> phi_grid, double tol = 1e-9, int hard_cap = 400);

// omega * (u_nu2 - u_nu1) along a phi grid; requires nu1 <= nu2 (equal
// indices give the zero surface).
Surface transition_frequency(const ModelParams& params, int nu1, int nu2,
                             std::span<const double> phi_grid, double tol = 1e-9,
                             int hard_cap = 400);

Surface transition_surface(const ModelParams& base, int nu1, int nu2,
                           std::span<const double> f_grid, std::span<const double> phi_grid,
                           double tol = 1e-9);

// Term nu on a uniform grid over one pi/2 period, exploiting the reflection
// u(phi) = u(pi/2 - phi) and a cutoff converged once per call.
std::vector<double> term_on_period_grid(const ModelParams& params, int nu, int n_grid,
                                        double tol = 1e-9, int hard_cap = 400);

// Lowest levels of [-(1/mu) d^2/dphi^2 + u_nu(phi)] with periodic boundary
// conditions on phi in [0, pi/2), discretized by second-order central
// differences on n_grid points.
struct RelativeMotionResult {
    double mu = 0.0;
    std::vector<double> levels;     // ascending, units of omega
    std::vector<double> grid;       // phi samples
    std::vector<double> potential;  // u_nu on the grid
    Eigen::MatrixXd wavefunctions;  // (n_grid x n_levels), orthonormal under sum * h
};

RelativeMotionResult solve_relative_motion(const ModelParams& params, int nu, double mu,
                                           int n_grid = 512, int n_levels = 8,
                                           double tol = 1e-9);

// Same solver on an externally supplied periodic potential (period pi/2).
RelativeMotionResult solve_relative_motion_on(std::span<const double> potential, double mu,
                                              int n_levels = 8);

}  // namespace qrm2
