// analytic.hpp — Displaced-coherent-state approximation: displacement
// parameters, coherent-state overlaps, the per-manifold 4x4 matrix, its
// closed-form n=0 energies, and comparison against the numerical spectrum.

#pragma once

#include "qrm2/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace qrm2 {

// Branch displacements, one per spin channel of the sigma1-diagonal basis.
// Signs are fixed so the linear field terms cancel branch by branch:
// u1 = -2 f cos(phi) = -u4 (real), u2 = 2i f sin(phi) = -u3 (imaginary).
struct Displacements {
    cplx u1, u2, u3, u4;
};

Displacements displacement_params(double f, double phi);

// <v|u> = exp(-|u - v|^2 / 2) exp((u v* - v u*) / 2)
cplx coherent_overlap(cplx v, cplx u);

// L_n(x), the Laguerre polynomial, by the three-term recurrence.
double laguerre(int n, double x);

// <n, v | n, u> between equally excited displaced number states:
// the coherent overlap times the Laguerre factor L_n(|u - v|^2).
cplx displaced_number_overlap(int n, cplx v, cplx u);

// 4x4 matrix of the fixed-n displaced-basis ansatz with its four energies.
// Off-diagonal couplings carry delta/2 times the real (phase-free) overlap
// factor; positions (1,4) and (2,3) are zero.
struct AnalyticManifold {
    int n = 0;
    Eigen::Matrix4cd matrix;
    Eigen::Vector4d energies;  // ascending
};

AnalyticManifold analytic_matrix(double f, double delta, double phi, int n = 0);

// The printed closed forms for the n = 0 manifold. e1 <= {e2, e3} <= e4;
// e2 and e3 swap under phi -> phi + pi/2.
struct ClosedFormEnergies {
    double e1, e2, e3, e4;
    std::array<double, 4> sorted() const;
};

ClosedFormEnergies closed_form_energies(double f, double delta, double phi);

// Ground term from the full numerics versus the analytic closed form on a
// phi grid, with deviation statistics and the minima positions.
struct DeviationReport {
    std::vector<double> phi_grid;
    std::vector<double> numeric;
    std::vector<double> analytic;
    double max_abs_dev = 0.0;
    double mean_abs_dev = 0.0;
    int numeric_min_index = 0;
    int analytic_min_index = 0;
};

DeviationReport compare_analytic_numeric(double f, double delta,
                                         std::span<const double> phi_grid, double tol = 1e-9);

}  // namespace qrm2
