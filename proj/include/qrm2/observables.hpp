// observables.hpp — Stationary-state correlation observables: mean photon
// number and the binary-entropy entanglement measure of the first qubit's
// diagonal marginal, over (f, phi) grids.

#pragma once

#include "qrm2/linalg.hpp"
#include "qrm2/surfaces.hpp"

#include <Eigen/Dense>

#include <span>

namespace qrm2 {

// Expansion coefficients C_{n,q} of one stationary state over |n> chi_q.
// Channels q = 1, 2 have the first qubit up; q = 3, 4 down.
struct StateExpansion {
    Eigen::MatrixXcd coeff;  // (n_max + 1) x 4
    int nu = 0;

    double norm2() const { return coeff.squaredNorm(); }
};

StateExpansion expansion_of(const EigenSystem& eig, int nu);

// <a^dag a> = sum_n n |C_{n,q}|^2
double photon_number(const StateExpansion& expansion);

// Shannon entropy (bits) of the first qubit's diagonal marginal
// p_up = sum_n |C_{n,1}|^2 + |C_{n,2}|^2, with 0 log 0 = 0. In [0, 1].
double entanglement(const StateExpansion& expansion);

enum class ObservableKind { photon, entanglement };

struct ObservableOptions {
    double conv_tol = 1e-9;  // eigenvalue convergence per grid point
    double gap_tol = 1e-8;   // degeneracy flagging threshold
    int hard_cap = 400;      // Fock-cutoff cap for the convergence loop
    // Replace the per-state value by the basis-independent average over the
    // numerically degenerate group containing nu.
    bool aggregate_degenerate = false;
};

struct ObservablePoint {
    double value = 0.0;
    bool degenerate = false;  // gap from state nu to a neighbor below gap_tol
};

ObservablePoint observable_at(const ModelParams& params, int nu, ObservableKind kind,
                              const ObservableOptions& opts = {});

// Surface of the chosen observable at state nu over an (f, phi) grid, from
// converged expansions at each point. flags(i, j) = 1 marks points where the
// gap from state nu to its neighbors is below gap_tol (value then depends on
// the solver's in-subspace basis choice unless aggregation is on).
Surface observable_surface(const ModelParams& base, std::span<const double> f_grid,
                           std::span<const double> phi_grid, int nu, ObservableKind kind,
                           ObservableOptions opts = {});

}  // namespace qrm2
