// linalg.hpp — Complex Hermitian eigendecomposition and Fock-cutoff
// convergence control.

#pragma once

#include "qrm2/model.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qrm2 {

// Full eigensystem of a Hermitian matrix: values ascending, vectors.col(j)
// paired with values[j], columns orthonormal.
struct EigenSystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;

    int dim() const { return static_cast<int>(values.size()); }
    int fock_levels() const { return dim() / 4; }  // n_max + 1 for model matrices
};

struct EigenSolveError : std::runtime_error {
    int dim;
    double residual;
    EigenSolveError(int dim_, double residual_, const std::string& what_);
};

struct CutoffError : std::runtime_error {
    int n_max_last;
    double last_delta;
    CutoffError(int n_max_last_, double last_delta_, const std::string& what_);
};

// Full spectrum of a Hermitian matrix. The input must be Hermitian entrywise;
// the output is checked against
//   ||H v_j - values[j] v_j||_2 <= tol_resid * ||H||_F   for every j,
//   ||V^dag V - I||_max        <= tol_orth.
// Exact ties in the values are ordered by the channel index of the first
// significant vector component, so reports are reproducible across runs.
EigenSystem eigendecompose(const HermitianMatrix& h,
                           double tol_resid = 1e-10, double tol_orth = 1e-10);

struct ConvergedResult {
    EigenSystem eig;
    int n_max_used = 0;
};

// Raise the Fock cutoff from params.n_max in steps of `step` until each of
// the `tracked` lowest eigenvalues moves by less than `tol` between
// consecutive cutoffs. By the variational principle the tracked values are
// non-increasing along the loop. Throws CutoffError past `hard_cap`.
ConvergedResult converged_ground(const ModelParams& params, double tol,
                                 int tracked = 8, int step = 10, int hard_cap = 400);

}  // namespace qrm2
