#include "qrm2/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qrm2 {

EigenSolveError::EigenSolveError(int dim_, double residual_, const std::string& what_)
    : std::runtime_error(what_), dim(dim_), residual(residual_) {}

CutoffError::CutoffError(int n_max_last_, double last_delta_, const std::string& what_)
    : std::runtime_error(what_), n_max_last(n_max_last_), last_delta(last_delta_) {}

namespace {

// Reorder members of numerically tied eigenvalue groups by the index of the
// first vector component above threshold. Purely cosmetic: keeps degenerate
// outputs stable for reporting.
void order_ties(EigenSystem& sys) {
    const int d = sys.dim();
    const double scale = std::max(1.0, sys.values.cwiseAbs().maxCoeff());
    const double tie_tol = 1e-12 * scale;

    auto first_significant = [&](int j) {
        for (int i = 0; i < d; ++i)
            if (std::abs(sys.vectors(i, j)) > 1e-8) return i;
        return d;
    };

    int lo = 0;
    while (lo < d) {
        int hi = lo + 1;
        while (hi < d && sys.values[hi] - sys.values[lo] <= tie_tol) ++hi;
        if (hi - lo > 1) {
            std::vector<int> idx(hi - lo);
            std::iota(idx.begin(), idx.end(), lo);
            std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
                return first_significant(a) < first_significant(b);
            });
            Eigen::VectorXd vals(hi - lo);
            Eigen::MatrixXcd vecs(d, hi - lo);
            for (int m = 0; m < hi - lo; ++m) {
                vals[m] = sys.values[idx[m]];
                vecs.col(m) = sys.vectors.col(idx[m]);
            }
            sys.values.segment(lo, hi - lo) = vals;
            sys.vectors.middleCols(lo, hi - lo) = vecs;
        }
        lo = hi;
    }
}

}  // namespace

EigenSystem eigendecompose(const HermitianMatrix& h, double tol_resid, double tol_orth) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw std::invalid_argument("eigendecompose: matrix must be square and non-empty");
    const int d = static_cast<int>(h.rows());

    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (asym > 1e-12 * scale)
        throw std::invalid_argument("eigendecompose: input is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw EigenSolveError(d, std::nan(""),
                              "eigendecompose: iteration failed to converge, dim " + std::to_string(d));

    EigenSystem sys{solver.eigenvalues(), solver.eigenvectors()};
    order_ties(sys);

    const double h_norm = h.norm();  // Frobenius
    const Eigen::MatrixXcd resid =
        h * sys.vectors - sys.vectors * sys.values.cast<cplx>().asDiagonal();
    double max_resid = 0.0;
    for (int j = 0; j < d; ++j) max_resid = std::max(max_resid, resid.col(j).norm());
    if (h_norm > 0.0 && max_resid > tol_resid * h_norm)
        throw EigenSolveError(d, max_resid,
                              "eigendecompose: residual " + std::to_string(max_resid) +
                                  " exceeds tolerance at dim " + std::to_string(d));

    const double orth = (sys.vectors.adjoint() * sys.vectors -
                         Eigen::MatrixXcd::Identity(d, d))
                            .cwiseAbs()
                            .maxCoeff();
    if (orth > tol_orth)
        throw EigenSolveError(d, orth, "eigendecompose: eigenvector columns not orthonormal");

    return sys;
}

ConvergedResult converged_ground(const ModelParams& params, double tol,
                                 int tracked, int step, int hard_cap) {
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("converged_ground: tol must be > 0");
    if (tracked < 1) throw std::invalid_argument("converged_ground: tracked must be >= 1");
    if (step < 1) throw std::invalid_argument("converged_ground: step must be >= 1");

    int n = params.n_max;
    EigenSystem prev = eigendecompose(build_hamiltonian(params));
    double last_delta = std::numeric_limits<double>::infinity();

    while (n + step <= hard_cap) {
        n += step;
        EigenSystem cur = eigendecompose(build_hamiltonian(params.with_n_max(n)));
        const int m = std::min(tracked, std::min(prev.dim(), cur.dim()));
        last_delta = (cur.values.head(m) - prev.values.head(m)).cwiseAbs().maxCoeff();
        if (last_delta < tol) return ConvergedResult{std::move(cur), n};
        prev = std::move(cur);
    }
    throw CutoffError(n, last_delta,
                      "converged_ground: no convergence up to n_max " + std::to_string(n) +
                          ", last change " + std::to_string(last_delta));
}

}  // namespace qrm2
