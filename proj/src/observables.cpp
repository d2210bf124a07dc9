#include "qrm2/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace qrm2 {

StateExpansion expansion_of(const EigenSystem& eig, int nu) {
    if (nu < 0 || nu >= eig.dim())
        throw std::invalid_argument("expansion_of: state index out of range");
    const int levels = eig.fock_levels();
    StateExpansion ex;
    ex.nu = nu;
    ex.coeff.resize(levels, 4);
    for (int n = 0; n < levels; ++n)
        for (int q = 0; q < 4; ++q) ex.coeff(n, q) = eig.vectors(4 * n + q, nu);
    return ex;
}

namespace {

void require_normalized(const StateExpansion& ex, const char* who) {
    if (std::abs(ex.norm2() - 1.0) > 1e-10)
        throw std::invalid_argument(std::string(who) + ": expansion is not normalized");
}

double binary_entropy(double p) {
    double e = 0.0;
    for (double x : {p, 1.0 - p})
        if (x > 0.0) e -= x * std::log2(x);
    return std::clamp(e, 0.0, 1.0);
}

}  // namespace

double photon_number(const StateExpansion& expansion) {
    require_normalized(expansion, "photon_number");
    double total = 0.0;
    for (Eigen::Index n = 0; n < expansion.coeff.rows(); ++n)
        total += n * expansion.coeff.row(n).squaredNorm();
    return total;
}

double entanglement(const StateExpansion& expansion) {
    require_normalized(expansion, "entanglement");
    const double p_up = expansion.coeff.leftCols<2>().squaredNorm();
    return binary_entropy(std::clamp(p_up, 0.0, 1.0));
}

ObservablePoint observable_at(const ModelParams& params, int nu, ObservableKind kind,
                              const ObservableOptions& opts) {
    const ConvergedResult conv = converged_ground(params, opts.conv_tol, 8, 10, opts.hard_cap);
    const EigenSystem& eig = conv.eig;
    if (nu >= eig.dim()) throw std::invalid_argument("observable_surface: nu out of range");

    // numerically degenerate group around nu
    int lo = nu, hi = nu;
    while (lo > 0 && eig.values[nu] - eig.values[lo - 1] < opts.gap_tol) --lo;
    while (hi + 1 < eig.dim() && eig.values[hi + 1] - eig.values[nu] < opts.gap_tol) ++hi;

    ObservablePoint out;
    out.degenerate = hi > lo;

    if (!opts.aggregate_degenerate || !out.degenerate) {
        const StateExpansion ex = expansion_of(eig, nu);
        out.value = (kind == ObservableKind::photon) ? photon_number(ex) : entanglement(ex);
        return out;
    }

    // trace over the degenerate subspace: average photon number, or entropy
    // of the averaged marginal
    const int size = hi - lo + 1;
    if (kind == ObservableKind::photon) {
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += photon_number(expansion_of(eig, j));
        out.value = sum / size;
    } else {
        double p_up = 0.0;
        for (int j = lo; j <= hi; ++j)
            p_up += expansion_of(eig, j).coeff.leftCols<2>().squaredNorm();
        p_up /= size;
        double e = 0.0;
        for (double x : {p_up, 1.0 - p_up})
            if (x > 0.0) e -= x * std::log2(x);
        out.value = std::clamp(e, 0.0, 1.0);
    }
    return out;
}

Surface observable_surface(const ModelParams& base, std::span<const double> f_grid,
                           std::span<const double> phi_grid, int nu, ObservableKind kind,
                           ObservableOptions opts) {
    base.validate();
    if (f_grid.empty() || phi_grid.empty())
        throw std::invalid_argument("observable_surface: empty grid");
    if (nu < 0) throw std::invalid_argument("observable_surface: nu must be >= 0");

    Surface s;
    s.f_grid.assign(f_grid.begin(), f_grid.end());
    s.phi_grid.assign(phi_grid.begin(), phi_grid.end());
    s.values.resize(f_grid.size(), phi_grid.size());
    s.flags.setZero(f_grid.size(), phi_grid.size());
    s.label = (kind == ObservableKind::photon) ? "photon" : "entanglement";
    s.nu = nu;

    for (std::size_t i = 0; i < f_grid.size(); ++i) {
        const ModelParams pf = base.with_f(f_grid[i]);
        for (std::size_t j = 0; j < phi_grid.size(); ++j) {
            try {
                const ObservablePoint pv = observable_at(pf.with_phi(phi_grid[j]), nu, kind, opts);
                s.values(i, j) = pv.value;
                s.flags(i, j) = pv.degenerate ? 1 : 0;
            } catch (const GridPointError&) {
                throw;
            } catch (const std::exception& err) {
                throw GridPointError(f_grid[i], phi_grid[j], err.what());
            }
        }
    }
    s.check_shape();
    return s;
}

}  // namespace qrm2
