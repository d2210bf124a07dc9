#include "qrm2/model.hpp"

#include <cmath>
#include <numbers>

namespace qrm2 {

double reduce_angle(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    if (r == two_pi) r = 0.0;  // fmod can round up for tiny negatives
    return r;
}

ModelParams::ModelParams(double f_, double delta_, double phi_, int n_max_, double omega_)
    : f(f_), delta(delta_), phi(0.0), n_max(n_max_), omega(omega_) {
    if (!std::isfinite(phi_)) throw std::invalid_argument("ModelParams: phi must be finite");
    phi = reduce_angle(phi_);
    validate();
}

void ModelParams::validate() const {
    if (!std::isfinite(f) || f < 0.0)
        throw std::invalid_argument("ModelParams: f must be finite and >= 0");
    if (!std::isfinite(delta) || delta < 0.0)
        throw std::invalid_argument("ModelParams: delta must be finite and >= 0");
    if (!std::isfinite(phi))
        throw std::invalid_argument("ModelParams: phi must be finite");
    if (n_max < 1)
        throw std::invalid_argument("ModelParams: n_max must be >= 1");
    if (!std::isfinite(omega) || omega <= 0.0)
        throw std::invalid_argument("ModelParams: omega must be finite and > 0");
}

ModelParams ModelParams::with_phi(double new_phi) const {
    ModelParams p = *this;
    if (!std::isfinite(new_phi)) throw std::invalid_argument("ModelParams: phi must be finite");
    p.phi = reduce_angle(new_phi);
    return p;
}

ModelParams ModelParams::with_f(double new_f) const {
    ModelParams p = *this;
    p.f = new_f;
    p.validate();
    return p;
}

ModelParams ModelParams::with_n_max(int new_n_max) const {
    ModelParams p = *this;
    p.n_max = new_n_max;
    p.validate();
    return p;
}

HermitianMatrix build_hamiltonian(const ModelParams& params) {
    params.validate();
    const int d = params.dim();
    HermitianMatrix h = HermitianMatrix::Zero(d, d);

    // channel splittings of delta/2 (sigma3 (x) I2 + I2 (x) sigma3)
    const double split[4] = {params.delta, 0.0, 0.0, -params.delta};
    for (int k = 0; k <= params.n_max; ++k)
        for (int q = 0; q < 4; ++q)
            h(4 * k + q, 4 * k + q) = cplx(double(k) + split[q], 0.0);

    const cplx phase = std::polar(1.0, reduce_angle(params.phi));  // exp(+i phi)
    // sigma1 on qubit 1 exchanges channels (1,3) and (2,4); on qubit 2, (1,2) and (3,4)
    static constexpr int kQubit1Pairs[2][2] = {{0, 2}, {1, 3}};
    static constexpr int kQubit2Pairs[2][2] = {{0, 1}, {2, 3}};

    for (int n = 0; n < params.n_max; ++n) {
        const int k = n + 1;
        const cplx amp1 = params.f * std::sqrt(double(k)) * phase;        // qubit 1, block (n, n+1)
        const cplx amp2 = params.f * std::sqrt(double(k)) * std::conj(phase);  // qubit 2
        for (const auto& pr : kQubit1Pairs) {
            h(4 * n + pr[0], 4 * k + pr[1]) += amp1;
            h(4 * n + pr[1], 4 * k + pr[0]) += amp1;
        }
        for (const auto& pr : kQubit2Pairs) {
            h(4 * n + pr[0], 4 * k + pr[1]) += amp2;
            h(4 * n + pr[1], 4 * k + pr[0]) += amp2;
        }
        // lower block is the exact conjugate transpose
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                h(4 * k + b, 4 * n + a) = std::conj(h(4 * n + a, 4 * k + b));
    }
    return h;
}

ModelParams symmetry_partner(const ModelParams& params) {
    params.validate();
    return params.with_phi(params.phi + std::numbers::pi / 2.0);
}

}  // namespace qrm2
