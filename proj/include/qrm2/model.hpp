// model.hpp — Dimensionless two-qubit + single-mode model: parameters, basis
// indexing convention, and assembly of the truncated Hamiltonian matrix.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace qrm2 {

using cplx = std::complex<double>;

// Dense complex Hermitian operator over the truncated Fock (x) spin basis.
// Hermitian by construction; nonzero blocks couple Fock levels k, k' only
// for |k - k'| <= 1.
using HermitianMatrix = Eigen::MatrixXcd;

double reduce_angle(double phi);  // into [0, 2*pi)

// Control knobs of the dimensionless problem. All internal energies are in
// units of the photon frequency; `omega` only rescales exported quantities
// (transition frequencies and similar).
//
// phi is the inter-qubit coordinate in radians, phi = pi * x / lambda. The
// Hamiltonian is 2*pi-periodic in phi, so phi is kept reduced to [0, 2*pi).
// The model is used at all phi including 0, although strictly the two-dipole
// picture assumes a separation large against the emitter size.
struct ModelParams {
    double f = 0.0;      // coupling constant, >= 0
    double delta = 1.0;  // detuning ratio (transition energy / photon energy), >= 0
    double phi = 0.0;    // reduced inter-qubit coordinate, radians in [0, 2*pi)
    int n_max = 20;      // Fock cutoff, >= 1
    double omega = 1.0;  // photon energy scale, > 0

    ModelParams() = default;
    ModelParams(double f_, double delta_, double phi_, int n_max_, double omega_ = 1.0);

    void validate() const;           // throws std::invalid_argument
    int dim() const { return 4 * (n_max + 1); }

    ModelParams with_phi(double new_phi) const;
    ModelParams with_f(double new_f) const;
    ModelParams with_n_max(int new_n_max) const;
};

// Spin channels, ordered: chi_1 = up,up; chi_2 = up,down; chi_3 = down,up;
// chi_4 = down,down. The flattened row index of |k> chi_q is 4*k + (q - 1).
struct BasisIndex {
    int k = 0;  // Fock occupation, 0..n_max
    int q = 1;  // spin channel, 1..4
};

constexpr int flatten(BasisIndex b) { return 4 * b.k + (b.q - 1); }
constexpr BasisIndex unflatten(int idx) { return BasisIndex{idx / 4, idx % 4 + 1}; }

// Assemble the truncated Hamiltonian, dimension 4*(n_max+1). Diagonal Fock
// block k carries k plus the channel splittings (+delta, 0, 0, -delta);
// adjacent blocks carry f*sqrt(k) with phases exp(+-i phi), conjugate between
// the two qubits' flip channels.
HermitianMatrix build_hamiltonian(const ModelParams& params);

// phi -> phi + pi/2 (mod 2*pi). The spectrum is invariant under this shift,
// which is what makes the potential oscillate with a quarter of the
// Hamiltonian's period.
ModelParams symmetry_partner(const ModelParams& params);

}  // namespace qrm2
