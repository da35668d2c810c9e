// model.hpp -- physical model declaration: system, bath, coupling, and the
// interaction Hamiltonian H = H_S(x)I + I(x)H_R + (1/sqrt(tau)) sum_i (V_i(x)a^0_i + V_i*(x)a^i_0).
#pragma once

#include <optional>
#include <vector>

#include "qlv/numkit.hpp"

namespace qlv {

struct SystemSpec {
    int d = 0;              // system dimension
    CMatrix H_S;            // d x d, Hermitian
    std::vector<CMatrix> V; // N coupling operators, each d x d
};

struct BathSpec {
    int N = 0;                  // number of excited levels
    std::vector<double> gamma;  // gamma_0..gamma_N, gamma_0 strictly minimal
    std::vector<double> weights; // beta_0..beta_N, positive, sum 1
    std::optional<double> beta; // inverse temperature when weights are Gibbs
};

struct ModelSpec {
    SystemSpec system;
    BathSpec bath;
};

void validate(const SystemSpec& s);
void validate(const BathSpec& b);
void validate(const ModelSpec& m);

// strict beta_0 > beta_i, demanded wherever a beta_0 - beta_i denominator appears
void require_nondegenerate(const BathSpec& b);

// e^{-beta gamma_i} / Z, computed with the max-shift trick
std::vector<double> gibbs_weights(const std::vector<double>& gamma, double beta);

CMatrix bath_state(const BathSpec& b); // diag(weights)

CMatrix total_hamiltonian(const ModelSpec& m, double tau);

// U = e^{-i tau H(tau)}
CMatrix interaction_unitary(const ModelSpec& m, double tau);

// V_i = |e_0><e_i|, i = 1..dim-1; the convention that leaves the Gibbs state invariant
std::vector<CMatrix> ladder_couplings(int dim);

// system in repeated interaction with copies of itself: H_S = H_R = diag(h_diag)
ModelSpec thermalization_model(const std::vector<double>& h_diag, double beta);

} // namespace qlv
