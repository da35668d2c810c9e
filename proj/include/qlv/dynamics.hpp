// dynamics.hpp -- reduced dynamics of the open system: the one-interaction
// channel, the limiting Lindblad generators, semigroup evolution, invariant
// states, and the two convergence studies the CLI reports on.
#pragma once

#include <vector>

#include "qlv/model.hpp"
#include "qlv/noise.hpp"

namespace qlv {

// d^2 x d^2 matrix acting on column-stacked d x d operators
struct Superoperator {
    enum class Tag { generator, channel };

    int d = 0;
    Tag tag = Tag::generator;
    CMatrix M;

    CMatrix apply(const CMatrix& X) const;
};

// Phi_tau(rho) = tr_bath( U (rho (x) diag(beta)) U* ), assembled from Kraus
// operators K_{p,q} = sqrt(beta_q) <e_p|U|e_q> so complete positivity is
// structural rather than checked after the fact
Superoperator interaction_map(const ModelSpec& model, double tau);

// L(X) = i[H,X] - 1/2 sum_i rp_i (W*WX + XW*W - 2W*XW)
//                - 1/2 sum_i rm_i (WW*X + XWW* - 2WXW*)
Superoperator lindblad_thermal(const CMatrix& H, const std::vector<CMatrix>& W,
                               const ThermalRatios& ratios);

// trace-pairing adjoint of the above, acting on states
Superoperator lindblad_thermal_predual(const CMatrix& H, const std::vector<CMatrix>& W,
                                       const ThermalRatios& ratios);

// Heisenberg generator with the bare bath weights; no beta_0 - beta_i
// denominators, so degenerate weights are fine here
Superoperator lindblad_heisenberg(const ModelSpec& model);

// Schroedinger generator; annihilates the trace, and kills diag(beta) for
// ladder-coupled models
Superoperator lindblad_schrodinger(const ModelSpec& model);

// W_i = -i sqrt(beta_0 - beta_i) V_i plus the matching ratios; needs a
// strictly dominant ground weight
struct ThermalForm {
    std::vector<CMatrix> W;
    ThermalRatios ratios;
};
ThermalForm thermal_couplings(const ModelSpec& model);

// rho_t = unvec( expm(t M) vec(rho0) ), re-Hermitized and checked
CMatrix evolve(const Superoperator& L, const CMatrix& rho0, double t);

struct StationaryStates {
    int null_dim = 0;
    std::vector<CMatrix> states; // symmetrized, trace-normalized basis
};
StationaryStates stationary_states(const Superoperator& L);

// min of -Re(mu) over eigenvalues with |mu| > 1e-9 ||L||; 0 if none qualify
double spectral_gap(const Superoperator& L);

// dim { X : [G, X] = 0 for every G }
int commutant_dim(const std::vector<CMatrix>& generators);

// equilibrium criterion: adjoining H to {L_i, L_i*} must not shrink the
// commutant
bool frigerio_verri_check(const CMatrix& H, const std::vector<CMatrix>& Ls);

struct ConvergenceRow {
    double tau = 0.0;
    long long n_steps = 0;
    double trace_distance = 0.0;
};
struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0; // log err vs log tau
};
// || Phi_tau^{[t/tau]}(rho0) - e^{tL*}(rho0) ||_1 / 2 down the tau ladder
ConvergenceStudy convergence_study(const ModelSpec& model, const CMatrix& rho0, double t,
                                   const std::vector<double>& taus);

struct EquilibriumRow {
    double t = 0.0;
    double trace_distance = 0.0;
};
struct EquilibriumStudy {
    std::vector<EquilibriumRow> rows;
    double rate = 0.0;      // exponential fit on distances in [1e-8, 1e-2]
    int fit_points = 0;     // samples inside that window
    double gap = 0.0;       // spectral gap of the generator
    CMatrix stationary;     // the unique invariant state
    double residual = 0.0;  // max |L(stationary)|
};
// distances to the unique stationary state along t_grid; rejects models
// whose generator has a degenerate null space
EquilibriumStudy return_to_equilibrium(const ModelSpec& model, const CMatrix& rho0,
                                       const std::vector<double>& t_grid);

} // namespace qlv
