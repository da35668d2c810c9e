// chain.hpp -- exact dynamics on the truncated atom chain
// H_S (x) C^{N+1} (x) ... (x) C^{N+1}; the brute-force oracle for the
// reduced repeated-interaction dynamics.
#pragma once

#include <vector>

#include "qlv/model.hpp"

namespace qlv {

struct ChainOperator {
    int k = 0;      // chain sites
    int d = 0;      // system dimension
    int levels = 0; // N+1
    CMatrix op;     // d * levels^k square
};

// place A on the chain: A of size levels acts on one site (identity on the
// system and every other site), A of size d*levels acts on system and `site`
ChainOperator ampliate(const CMatrix& A, int site, int k, int d, int n_levels);

// V_k = U_k U_{k-1} ... U_1, site 1 interacting first
ChainOperator repeated_product(const ModelSpec& model, double tau, int k);

// tr_chain( V_k (rho0 (x) rho_beta^{(x)k}) V_k* )
CMatrix reduced_state_after(const ModelSpec& model, double tau, const CMatrix& rho0, int k);

// same contraction with explicit per-site initial states and steps <= k;
// exposes that sites the product never touched cannot matter
CMatrix reduced_state_after_sites(const ModelSpec& model, double tau, const CMatrix& rho0,
                                  int steps, const std::vector<CMatrix>& site_states);

} // namespace qlv
