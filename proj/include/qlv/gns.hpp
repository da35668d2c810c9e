// gns.hpp -- GNS basis of the bath algebra, coefficient extraction for the
// interaction unitary, and the tau -> 0 limits of the rescaled coefficients.
#pragma once

#include <vector>

#include "qlv/model.hpp"

namespace qlv {

// orthonormal basis X^i_j of the (N+1)x(N+1) matrix algebra under
// <A,B> = tr(rho_beta A* B); X^0_0 = I, off-diagonals (1/sqrt(beta_i)) |e_j><e_i|,
// diagonals by weighted Gram-Schmidt with positive leading entry
struct GnsBasis {
    int N = 0;
    std::vector<double> weights;
    std::vector<CMatrix> X; // (N+1)^2 entries, index i*(N+1)+j

    const CMatrix& at(int i, int j) const;
};

GnsBasis build_gns_basis(const std::vector<double>& weights);

// U^{i,j}_{k,l} = tr_H(rho_beta (X^k_l)* U X^i_j), a d x d operator;
// U given on system (x) bath
CMatrix gns_coefficient(const CMatrix& U, const GnsBasis& basis, int i, int j, int k, int l);

struct CoeffTable {
    int N = 0;
    int d = 0;
    double tau = 0.0;
    std::vector<CMatrix> entry; // (N+1)^4 entries

    const CMatrix& at(int i, int j, int k, int l) const;
    CMatrix& at(int i, int j, int k, int l);
};

CoeffTable coefficient_table(const CMatrix& U, const GnsBasis& basis, int d, double tau);
CoeffTable coefficient_table(const ModelSpec& model, double tau);

// 1 at (0,0|0,0), 1/2 when exactly one side is (0,0), else 0
double scaling_exponent(int i, int j, int k, int l);

struct LimitTable {
    int N = 0;
    int d = 0;
    std::vector<CMatrix> entry;
    std::vector<double> eps;

    const CMatrix& at(int i, int j, int k, int l) const;
    double eps_at(int i, int j, int k, int l) const;
};

LimitTable theoretical_limits(const ModelSpec& model);

struct LimitEstimate {
    CMatrix estimate;               // rescaled coefficient at the smallest tau
    CMatrix richardson;             // extrapolated from the two smallest taus
    double residual = 0.0;          // max-entry distance to theory at smallest tau
    double richardson_residual = 0.0;
    double fitted_order = 0.0;      // log-log slope of residual against tau
    std::vector<double> residuals;  // per ladder point, same order as taus
};

struct EmpiricalLimits {
    int N = 0;
    int d = 0;
    std::vector<double> taus; // descending ladder
    std::vector<LimitEstimate> entry;

    const LimitEstimate& at(int i, int j, int k, int l) const;
};

// taus in (0, 0.5], strictly descending, at least 4 values
EmpiricalLimits empirical_limits(const ModelSpec& model, const std::vector<double>& taus);

} // namespace qlv
