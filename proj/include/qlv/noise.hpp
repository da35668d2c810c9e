// noise.hpp -- symbolic Ito algebra for the discrete-chain (Fock) noises and
// the thermal noises, plus the unitarity characterizations built on them.
//
// Fock rule:    da^i_j . da^k_l = dh_{il} da^k_j,  dh the Kronecker delta
//               vanishing at (0,0); da^0_0 is identified with dt.
// Thermal rule: dA^i_0 . dA^0_i = r_plus_i dt,  dA^0_i . dA^i_0 = r_minus_i dt,
//               everything else 0.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlv/model.hpp"

namespace qlv {

struct ItoSymbol {
    enum class Kind { dt, fock, aplus, aminus };
    Kind kind = Kind::dt;
    int i = 0; // fock upper index, or thermal channel
    int j = 0; // fock lower index

    static ItoSymbol time();                // dt
    static ItoSymbol fock(int i, int j);    // da^i_j; (0,0) collapses to dt
    static ItoSymbol aplus(int channel);    // dA^0_i
    static ItoSymbol aminus(int channel);   // dA^i_0

    ItoSymbol adjoint() const;
    std::string str() const;

    friend bool operator==(const ItoSymbol&, const ItoSymbol&) = default;
    friend auto operator<=>(const ItoSymbol&, const ItoSymbol&) = default;
};

// finite sum of differentials with matrix coefficients
struct ItoExpr {
    std::map<ItoSymbol, CMatrix> terms;

    void add(const ItoSymbol& s, const CMatrix& coeff);
    double max_coeff() const; // largest |entry| across all terms
};

ItoExpr adjoint(const ItoExpr& e);

struct ThermalRatios {
    std::vector<double> r_plus;  // beta_0/(beta_0 - beta_i), channel i at [i-1]
    std::vector<double> r_minus; // beta_i/(beta_0 - beta_i)

    static ThermalRatios from_weights(const std::vector<double>& weights);
    static ThermalRatios zero_temperature(int channels);
    // validates r_plus - r_minus = 1 to 1e-12 per channel
    static ThermalRatios from_values(const std::vector<double>& r_plus,
                                     const std::vector<double>& r_minus);
    int channels() const { return int(r_plus.size()); }
};

ItoExpr fock_ito_product(const ItoSymbol& s1, const ItoSymbol& s2);
ItoExpr thermal_ito_product(const ItoSymbol& s1, const ItoSymbol& s2, const ThermalRatios& r);

// bilinear extension of the tables to whole expressions
ItoExpr mul_fock(const ItoExpr& a, const ItoExpr& b);
ItoExpr mul_thermal(const ItoExpr& a, const ItoExpr& b, const ThermalRatios& r);
ItoExpr add(const ItoExpr& a, const ItoExpr& b);

// commutator coefficient of [A(f), A*(g)] from the thermal table;
// equals sum_i <f_i,g_i> because r_plus - r_minus = 1
Complex ccr_check(const std::vector<double>& f_norms, const std::vector<Complex>& g_inner,
                  const ThermalRatios& r);

struct UnitarityReport {
    bool ok = false;
    double s_defect = 0.0; // block-matrix unitarity of S
    double h_defect = 0.0; // Hermiticity of the reconstructed H
    double l_defect = 0.0; // annihilation-row consistency
    std::string detail;
};

// coefficient of da^i_j at L(i,j); d x d matrices
struct NoiseCoeffs {
    int N = 0;
    int d = 0;
    std::vector<CMatrix> L; // (N+1)^2 entries, index i*(N+1)+j

    const CMatrix& at(int i, int j) const;
    CMatrix& at(int i, int j);
    static NoiseCoeffs zeros(int N, int d);
};

// Hudson-Parthasarathy form: S^i_j := L^i_j + delta_ij unitary,
// H := i(L^0_0 + 1/2 sum_k (L^0_k)* L^0_k) Hermitian,
// L^i_0 = -sum_k (L^0_k)* S^k_i
UnitarityReport hp_unitarity(const NoiseCoeffs& L);

// coefficients of dU = (K00 dt + sum_i Kplus_i dA^0_i + Kminus_i dA^i_0) U
struct ThermalCoeffs {
    CMatrix K00;
    std::vector<CMatrix> Kplus;
    std::vector<CMatrix> Kminus;
};

// Kminus_i = -(Kplus_i)* and K + K* = 0 for
// K = K00 + 1/2 sum_i (r_plus Kp*Kp + r_minus Kp Kp*)
UnitarityReport thermal_unitarity(const ThermalCoeffs& K, const ThermalRatios& r);

// d(U*U) and d(UU*) expanded term-by-term through the thermal table; every
// coefficient vanishes exactly when the QSDE is unitary
ItoExpr qsde_defect_left(const ThermalCoeffs& K, const ThermalRatios& r);
ItoExpr qsde_defect_right(const ThermalCoeffs& K, const ThermalRatios& r);

struct WeylVariance {
    double variance = 0.0;
    std::vector<double> factors;   // (beta_0 + beta_i) / (beta_0 - beta_i)
    std::vector<double> residuals; // |factor - coth(beta (gamma_i - gamma_0)/2)|
};

// <Omega, W(f) Omega> = exp(-1/4 sum_i factor_i |f_i|^2); needs a Gibbs bath
WeylVariance weyl_vacuum_variance(const ModelSpec& model,
                                  const std::vector<double>& f_channel_norms);

// amplitudes (sqrt(r_plus), sqrt(r_minus)) carried by the doubled-Fock picture
std::pair<double, double> thermal_to_doubled_fock(const ThermalRatios& r, int channel);

} // namespace qlv
