// model.cpp
#include "qlv/model.hpp"

#include <cmath>
#include <string>

namespace qlv {

void validate(const SystemSpec& s) {
    if (s.d < 1)
        throw validation_error("SystemSpec: dimension must be >= 1");
    if (s.H_S.rows() != s.d || s.H_S.cols() != s.d)
        throw validation_error("SystemSpec: H_S shape does not match dimension");
    require_finite(s.H_S, "SystemSpec H_S");
    double dev = max_abs(s.H_S - s.H_S.adjoint());
    if (dev > 1e-10)
        throw validation_error("SystemSpec: H_S not Hermitian, deviation " + std::to_string(dev));
    if (s.V.empty())
        throw validation_error("SystemSpec: need at least one coupling operator");
    for (const auto& v : s.V) {
        if (v.rows() != s.d || v.cols() != s.d)
            throw validation_error("SystemSpec: coupling operator shape mismatch");
        require_finite(v, "SystemSpec V");
    }
}

void validate(const BathSpec& b) {
    if (b.N < 1)
        throw validation_error("BathSpec: need at least one excited level");
    if (b.gamma.size() != size_t(b.N) + 1 || b.weights.size() != size_t(b.N) + 1)
        throw validation_error("BathSpec: gamma and weights must have N+1 entries");
    for (size_t i = 1; i < b.gamma.size(); ++i)
        if (!(b.gamma[0] < b.gamma[i]))
            throw validation_error("BathSpec: gamma_0 must be strictly minimal");
    double sum = 0.0;
    for (size_t i = 0; i < b.weights.size(); ++i) {
        if (!(b.weights[i] > 0.0))
            throw validation_error("BathSpec: weights must be strictly positive");
        sum += b.weights[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("BathSpec: weights must sum to 1, got " + std::to_string(sum));
    // beta_0 may only tie the rest at infinite temperature; it never trails
    for (size_t i = 1; i < b.weights.size(); ++i)
        if (b.weights[i] > b.weights[0] + 1e-12)
            throw validation_error("BathSpec: beta_0 must dominate the other weights");
    if (b.beta && *b.beta < 0.0)
        throw validation_error("BathSpec: negative inverse temperature");
}

void validate(const ModelSpec& m) {
    validate(m.system);
    validate(m.bath);
    if (m.system.V.size() != size_t(m.bath.N))
        throw validation_error("ModelSpec: number of couplings must equal bath.N");
}

void require_nondegenerate(const BathSpec& b) {
    for (size_t i = 1; i < b.weights.size(); ++i)
        if (!(b.weights[0] > b.weights[i]))
            throw validation_error("BathSpec: beta_0 - beta_" + std::to_string(i) +
                                   " vanishes; channel would be singular");
}

std::vector<double> gibbs_weights(const std::vector<double>& gamma, double beta) {
    if (beta < 0.0)
        throw validation_error("gibbs_weights: negative inverse temperature");
    if (gamma.size() < 2)
        throw validation_error("gibbs_weights: need at least two levels");
    for (size_t i = 1; i < gamma.size(); ++i)
        if (!(gamma[0] < gamma[i]))
            throw validation_error("gibbs_weights: gamma_0 must be strictly minimal");
    // shift by the minimum so every exponent is <= 0
    std::vector<double> w(gamma.size());
    double z = 0.0;
    for (size_t i = 0; i < gamma.size(); ++i) {
        w[i] = std::exp(-beta * (gamma[i] - gamma[0]));
        z += w[i];
    }
    for (auto& x : w)
        x /= z;
    return w;
}

CMatrix bath_state(const BathSpec& b) {
    CMatrix rho = CMatrix::Zero(b.N + 1, b.N + 1);
    for (int i = 0; i <= b.N; ++i)
        rho(i, i) = b.weights[size_t(i)];
    return rho;
}

CMatrix total_hamiltonian(const ModelSpec& m, double tau) {
    validate(m);
    if (!(tau > 0.0))
        throw validation_error("total_hamiltonian: tau must be positive");
    const int d = m.system.d;
    const int nl = m.bath.N + 1;
    CMatrix Id = CMatrix::Identity(d, d);
    CMatrix Im = CMatrix::Identity(nl, nl);
    CMatrix HR = CMatrix::Zero(nl, nl);
    for (int i = 0; i < nl; ++i)
        HR(i, i) = m.bath.gamma[size_t(i)];

    CMatrix H = kron(m.system.H_S, Im) + kron(Id, HR);
    const double c = 1.0 / std::sqrt(tau);
    for (int i = 1; i <= m.bath.N; ++i) {
        CMatrix a0i = CMatrix::Zero(nl, nl); // |e_i><e_0|
        a0i(i, 0) = 1.0;
        CMatrix ai0 = CMatrix::Zero(nl, nl); // |e_0><e_i|
        ai0(0, i) = 1.0;
        const CMatrix& Vi = m.system.V[size_t(i) - 1];
        H += c * (kron(Vi, a0i) + kron(CMatrix(Vi.adjoint()), ai0));
    }
    return H;
}

CMatrix interaction_unitary(const ModelSpec& m, double tau) {
    CMatrix H = total_hamiltonian(m, tau);
    return mat_exp(Complex(0.0, -tau) * H);
}

std::vector<CMatrix> ladder_couplings(int dim) {
    if (dim < 2)
        throw validation_error("ladder_couplings: dimension must be >= 2");
    std::vector<CMatrix> V;
    V.reserve(size_t(dim) - 1);
    for (int i = 1; i < dim; ++i) {
        CMatrix v = CMatrix::Zero(dim, dim);
        v(0, i) = 1.0; // |e_0><e_i|
        V.push_back(std::move(v));
    }
    return V;
}

ModelSpec thermalization_model(const std::vector<double>& h_diag, double beta) {
    ModelSpec m;
    const int dim = int(h_diag.size());
    m.system.d = dim;
    m.system.H_S = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        m.system.H_S(i, i) = h_diag[size_t(i)];
    m.system.V = ladder_couplings(dim);
    m.bath.N = dim - 1;
    m.bath.gamma = h_diag;
    m.bath.weights = gibbs_weights(h_diag, beta);
    m.bath.beta = beta;
    validate(m);
    return m;
}

} // namespace qlv
