// noise.cpp
#include "qlv/noise.hpp"

#include <cmath>

namespace qlv {

ItoSymbol ItoSymbol::time() {
    return ItoSymbol{Kind::dt, 0, 0};
}

ItoSymbol ItoSymbol::fock(int i, int j) {
    if (i < 0 || j < 0)
        throw validation_error("ItoSymbol: negative fock index");
    if (i == 0 && j == 0)
        return time();
    return ItoSymbol{Kind::fock, i, j};
}

ItoSymbol ItoSymbol::aplus(int channel) {
    if (channel < 1)
        throw validation_error("ItoSymbol: thermal channel must be >= 1");
    return ItoSymbol{Kind::aplus, channel, 0};
}

ItoSymbol ItoSymbol::aminus(int channel) {
    if (channel < 1)
        throw validation_error("ItoSymbol: thermal channel must be >= 1");
    return ItoSymbol{Kind::aminus, channel, 0};
}

ItoSymbol ItoSymbol::adjoint() const {
    switch (kind) {
    case Kind::dt:
        return *this;
    case Kind::fock:
        return fock(j, i);
    case Kind::aplus:
        return aminus(i);
    case Kind::aminus:
        return aplus(i);
    }
    throw validation_error("ItoSymbol: bad kind");
}

std::string ItoSymbol::str() const {
    switch (kind) {
    case Kind::dt:
        return "dt";
    case Kind::fock:
        return "da^" + std::to_string(i) + "_" + std::to_string(j);
    case Kind::aplus:
        return "dA^0_" + std::to_string(i);
    case Kind::aminus:
        return "dA^" + std::to_string(i) + "_0";
    }
    return "?";
}

void ItoExpr::add(const ItoSymbol& s, const CMatrix& coeff) {
    auto it = terms.find(s);
    if (it == terms.end())
        terms.emplace(s, coeff);
    else
        it->second += coeff;
}

double ItoExpr::max_coeff() const {
    double m = 0.0;
    for (const auto& [s, c] : terms)
        m = std::max(m, max_abs(c));
    return m;
}

ItoExpr adjoint(const ItoExpr& e) {
    ItoExpr out;
    for (const auto& [s, c] : e.terms)
        out.add(s.adjoint(), c.adjoint());
    return out;
}

ThermalRatios ThermalRatios::from_weights(const std::vector<double>& weights) {
    if (weights.size() < 2)
        throw validation_error("ThermalRatios: need at least two weights");
    ThermalRatios r;
    for (size_t i = 1; i < weights.size(); ++i) {
        double den = weights[0] - weights[i];
        if (!(den > 0.0))
            throw validation_error("ThermalRatios: beta_0 - beta_" + std::to_string(i) +
                                   " must be strictly positive");
        double rm = weights[i] / den;
        r.r_minus.push_back(rm);
        r.r_plus.push_back(rm + 1.0); // difference exactly 1 by construction
    }
    return r;
}

ThermalRatios ThermalRatios::zero_temperature(int channels) {
    if (channels < 1)
        throw validation_error("ThermalRatios: need at least one channel");
    ThermalRatios r;
    r.r_plus.assign(size_t(channels), 1.0);
    r.r_minus.assign(size_t(channels), 0.0);
    return r;
}

ThermalRatios ThermalRatios::from_values(const std::vector<double>& r_plus,
                                         const std::vector<double>& r_minus) {
    if (r_plus.size() != r_minus.size() || r_plus.empty())
        throw validation_error("ThermalRatios: ratio lists must match and be non-empty");
    for (size_t i = 0; i < r_plus.size(); ++i) {
        if (std::abs(r_plus[i] - r_minus[i] - 1.0) > 1e-12)
            throw validation_error("ThermalRatios: r_plus - r_minus must equal 1");
        if (r_minus[i] < 0.0)
            throw validation_error("ThermalRatios: r_minus must be >= 0");
    }
    ThermalRatios r;
    r.r_plus = r_plus;
    r.r_minus = r_minus;
    return r;
}

namespace {

const CMatrix& scalar_one() {
    static const CMatrix one = CMatrix::Constant(1, 1, Complex(1.0, 0.0));
    return one;
}

} // namespace

ItoExpr fock_ito_product(const ItoSymbol& s1, const ItoSymbol& s2) {
    if ((s1.kind != ItoSymbol::Kind::fock && s1.kind != ItoSymbol::Kind::dt) ||
        (s2.kind != ItoSymbol::Kind::fock && s2.kind != ItoSymbol::Kind::dt))
        throw validation_error("fock_ito_product: expects fock symbols or dt");
    ItoExpr out;
    // da^i_j . da^k_l = dh_{il} da^k_j with dh vanishing at (0,0)
    if (s1.i == s2.j && !(s1.i == 0 && s2.j == 0))
        out.add(ItoSymbol::fock(s2.i, s1.j), scalar_one());
    return out;
}

ItoExpr thermal_ito_product(const ItoSymbol& s1, const ItoSymbol& s2, const ThermalRatios& r) {
    auto thermal_or_dt = [](const ItoSymbol& s) {
        return s.kind == ItoSymbol::Kind::dt || s.kind == ItoSymbol::Kind::aplus ||
               s.kind == ItoSymbol::Kind::aminus;
    };
    if (!thermal_or_dt(s1) || !thermal_or_dt(s2))
        throw validation_error("thermal_ito_product: expects thermal symbols or dt");
    ItoExpr out;
    if (s1.kind == ItoSymbol::Kind::aminus && s2.kind == ItoSymbol::Kind::aplus &&
        s1.i == s2.i) {
        if (s1.i > r.channels())
            throw validation_error("thermal_ito_product: channel out of range");
        out.add(ItoSymbol::time(), r.r_plus[size_t(s1.i) - 1] * scalar_one());
    } else if (s1.kind == ItoSymbol::Kind::aplus && s2.kind == ItoSymbol::Kind::aminus &&
               s1.i == s2.i) {
        if (s1.i > r.channels())
            throw validation_error("thermal_ito_product: channel out of range");
        out.add(ItoSymbol::time(), r.r_minus[size_t(s1.i) - 1] * scalar_one());
    }
    return out;
}

namespace {

template <typename Table>
ItoExpr mul_with(const ItoExpr& a, const ItoExpr& b, Table&& table) {
    ItoExpr out;
    for (const auto& [s1, c1] : a.terms)
        for (const auto& [s2, c2] : b.terms) {
            ItoExpr prod = table(s1, s2);
            for (const auto& [s, w] : prod.terms) {
                // table coefficients are 1x1 scalars
                out.add(s, w(0, 0) * (c1 * c2));
            }
        }
    return out;
}

} // namespace

ItoExpr mul_fock(const ItoExpr& a, const ItoExpr& b) {
    return mul_with(a, b, [](const ItoSymbol& s1, const ItoSymbol& s2) {
        return fock_ito_product(s1, s2);
    });
}

ItoExpr mul_thermal(const ItoExpr& a, const ItoExpr& b, const ThermalRatios& r) {
    return mul_with(a, b, [&r](const ItoSymbol& s1, const ItoSymbol& s2) {
        return thermal_ito_product(s1, s2, r);
    });
}

ItoExpr add(const ItoExpr& a, const ItoExpr& b) {
    ItoExpr out = a;
    for (const auto& [s, c] : b.terms)
        out.add(s, c);
    return out;
}

Complex ccr_check(const std::vector<double>& f_norms, const std::vector<Complex>& g_inner,
                  const ThermalRatios& r) {
    if (f_norms.size() != g_inner.size() || int(f_norms.size()) != r.channels())
        throw validation_error("ccr_check: channel counts must agree");
    for (double n : f_norms)
        if (n < 0.0)
            throw validation_error("ccr_check: squared norms must be >= 0");
    Complex out(0.0, 0.0);
    for (size_t i = 0; i < g_inner.size(); ++i)
        out += (r.r_plus[i] - r.r_minus[i]) * g_inner[i];
    return out;
}

const CMatrix& NoiseCoeffs::at(int i, int j) const {
    if (i < 0 || i > N || j < 0 || j > N)
        throw validation_error("NoiseCoeffs: index out of range");
    return L[size_t(i) * (N + 1) + size_t(j)];
}

CMatrix& NoiseCoeffs::at(int i, int j) {
    if (i < 0 || i > N || j < 0 || j > N)
        throw validation_error("NoiseCoeffs: index out of range");
    return L[size_t(i) * (N + 1) + size_t(j)];
}

NoiseCoeffs NoiseCoeffs::zeros(int N, int d) {
    if (N < 1 || d < 1)
        throw validation_error("NoiseCoeffs: bad dimensions");
    NoiseCoeffs t;
    t.N = N;
    t.d = d;
    t.L.assign(size_t(N + 1) * (N + 1), CMatrix::Zero(d, d));
    return t;
}

UnitarityReport hp_unitarity(const NoiseCoeffs& L) {
    const int N = L.N;
    const int d = L.d;
    if (int(L.L.size()) != (N + 1) * (N + 1))
        throw validation_error("hp_unitarity: incomplete table");
    for (const auto& c : L.L)
        if (c.rows() != d || c.cols() != d)
            throw validation_error("hp_unitarity: coefficient shape mismatch");

    UnitarityReport rep;

    // S^i_j = L^i_j + delta_ij, i,j = 1..N, as one Nd x Nd block matrix
    CMatrix S = CMatrix::Zero(Eigen::Index(N) * d, Eigen::Index(N) * d);
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            CMatrix blk = L.at(i, j);
            if (i == j)
                blk += CMatrix::Identity(d, d);
            S.block(Eigen::Index(i - 1) * d, Eigen::Index(j - 1) * d, d, d) = blk;
        }
    rep.s_defect = max_abs(S * S.adjoint() - CMatrix::Identity(S.rows(), S.cols()));

    CMatrix H = L.at(0, 0);
    for (int k = 1; k <= N; ++k)
        H += 0.5 * (L.at(0, k).adjoint() * L.at(0, k));
    H *= Complex(0.0, 1.0);
    rep.h_defect = max_abs(H - H.adjoint());

    rep.l_defect = 0.0;
    for (int i = 1; i <= N; ++i) {
        CMatrix expect = CMatrix::Zero(d, d);
        for (int k = 1; k <= N; ++k)
            expect -= L.at(0, k).adjoint() *
                      S.block(Eigen::Index(k - 1) * d, Eigen::Index(i - 1) * d, d, d);
        rep.l_defect = std::max(rep.l_defect, max_abs(L.at(i, 0) - expect));
    }

    const double tol = 1e-10;
    rep.ok = rep.s_defect <= tol && rep.h_defect <= tol && rep.l_defect <= tol;
    if (!rep.ok) {
        if (rep.s_defect > tol)
            rep.detail = "scattering block not unitary";
        else if (rep.h_defect > tol)
            rep.detail = "reconstructed H not Hermitian";
        else
            rep.detail = "annihilation row inconsistent";
    }
    return rep;
}

UnitarityReport thermal_unitarity(const ThermalCoeffs& K, const ThermalRatios& r) {
    const size_t n = K.Kplus.size();
    if (K.Kminus.size() != n || int(n) != r.channels())
        throw validation_error("thermal_unitarity: channel counts must agree");
    if (K.K00.rows() != K.K00.cols())
        throw validation_error("thermal_unitarity: K00 not square");

    UnitarityReport rep;
    rep.l_defect = 0.0;
    for (size_t i = 0; i < n; ++i)
        rep.l_defect = std::max(rep.l_defect, max_abs(K.Kminus[i] + K.Kplus[i].adjoint()));

    CMatrix Ksum = K.K00;
    for (size_t i = 0; i < n; ++i) {
        const CMatrix& Kp = K.Kplus[i];
        Ksum += 0.5 * (r.r_plus[i] * (Kp.adjoint() * Kp) + r.r_minus[i] * (Kp * Kp.adjoint()));
    }
    rep.h_defect = max_abs(Ksum + Ksum.adjoint());

    const double tol = 1e-12;
    rep.ok = rep.l_defect <= tol && rep.h_defect <= tol;
    if (!rep.ok)
        rep.detail = rep.l_defect > tol ? "Kminus is not -(Kplus)*" : "K + K* does not vanish";
    return rep;
}

namespace {

ItoExpr thermal_qsde(const ThermalCoeffs& K) {
    ItoExpr dU;
    dU.add(ItoSymbol::time(), K.K00);
    for (size_t i = 0; i < K.Kplus.size(); ++i) {
        dU.add(ItoSymbol::aplus(int(i) + 1), K.Kplus[i]);
        dU.add(ItoSymbol::aminus(int(i) + 1), K.Kminus[i]);
    }
    return dU;
}

} // namespace

ItoExpr qsde_defect_left(const ThermalCoeffs& K, const ThermalRatios& r) {
    // d(U*U) = dU*.U + U*.dU + dU*.dU, coefficients read off with U*U = I
    ItoExpr dU = thermal_qsde(K);
    ItoExpr dUdag = adjoint(dU);
    return add(add(dUdag, dU), mul_thermal(dUdag, dU, r));
}

ItoExpr qsde_defect_right(const ThermalCoeffs& K, const ThermalRatios& r) {
    ItoExpr dU = thermal_qsde(K);
    ItoExpr dUdag = adjoint(dU);
    return add(add(dU, dUdag), mul_thermal(dU, dUdag, r));
}

WeylVariance weyl_vacuum_variance(const ModelSpec& model,
                                  const std::vector<double>& f_channel_norms) {
    validate(model);
    if (!model.bath.beta)
        throw validation_error("weyl_vacuum_variance: bath state must be Gibbs-constructed");
    require_nondegenerate(model.bath);
    if (int(f_channel_norms.size()) != model.bath.N)
        throw validation_error("weyl_vacuum_variance: need one squared norm per channel");
    for (double n : f_channel_norms)
        if (n < 0.0)
            throw validation_error("weyl_vacuum_variance: squared norms must be >= 0");

    const auto& w = model.bath.weights;
    const auto& g = model.bath.gamma;
    const double beta = *model.bath.beta;

    WeylVariance out;
    double expo = 0.0;
    for (int i = 1; i <= model.bath.N; ++i) {
        double factor = (w[0] + w[size_t(i)]) / (w[0] - w[size_t(i)]);
        double coth = 1.0 / std::tanh(0.5 * beta * (g[size_t(i)] - g[0]));
        out.factors.push_back(factor);
        out.residuals.push_back(std::abs(factor - coth));
        expo += factor * f_channel_norms[size_t(i) - 1];
    }
    out.variance = std::exp(-0.25 * expo);
    return out;
}

std::pair<double, double> thermal_to_doubled_fock(const ThermalRatios& r, int channel) {
    if (channel < 1 || channel > r.channels())
        throw validation_error("thermal_to_doubled_fock: channel out of range");
    return {std::sqrt(r.r_plus[size_t(channel) - 1]), std::sqrt(r.r_minus[size_t(channel) - 1])};
}

} // namespace qlv
