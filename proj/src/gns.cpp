// gns.cpp
#include "qlv/gns.hpp"

#include <cmath>
#include <string>

namespace qlv {

namespace {

int table_index(int N, int i, int j, int k, int l) {
    const int m = N + 1;
    if (i < 0 || i > N || j < 0 || j > N || k < 0 || k > N || l < 0 || l > N)
        throw validation_error("gns: basis index out of range");
    return ((i * m + j) * m + k) * m + l;
}

double weighted_inner(const std::vector<double>& w, const std::vector<double>& a,
                      const std::vector<double>& b) {
    double s = 0.0;
    for (size_t p = 0; p < w.size(); ++p)
        s += w[p] * a[p] * b[p];
    return s;
}

} // namespace

const CMatrix& GnsBasis::at(int i, int j) const {
    if (i < 0 || i > N || j < 0 || j > N)
        throw validation_error("GnsBasis: index out of range");
    return X[size_t(i) * (N + 1) + size_t(j)];
}

GnsBasis build_gns_basis(const std::vector<double>& weights) {
    if (weights.size() < 2)
        throw validation_error("build_gns_basis: need at least two weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0))
            throw validation_error("build_gns_basis: weights must be strictly positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("build_gns_basis: weights must sum to 1");

    GnsBasis basis;
    basis.N = int(weights.size()) - 1;
    basis.weights = weights;
    const int m = basis.N + 1;
    basis.X.assign(size_t(m) * m, CMatrix());

    // diagonal family: Gram-Schmidt of e_1..e_N against the all-ones vector
    // under sum_p beta_p x_p y_p, two passes for orthogonality near machine eps
    std::vector<std::vector<double>> diag;
    diag.push_back(std::vector<double>(size_t(m), 1.0));
    for (int i = 1; i <= basis.N; ++i) {
        std::vector<double> v(size_t(m), 0.0);
        v[size_t(i)] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : diag) {
                double c = weighted_inner(weights, u, v);
                for (size_t p = 0; p < v.size(); ++p)
                    v[p] -= c * u[p];
            }
        double nrm = std::sqrt(weighted_inner(weights, v, v));
        if (!(nrm > 1e-14))
            throw numeric_error("build_gns_basis: diagonal direction collapsed");
        for (auto& x : v)
            x /= nrm;
        // leading nonzero entry positive
        for (size_t p = 0; p < v.size(); ++p) {
            if (std::abs(v[p]) > 1e-12) {
                if (v[p] < 0.0)
                    for (auto& x : v)
                        x = -x;
                break;
            }
        }
        diag.push_back(v);
    }

    for (int i = 0; i <= basis.N; ++i)
        for (int j = 0; j <= basis.N; ++j) {
            CMatrix X = CMatrix::Zero(m, m);
            if (i == j) {
                for (int p = 0; p < m; ++p)
                    X(p, p) = diag[size_t(i)][size_t(p)];
            } else {
                // X^i_j = (1/sqrt(beta_i)) a^i_j with a^i_j = |e_j><e_i|
                X(j, i) = 1.0 / std::sqrt(weights[size_t(i)]);
            }
            basis.X[size_t(i) * m + size_t(j)] = std::move(X);
        }
    return basis;
}

CMatrix gns_coefficient(const CMatrix& U, const GnsBasis& basis, int i, int j, int k, int l) {
    const int m = basis.N + 1;
    if (U.rows() != U.cols() || U.rows() % m != 0)
        throw validation_error("gns_coefficient: operator dimension not divisible by N+1");
    const int d = int(U.rows()) / m;
    table_index(basis.N, i, j, k, l); // range check

    CMatrix rho = CMatrix::Zero(m, m);
    for (int p = 0; p < m; ++p)
        rho(p, p) = basis.weights[size_t(p)];
    CMatrix A = rho * basis.at(k, l).adjoint();
    const CMatrix& B = basis.at(i, j);

    CMatrix out = CMatrix::Zero(d, d);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (A(a, b) == Complex(0.0, 0.0))
                continue;
            for (int c = 0; c < m; ++c) {
                Complex coef = A(a, b) * B(c, a);
                if (coef == Complex(0.0, 0.0))
                    continue;
                out += coef * env_block(U, d, m, b, c);
            }
        }
    return out;
}

const CMatrix& CoeffTable::at(int i, int j, int k, int l) const {
    return entry[size_t(table_index(N, i, j, k, l))];
}

CMatrix& CoeffTable::at(int i, int j, int k, int l) {
    return entry[size_t(table_index(N, i, j, k, l))];
}

CoeffTable coefficient_table(const CMatrix& U, const GnsBasis& basis, int d, double tau) {
    const int m = basis.N + 1;
    if (U.rows() != Eigen::Index(d) * m || U.rows() != U.cols())
        throw validation_error("coefficient_table: operator shape mismatch");

    CoeffTable t;
    t.N = basis.N;
    t.d = d;
    t.tau = tau;
    t.entry.assign(size_t(m) * m * m * m, CMatrix());

    // cache the bath blocks once; every coefficient reuses them
    std::vector<CMatrix> blk(size_t(m) * m);
    for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
            blk[size_t(b) * m + size_t(c)] = env_block(U, d, m, b, c);

    CMatrix rho = CMatrix::Zero(m, m);
    for (int p = 0; p < m; ++p)
        rho(p, p) = basis.weights[size_t(p)];

    for (int i = 0; i <= basis.N; ++i)
        for (int j = 0; j <= basis.N; ++j) {
            const CMatrix& B = basis.at(i, j);
            for (int k = 0; k <= basis.N; ++k)
                for (int l = 0; l <= basis.N; ++l) {
                    CMatrix A = rho * basis.at(k, l).adjoint();
                    CMatrix out = CMatrix::Zero(d, d);
                    for (int a = 0; a < m; ++a)
                        for (int b = 0; b < m; ++b) {
                            if (A(a, b) == Complex(0.0, 0.0))
                                continue;
                            for (int c = 0; c < m; ++c) {
                                Complex coef = A(a, b) * B(c, a);
                                if (coef == Complex(0.0, 0.0))
                                    continue;
                                out += coef * blk[size_t(b) * m + size_t(c)];
                            }
                        }
                    t.at(i, j, k, l) = std::move(out);
                }
        }
    return t;
}

CoeffTable coefficient_table(const ModelSpec& model, double tau) {
    GnsBasis basis = build_gns_basis(model.bath.weights);
    CMatrix U = interaction_unitary(model, tau);
    return coefficient_table(U, basis, model.system.d, tau);
}

double scaling_exponent(int i, int j, int k, int l) {
    bool lhs = (i == 0 && j == 0);
    bool rhs = (k == 0 && l == 0);
    if (lhs && rhs)
        return 1.0;
    if (lhs || rhs)
        return 0.5;
    return 0.0;
}

const CMatrix& LimitTable::at(int i, int j, int k, int l) const {
    return entry[size_t(table_index(N, i, j, k, l))];
}

double LimitTable::eps_at(int i, int j, int k, int l) const {
    return eps[size_t(table_index(N, i, j, k, l))];
}

LimitTable theoretical_limits(const ModelSpec& model) {
    validate(model);
    const int N = model.bath.N;
    const int d = model.system.d;
    const int m = N + 1;

    LimitTable t;
    t.N = N;
    t.d = d;
    t.entry.assign(size_t(m) * m * m * m, CMatrix::Zero(d, d));
    t.eps.assign(size_t(m) * m * m * m, 0.0);

    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j)
            for (int k = 0; k <= N; ++k)
                for (int l = 0; l <= N; ++l)
                    t.eps[size_t(table_index(N, i, j, k, l))] = scaling_exponent(i, j, k, l);

    const auto& w = model.bath.weights;
    const auto& g = model.bath.gamma;
    const auto& V = model.system.V;
    const Complex mi(0.0, -1.0);

    // energy shift runs over every level, the dissipative sum over excited ones
    double shift = 0.0;
    for (int p = 0; p <= N; ++p)
        shift += w[size_t(p)] * g[size_t(p)];
    CMatrix L00 = mi * model.system.H_S + mi * shift * CMatrix::Identity(d, d);
    for (int i = 1; i <= N; ++i) {
        const CMatrix& Vi = V[size_t(i) - 1];
        L00 -= 0.5 * (w[0] * (Vi.adjoint() * Vi) + w[size_t(i)] * (Vi * Vi.adjoint()));
    }
    t.entry[size_t(table_index(N, 0, 0, 0, 0))] = L00;

    for (int i = 1; i <= N; ++i) {
        const CMatrix& Vi = V[size_t(i) - 1];
        double sb0 = std::sqrt(w[0]);
        double sbi = std::sqrt(w[size_t(i)]);
        t.entry[size_t(table_index(N, i, 0, 0, 0))] = mi * sbi * Vi;
        t.entry[size_t(table_index(N, 0, i, 0, 0))] = mi * sb0 * CMatrix(Vi.adjoint());
        t.entry[size_t(table_index(N, 0, 0, i, 0))] = mi * sbi * CMatrix(Vi.adjoint());
        t.entry[size_t(table_index(N, 0, 0, 0, i))] = mi * sb0 * Vi;
    }
    return t;
}

const LimitEstimate& EmpiricalLimits::at(int i, int j, int k, int l) const {
    return entry[size_t(table_index(N, i, j, k, l))];
}

EmpiricalLimits empirical_limits(const ModelSpec& model, const std::vector<double>& taus) {
    if (taus.size() < 4)
        throw validation_error("empirical_limits: need a ladder of at least 4 taus");
    for (size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0) || taus[i] > 0.5)
            throw validation_error("empirical_limits: taus must lie in (0, 0.5]");
        if (i > 0 && !(taus[i] < taus[i - 1]))
            throw validation_error("empirical_limits: taus must be strictly descending");
    }

    LimitTable theory = theoretical_limits(model);
    const int N = theory.N;
    const int d = theory.d;
    const int m = N + 1;

    EmpiricalLimits out;
    out.N = N;
    out.d = d;
    out.taus = taus;
    out.entry.assign(size_t(m) * m * m * m, LimitEstimate{});

    // rescaled tables, one per ladder point; last is the smallest tau
    std::vector<CoeffTable> tables;
    tables.reserve(taus.size());
    for (double tau : taus)
        tables.push_back(coefficient_table(model, tau));

    std::vector<double> log_tau;
    log_tau.reserve(taus.size());
    for (double tau : taus)
        log_tau.push_back(std::log(tau));

    CMatrix Id = CMatrix::Identity(d, d);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j)
            for (int k = 0; k <= N; ++k)
                for (int l = 0; l <= N; ++l) {
                    LimitEstimate& est = out.entry[size_t(table_index(N, i, j, k, l))];
                    const CMatrix& L = theory.at(i, j, k, l);
                    double eps = theory.eps_at(i, j, k, l);
                    bool diag = (i == k && j == l);

                    std::vector<CMatrix> rescaled;
                    rescaled.reserve(taus.size());
                    est.residuals.reserve(taus.size());
                    for (size_t p = 0; p < taus.size(); ++p) {
                        CMatrix R = tables[p].at(i, j, k, l);
                        if (diag)
                            R -= Id;
                        R /= std::pow(taus[p], eps);
                        est.residuals.push_back(max_abs(R - L));
                        rescaled.push_back(std::move(R));
                    }

                    est.estimate = rescaled.back();
                    est.residual = est.residuals.back();

                    std::vector<double> log_res;
                    log_res.reserve(taus.size());
                    for (double r : est.residuals)
                        log_res.push_back(std::log(std::max(r, 1e-16)));
                    est.fitted_order = least_squares_slope(log_tau, log_res);

                    // Richardson step from the two smallest taus, order clamped
                    // to a sane window; skipped at the noise floor
                    if (est.residual <= 1e-14) {
                        est.richardson = est.estimate;
                    } else {
                        double p = std::min(2.0, std::max(0.25, est.fitted_order));
                        double ratio = taus[taus.size() - 2] / taus.back();
                        double denom = std::pow(ratio, p) - 1.0;
                        est.richardson = est.estimate +
                                         (est.estimate - rescaled[rescaled.size() - 2]) / denom;
                    }
                    est.richardson_residual = max_abs(est.richardson - L);
                }
    return out;
}

} // namespace qlv
