// dynamics.cpp
#include "qlv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qlv/errors.hpp"

namespace qlv {

namespace {

void require_generator(const Superoperator& L, const char* who) {
    if (L.tag != Superoperator::Tag::generator)
        throw validation_error(std::string(who) + ": expected a generator, got a channel");
    if (L.d < 1 || L.M.rows() != Eigen::Index(L.d) * L.d || L.M.cols() != L.M.rows())
        throw validation_error(std::string(who) + ": malformed superoperator");
}

void require_hermitian(const CMatrix& H, const char* who) {
    if (H.rows() != H.cols())
        throw validation_error(std::string(who) + ": H not square");
    require_finite(H, who);
    double dev = max_abs(H - H.adjoint());
    if (dev > 1e-10)
        throw validation_error(std::string(who) + ": H not Hermitian, deviation " +
                               std::to_string(dev));
}

// dissipator pieces shared by all four generator builders; conjugation by
// A with anticommutator {A*A, .} weighted by rate
CMatrix dissipator_heisenberg(const CMatrix& A, double rate) {
    const Eigen::Index d = A.rows();
    CMatrix I = CMatrix::Identity(d, d);
    CMatrix AA = A.adjoint() * A;
    return -0.5 * rate *
           (sandwich_superop(AA, I) + sandwich_superop(I, AA) -
            2.0 * sandwich_superop(CMatrix(A.adjoint()), A));
}

CMatrix dissipator_schrodinger(const CMatrix& A, double rate) {
    const Eigen::Index d = A.rows();
    CMatrix I = CMatrix::Identity(d, d);
    CMatrix AA = A.adjoint() * A;
    return -0.5 * rate *
           (sandwich_superop(AA, I) + sandwich_superop(I, AA) -
            2.0 * sandwich_superop(A, CMatrix(A.adjoint())));
}

CMatrix commutator_superop(const CMatrix& H) {
    CMatrix I = CMatrix::Identity(H.rows(), H.cols());
    return sandwich_superop(H, I) - sandwich_superop(I, H);
}

} // namespace

CMatrix Superoperator::apply(const CMatrix& X) const {
    if (X.rows() != d || X.cols() != d)
        throw validation_error("Superoperator::apply: operand shape mismatch");
    return unvec(CVector(M * vec(X)), d);
}

Superoperator interaction_map(const ModelSpec& model, double tau) {
    if (!(tau > 0.0))
        throw validation_error("interaction_map: tau must be positive");
    const CMatrix U = interaction_unitary(model, tau);
    const int d = model.system.d;
    const int m = model.bath.N + 1;

    Superoperator phi;
    phi.d = d;
    phi.tag = Superoperator::Tag::channel;
    phi.M = CMatrix::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
    CMatrix completeness = CMatrix::Zero(d, d);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            CMatrix K = std::sqrt(model.bath.weights[size_t(q)]) * env_block(U, d, m, p, q);
            phi.M += kron(K.conjugate(), K);
            completeness += K.adjoint() * K;
        }
    double defect = max_abs(completeness - CMatrix::Identity(d, d));
    if (defect > 1e-10)
        throw numeric_error("interaction_map: Kraus completeness defect " +
                            std::to_string(defect));
    return phi;
}

Superoperator lindblad_thermal(const CMatrix& H, const std::vector<CMatrix>& W,
                               const ThermalRatios& ratios) {
    require_hermitian(H, "lindblad_thermal");
    if (int(W.size()) != ratios.channels())
        throw validation_error("lindblad_thermal: one ratio pair per coupling required");
    const Eigen::Index d = H.rows();

    Superoperator L;
    L.d = int(d);
    L.tag = Superoperator::Tag::generator;
    L.M = Complex(0.0, 1.0) * commutator_superop(H);
    for (size_t i = 0; i < W.size(); ++i) {
        if (W[i].rows() != d || W[i].cols() != d)
            throw validation_error("lindblad_thermal: coupling shape mismatch");
        require_finite(W[i], "lindblad_thermal W");
        L.M += dissipator_heisenberg(W[i], ratios.r_plus[i]);
        L.M += dissipator_heisenberg(CMatrix(W[i].adjoint()), ratios.r_minus[i]);
    }
    return L;
}

Superoperator lindblad_thermal_predual(const CMatrix& H, const std::vector<CMatrix>& W,
                                       const ThermalRatios& ratios) {
    require_hermitian(H, "lindblad_thermal_predual");
    if (int(W.size()) != ratios.channels())
        throw validation_error("lindblad_thermal_predual: one ratio pair per coupling required");
    const Eigen::Index d = H.rows();

    Superoperator L;
    L.d = int(d);
    L.tag = Superoperator::Tag::generator;
    L.M = Complex(0.0, -1.0) * commutator_superop(H);
    for (size_t i = 0; i < W.size(); ++i) {
        if (W[i].rows() != d || W[i].cols() != d)
            throw validation_error("lindblad_thermal_predual: coupling shape mismatch");
        require_finite(W[i], "lindblad_thermal_predual W");
        L.M += dissipator_schrodinger(W[i], ratios.r_plus[i]);
        L.M += dissipator_schrodinger(CMatrix(W[i].adjoint()), ratios.r_minus[i]);
    }
    return L;
}

Superoperator lindblad_heisenberg(const ModelSpec& model) {
    validate(model);
    const auto& w = model.bath.weights;

    Superoperator L;
    L.d = model.system.d;
    L.tag = Superoperator::Tag::generator;
    L.M = Complex(0.0, 1.0) * commutator_superop(model.system.H_S);
    for (int i = 1; i <= model.bath.N; ++i) {
        const CMatrix& V = model.system.V[size_t(i) - 1];
        L.M += dissipator_heisenberg(V, w[0]);
        L.M += dissipator_heisenberg(CMatrix(V.adjoint()), w[size_t(i)]);
    }
    return L;
}

Superoperator lindblad_schrodinger(const ModelSpec& model) {
    validate(model);
    const auto& w = model.bath.weights;

    Superoperator L;
    L.d = model.system.d;
    L.tag = Superoperator::Tag::generator;
    L.M = Complex(0.0, -1.0) * commutator_superop(model.system.H_S);
    for (int i = 1; i <= model.bath.N; ++i) {
        const CMatrix& V = model.system.V[size_t(i) - 1];
        L.M += dissipator_schrodinger(V, w[0]);
        L.M += dissipator_schrodinger(CMatrix(V.adjoint()), w[size_t(i)]);
    }
    return L;
}

ThermalForm thermal_couplings(const ModelSpec& model) {
    validate(model);
    require_nondegenerate(model.bath);
    ThermalForm f;
    f.ratios = ThermalRatios::from_weights(model.bath.weights);
    f.W.reserve(model.system.V.size());
    for (int i = 1; i <= model.bath.N; ++i) {
        double gap = model.bath.weights[0] - model.bath.weights[size_t(i)];
        f.W.push_back(Complex(0.0, -std::sqrt(gap)) * model.system.V[size_t(i) - 1]);
    }
    return f;
}

CMatrix evolve(const Superoperator& L, const CMatrix& rho0, double t) {
    require_generator(L, "evolve");
    if (!(t >= 0.0))
        throw validation_error("evolve: time must be nonnegative");
    require_density(rho0);
    if (rho0.rows() != L.d)
        throw validation_error("evolve: state dimension mismatch");

    CMatrix rho = unvec(CVector(mat_exp(CMatrix(t * L.M)) * vec(rho0)), L.d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    try {
        require_density(rho);
    } catch (const validation_error& e) {
        throw numeric_error(std::string("evolve: output failed the state checks at t = ") +
                            std::to_string(t) + " (" + e.what() + ")");
    }
    return rho;
}

StationaryStates stationary_states(const Superoperator& L) {
    require_generator(L, "stationary_states");
    auto basis = null_space(L.M, 1e-10);
    if (basis.empty())
        throw numeric_error("stationary_states: empty null space; generators always fix a state");

    StationaryStates out;
    out.null_dim = int(basis.size());
    for (const auto& v : basis) {
        CMatrix X = unvec(v, L.d);
        // strip the arbitrary SVD phase before symmetrizing, else a state
        // direction returned as i*rho would symmetrize to zero
        Complex tr = X.trace();
        if (std::abs(tr) > 1e-10)
            X *= std::conj(tr) / std::abs(tr);
        X = 0.5 * (X + X.adjoint().eval());
        double tn = trace_norm(X);
        if (tn <= 1e-12)
            continue; // genuinely traceless anti-Hermitian direction
        tr = X.trace();
        if (std::abs(tr) > 1e-8 * std::max(tn, 1.0))
            X /= tr;
        else
            X /= tn;
        out.states.push_back(X);
    }
    return out;
}

double spectral_gap(const Superoperator& L) {
    require_generator(L, "spectral_gap");
    Eigen::ComplexEigenSolver<CMatrix> es(L.M, false);
    if (es.info() != Eigen::Success)
        throw numeric_error("spectral_gap: eigensolver failed to converge");
    const double scale = std::max(max_abs(L.M), 1e-300);
    double gap = 0.0;
    bool found = false;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        Complex mu = es.eigenvalues()[k];
        if (std::abs(mu) <= 1e-9 * scale)
            continue;
        double g = -mu.real();
        if (!found || g < gap) {
            gap = g;
            found = true;
        }
    }
    return found ? std::max(gap, 0.0) : 0.0;
}

int commutant_dim(const std::vector<CMatrix>& generators) {
    if (generators.empty())
        throw validation_error("commutant_dim: need at least one generator");
    const Eigen::Index d = generators.front().rows();
    CMatrix stacked(Eigen::Index(generators.size()) * d * d, d * d);
    CMatrix I = CMatrix::Identity(d, d);
    for (size_t g = 0; g < generators.size(); ++g) {
        const CMatrix& G = generators[g];
        if (G.rows() != d || G.cols() != d)
            throw validation_error("commutant_dim: generator shape mismatch");
        require_finite(G, "commutant_dim generator");
        stacked.block(Eigen::Index(g) * d * d, 0, d * d, d * d) =
            sandwich_superop(G, I) - sandwich_superop(I, G);
    }
    return int(null_space(stacked, 1e-10).size());
}

bool frigerio_verri_check(const CMatrix& H, const std::vector<CMatrix>& Ls) {
    require_hermitian(H, "frigerio_verri_check");
    if (Ls.empty())
        throw validation_error("frigerio_verri_check: need at least one Lindblad operator");
    std::vector<CMatrix> alg;
    alg.reserve(2 * Ls.size() + 1);
    for (const auto& Lop : Ls) {
        alg.push_back(Lop);
        alg.push_back(Lop.adjoint());
    }
    const int without_h = commutant_dim(alg);
    alg.push_back(H);
    return commutant_dim(alg) == without_h;
}

ConvergenceStudy convergence_study(const ModelSpec& model, const CMatrix& rho0, double t,
                                   const std::vector<double>& taus) {
    validate(model);
    require_density(rho0);
    if (rho0.rows() != model.system.d)
        throw validation_error("convergence_study: state dimension mismatch");
    if (!(t > 0.0))
        throw validation_error("convergence_study: need a positive horizon");
    if (taus.empty())
        throw validation_error("convergence_study: need at least one tau");
    for (size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0) || taus[i] > t)
            throw validation_error("convergence_study: every tau must lie in (0, t]");
        if (i > 0 && !(taus[i] < taus[i - 1]))
            throw validation_error("convergence_study: taus must be strictly descending");
    }

    const Superoperator Lstar = lindblad_schrodinger(model);
    const CMatrix target = evolve(Lstar, rho0, t);

    ConvergenceStudy out;
    out.rows.reserve(taus.size());
    std::vector<double> lx, ly;
    for (double tau : taus) {
        // nudge so t/tau = k for exactly representable ratios lands on k
        const long long n = (long long)std::floor(t / tau + 1e-9);
        const Superoperator phi = interaction_map(model, tau);
        CVector v = vec(rho0);
        for (long long s = 0; s < n; ++s)
            v = phi.M * v;
        CMatrix rho = unvec(v, model.system.d);
        rho = 0.5 * (rho + rho.adjoint().eval());
        double err = 0.5 * trace_norm(rho - target);
        out.rows.push_back({tau, n, err});
        lx.push_back(std::log(tau));
        ly.push_back(std::log(std::max(err, 1e-300)));
    }
    out.slope = taus.size() >= 2 ? least_squares_slope(lx, ly) : 0.0;
    return out;
}

EquilibriumStudy return_to_equilibrium(const ModelSpec& model, const CMatrix& rho0,
                                       const std::vector<double>& t_grid) {
    validate(model);
    require_density(rho0);
    if (rho0.rows() != model.system.d)
        throw validation_error("return_to_equilibrium: state dimension mismatch");
    if (t_grid.empty())
        throw validation_error("return_to_equilibrium: need at least one time");
    for (size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0))
            throw validation_error("return_to_equilibrium: times must be nonnegative");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw validation_error("return_to_equilibrium: times must be strictly ascending");
    }

    const Superoperator Lstar = lindblad_schrodinger(model);
    StationaryStates st = stationary_states(Lstar);
    if (st.null_dim != 1)
        throw validation_error("return_to_equilibrium: stationary state not unique, null-space "
                               "dimension " +
                               std::to_string(st.null_dim));
    if (st.states.empty())
        throw numeric_error("return_to_equilibrium: invariant direction is traceless");

    EquilibriumStudy out;
    out.stationary = st.states.front();
    out.residual = max_abs(Lstar.apply(out.stationary));
    out.gap = spectral_gap(Lstar);
    out.rows.reserve(t_grid.size());

    std::vector<double> fx, fy;
    for (double t : t_grid) {
        CMatrix rho = evolve(Lstar, rho0, t);
        double dist = 0.5 * trace_norm(rho - out.stationary);
        out.rows.push_back({t, dist});
        if (dist >= 1e-8 && dist <= 1e-2) {
            fx.push_back(t);
            fy.push_back(std::log(dist));
        }
    }
    out.fit_points = int(fx.size());
    if (out.fit_points >= 2)
        out.rate = -least_squares_slope(fx, fy);
    return out;
}

} // namespace qlv
