// chain.cpp
#include "qlv/chain.hpp"

#include <algorithm>
#include <string>

#include "qlv/errors.hpp"

namespace qlv {

namespace {

// total dimension d * levels^k with the hard cap that keeps dense algebra sane
Eigen::Index chain_dim(int k, int d, int n_levels) {
    if (k < 0)
        throw validation_error("chain: negative site count");
    if (d < 1 || n_levels < 2)
        throw validation_error("chain: bad local dimensions");
    long long dim = d;
    for (int s = 0; s < k; ++s) {
        dim *= n_levels;
        if (dim > 65536)
            throw resource_error("chain: dimension " + std::to_string(dim) +
                                 " exceeds the 65536 cap at site " + std::to_string(s + 1));
    }
    return Eigen::Index(dim);
}

} // namespace

ChainOperator ampliate(const CMatrix& A, int site, int k, int d, int n_levels) {
    const Eigen::Index D = chain_dim(k, d, n_levels);
    if (site < 1 || site > k)
        throw validation_error("ampliate: site out of range");
    const bool joint = A.rows() == Eigen::Index(d) * n_levels;
    if (!joint && A.rows() != Eigen::Index(n_levels))
        throw validation_error("ampliate: operator must act on one site or on system+site");
    if (A.cols() != A.rows())
        throw validation_error("ampliate: operator must be square");
    require_finite(A, "ampliate operand");

    // index layout: system digit most significant, then sites 1..k left to right
    long long stride = 1;
    for (int s = site; s < k; ++s)
        stride *= n_levels;
    const long long sys_stride = D / d;

    ChainOperator out;
    out.k = k;
    out.d = d;
    out.levels = n_levels;
    out.op = CMatrix::Zero(D, D);
    for (Eigen::Index col = 0; col < D; ++col) {
        const long long sys_c = col / sys_stride;
        const long long dig_c = (col / stride) % n_levels;
        if (joint) {
            const Eigen::Index a_col = Eigen::Index(sys_c * n_levels + dig_c);
            const Eigen::Index base = col - Eigen::Index(sys_c * sys_stride + dig_c * stride);
            for (long long sys_r = 0; sys_r < d; ++sys_r)
                for (long long dig_r = 0; dig_r < n_levels; ++dig_r) {
                    const Complex v = A(Eigen::Index(sys_r * n_levels + dig_r), a_col);
                    if (v == Complex(0.0, 0.0))
                        continue;
                    out.op(base + Eigen::Index(sys_r * sys_stride + dig_r * stride), col) = v;
                }
        } else {
            const Eigen::Index base = col - Eigen::Index(dig_c * stride);
            for (long long dig_r = 0; dig_r < n_levels; ++dig_r) {
                const Complex v = A(Eigen::Index(dig_r), Eigen::Index(dig_c));
                if (v == Complex(0.0, 0.0))
                    continue;
                out.op(base + Eigen::Index(dig_r * stride), col) = v;
            }
        }
    }
    return out;
}

ChainOperator repeated_product(const ModelSpec& model, double tau, int k) {
    if (k < 1)
        throw validation_error("repeated_product: need at least one step");
    const int d = model.system.d;
    const int nl = model.bath.N + 1;
    const Eigen::Index D = chain_dim(k, d, nl);
    const CMatrix U = interaction_unitary(model, tau);

    ChainOperator out;
    out.k = k;
    out.d = d;
    out.levels = nl;
    out.op = CMatrix::Identity(D, D);
    for (int site = 1; site <= k; ++site)
        out.op = ampliate(U, site, k, d, nl).op * out.op;
    return out;
}

CMatrix reduced_state_after(const ModelSpec& model, double tau, const CMatrix& rho0, int k) {
    std::vector<CMatrix> sites(size_t(std::max(k, 0)), bath_state(model.bath));
    return reduced_state_after_sites(model, tau, rho0, k, sites);
}

CMatrix reduced_state_after_sites(const ModelSpec& model, double tau, const CMatrix& rho0,
                                  int steps, const std::vector<CMatrix>& site_states) {
    validate(model);
    const int d = model.system.d;
    const int nl = model.bath.N + 1;
    const int k = int(site_states.size());
    if (steps < 0 || steps > k)
        throw validation_error("reduced_state_after_sites: steps must lie in [0, sites]");
    if (rho0.rows() != d || rho0.cols() != d)
        throw validation_error("reduced_state_after_sites: system state shape mismatch");
    require_finite(rho0, "initial system state");
    for (const auto& s : site_states) {
        if (s.rows() != nl || s.cols() != nl)
            throw validation_error("reduced_state_after_sites: site state shape mismatch");
        require_finite(s, "site state");
    }
    const Eigen::Index D = chain_dim(k, d, nl);

    CMatrix rho = rho0;
    for (const auto& s : site_states)
        rho = kron(rho, s);
    if (rho.rows() != D)
        throw numeric_error("reduced_state_after_sites: dimension bookkeeping failed");

    if (steps > 0) {
        const CMatrix U = interaction_unitary(model, tau);
        for (int site = 1; site <= steps; ++site) {
            CMatrix Us = ampliate(U, site, k, d, nl).op;
            rho = Us * rho * Us.adjoint();
        }
    }
    return partial_trace_right(rho, d, Eigen::Index(D / d));
}

} // namespace qlv
