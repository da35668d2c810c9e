// test_chain.cpp -- ampliations and the brute-force reduced-dynamics oracle
#include <cmath>

#include "qlv/chain.hpp"
#include "qlv/dynamics.hpp"
#include "qlv/errors.hpp"

#include "check.hpp"
#include "modelgen.hpp"

using namespace qlv;

static void test_ampliate() {
    const int k = 2, d = 2, nl = 3;
    const int D = d * nl * nl;

    ChainOperator full = ampliate(CMatrix::Identity(nl, nl), 1, k, d, nl);
    CHECK_NEAR(max_abs(full.op - CMatrix::Identity(D, D)), 0.0, 0.0);

    // a^0_1 on site 2 lifts the site-2 digit from 0 to 1 and nothing else
    CMatrix a01 = CMatrix::Zero(nl, nl);
    a01(1, 0) = 1.0;
    ChainOperator lift = ampliate(a01, 2, k, d, nl);
    for (int sys = 0; sys < d; ++sys)
        for (int c1 = 0; c1 < nl; ++c1) {
            int from = sys * nl * nl + c1 * nl + 0;
            int to = sys * nl * nl + c1 * nl + 1;
            CVector e = CVector::Zero(D);
            e(from) = 1.0;
            CVector out = lift.op * e;
            CHECK_NEAR(std::abs(out(to) - Complex(1.0, 0.0)), 0.0, 0.0);
            out(to) = 0.0;
            CHECK_NEAR(out.cwiseAbs().maxCoeff(), 0.0, 0.0);
        }

    // different sites commute exactly
    Rng rng(61);
    CMatrix A = testkit::random_matrix(rng, nl, nl);
    CMatrix B = testkit::random_matrix(rng, nl, nl);
    CMatrix A1 = ampliate(A, 1, k, d, nl).op;
    CMatrix B2 = ampliate(B, 2, k, d, nl).op;
    CHECK_NEAR(max_abs(CMatrix(A1 * B2) - CMatrix(B2 * A1)), 0.0, 1e-14);

    // joint operator on site 1 is a plain left kron factor
    CMatrix J = testkit::random_matrix(rng, d * nl, d * nl);
    CHECK_NEAR(max_abs(ampliate(J, 1, k, d, nl).op - kron(J, CMatrix::Identity(nl, nl))), 0.0,
               0.0);
    // single-site operator on the last site is a plain right kron factor
    CHECK_NEAR(max_abs(ampliate(A, 2, k, d, nl).op - kron(CMatrix::Identity(d * nl, d * nl), A)),
               0.0, 0.0);

    CHECK_THROWS(ampliate(A, 3, k, d, nl), validation_error);
    CHECK_THROWS(ampliate(testkit::random_matrix(rng, 4, 4), 1, k, d, nl), validation_error);
}

static void test_repeated_product() {
    Rng rng(62);
    ModelSpec m = testkit::random_model(rng, 2, 2, 0.7);
    const double tau = 0.2;

    ChainOperator v1 = repeated_product(m, tau, 1);
    CHECK_NEAR(max_abs(v1.op - interaction_unitary(m, tau)), 0.0, 1e-14);

    ChainOperator v3 = repeated_product(m, tau, 3);
    CHECK_NEAR(max_abs(CMatrix(v3.op * v3.op.adjoint()) -
                       CMatrix::Identity(v3.op.rows(), v3.op.cols())),
               0.0, 1e-11);

    // decoupled chain factorizes into commuting phases
    ModelSpec dec = m;
    for (auto& v : dec.system.V)
        v.setZero();
    ChainOperator v2 = repeated_product(dec, tau, 2);
    const int nl = dec.bath.N + 1;
    CMatrix HR = CMatrix::Zero(nl, nl);
    for (int i = 0; i < nl; ++i)
        HR(i, i) = dec.bath.gamma[size_t(i)];
    CMatrix us = mat_exp(CMatrix(Complex(0.0, -2.0 * tau) * dec.system.H_S));
    CMatrix ur = mat_exp(CMatrix(Complex(0.0, -tau) * HR));
    CHECK_NEAR(max_abs(v2.op - kron(us, kron(ur, ur))), 0.0, 1e-13);

    CHECK_THROWS(repeated_product(m, tau, 0), validation_error);
    CHECK_THROWS(repeated_product(m, tau, 11), resource_error);
}

static void test_reduced_state() {
    Rng rng(63);
    ModelSpec m = testkit::random_model(rng, 2, 1, 0.8);
    CMatrix rho0 = testkit::random_density(rng, 2);
    const double tau = 0.15;

    CHECK_NEAR(max_abs(reduced_state_after(m, tau, rho0, 0) - rho0), 0.0, 1e-14);

    // decoupled: pure system rotation
    ModelSpec dec = m;
    for (auto& v : dec.system.V)
        v.setZero();
    const int k = 3;
    CMatrix us = mat_exp(CMatrix(Complex(0.0, -double(k) * tau) * dec.system.H_S));
    CHECK_NEAR(max_abs(reduced_state_after(dec, tau, rho0, k) -
                       CMatrix(us * rho0 * us.adjoint())),
               0.0, 1e-13);

    // the central oracle identity against the iterated channel
    for (int N : {1, 2}) {
        ModelSpec mm = testkit::random_model(rng, 2, N, 0.6);
        Superoperator phi = interaction_map(mm, tau);
        CMatrix r0 = testkit::random_density(rng, 2);
        CMatrix iterated = r0;
        for (int steps = 1; steps <= 4; ++steps) {
            iterated = phi.apply(iterated);
            CMatrix brute = reduced_state_after(mm, tau, r0, steps);
            CHECK_NEAR(max_abs(brute - iterated), 0.0, 1e-10);
            CHECK_NEAR(std::abs(brute.trace() - Complex(1.0, 0.0)), 0.0, 1e-12);
            CHECK_NEAR(max_abs(brute - brute.adjoint()), 0.0, 1e-12);
        }
    }

    // untouched future sites cannot influence the reduced state
    ModelSpec m2 = testkit::random_model(rng, 2, 1, 0.7);
    CMatrix r0 = testkit::random_density(rng, 2);
    std::vector<CMatrix> fresh(3, bath_state(m2.bath));
    std::vector<CMatrix> tampered = fresh;
    tampered[2] = testkit::random_density(rng, 2);
    CMatrix a = reduced_state_after_sites(m2, tau, r0, 2, fresh);
    CMatrix b = reduced_state_after_sites(m2, tau, r0, 2, tampered);
    CHECK_NEAR(max_abs(a - b), 0.0, 1e-13);

    std::vector<CMatrix> swapped = fresh;
    swapped[1] = testkit::random_density(rng, 2);
    std::vector<CMatrix> swapped2{swapped[0], swapped[2], swapped[1]};
    CMatrix c = reduced_state_after_sites(m2, tau, r0, 1, swapped);
    CMatrix e = reduced_state_after_sites(m2, tau, r0, 1, swapped2);
    CHECK_NEAR(max_abs(c - e), 0.0, 1e-13);

    CHECK_THROWS(reduced_state_after_sites(m2, tau, r0, 4, fresh), validation_error);
    std::vector<CMatrix> wrong(2, CMatrix::Identity(3, 3));
    CHECK_THROWS(reduced_state_after_sites(m2, tau, r0, 1, wrong), validation_error);
}

int main() {
    test_ampliate();
    test_repeated_product();
    test_reduced_state();
    return testkit::finish("test_chain");
}
