// test_gns.cpp -- GNS basis, coefficient extraction, tau -> 0 limits
#include <cmath>

#include "qlv/errors.hpp"
#include "qlv/gns.hpp"

#include "check.hpp"
#include "modelgen.hpp"

using namespace qlv;

static void test_basis() {
    // weights (3/4, 1/4): closed-form diagonal element and off-diagonals
    GnsBasis b = build_gns_basis({0.75, 0.25});
    CHECK_NEAR(max_abs(b.at(0, 0) - CMatrix::Identity(2, 2)), 0.0, 0.0);

    const double s3 = std::sqrt(3.0);
    CHECK_NEAR(std::abs(b.at(1, 1)(0, 0) - Complex(1.0 / s3, 0.0)), 0.0, 1e-14);
    CHECK_NEAR(std::abs(b.at(1, 1)(1, 1) - Complex(-s3, 0.0)), 0.0, 1e-14);
    CHECK_NEAR(std::abs(b.at(1, 1)(0, 1)) + std::abs(b.at(1, 1)(1, 0)), 0.0, 0.0);

    // X^0_1 = (1/sqrt(beta_0)) |e_1><e_0| and X^1_0 = (1/sqrt(beta_1)) |e_0><e_1|
    CHECK_NEAR(std::abs(b.at(0, 1)(1, 0) - Complex(2.0 / s3, 0.0)), 0.0, 1e-14);
    CHECK_NEAR(std::abs(b.at(1, 0)(0, 1) - Complex(2.0, 0.0)), 0.0, 1e-14);

    // Gram matrix over all (N+1)^2 elements for uneven weights
    std::vector<double> w{0.4, 0.25, 0.2, 0.15};
    GnsBasis b4 = build_gns_basis(w);
    CMatrix rho = CMatrix::Zero(4, 4);
    for (int p = 0; p < 4; ++p)
        rho(p, p) = w[size_t(p)];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    Complex g = (rho * b4.at(i, j).adjoint() * b4.at(k, l)).trace();
                    double want = (i == k && j == l) ? 1.0 : 0.0;
                    CHECK_NEAR(std::abs(g - Complex(want, 0.0)), 0.0, 1e-12);
                }

    CHECK_THROWS(build_gns_basis({0.5, 0.6}), validation_error);
    CHECK_THROWS(build_gns_basis({1.2, -0.2}), validation_error);
    CHECK_THROWS(build_gns_basis({1.0}), validation_error);
}

static void test_coefficients_identity_and_decoupled() {
    std::vector<double> w{0.5, 0.3, 0.2};
    GnsBasis b = build_gns_basis(w);
    const int d = 2;
    CMatrix I = CMatrix::Identity(d * 3, d * 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    CMatrix c = gns_coefficient(I, b, i, j, k, l);
                    double want = (i == k && j == l) ? 1.0 : 0.0;
                    CHECK_NEAR(max_abs(c - want * CMatrix::Identity(d, d)), 0.0, 1e-14);
                }

    // decoupled model: bath-diagonal U pairs only matching basis positions
    Rng rng(42);
    ModelSpec m = testkit::random_model(rng, 2, 2, 0.5);
    for (auto& v : m.system.V)
        v.setZero();
    const double tau = 0.3;
    CMatrix U = interaction_unitary(m, tau);
    GnsBasis bm = build_gns_basis(m.bath.weights);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                CHECK_NEAR(max_abs(gns_coefficient(U, bm, i, j, 0, 0)), 0.0, 1e-13);

    Complex scalar = 0.0;
    for (int p = 0; p <= m.bath.N; ++p)
        scalar += m.bath.weights[size_t(p)] *
                  std::exp(Complex(0.0, -tau * m.bath.gamma[size_t(p)]));
    CMatrix want = mat_exp(CMatrix(Complex(0.0, -tau) * m.system.H_S)) * scalar;
    CHECK_NEAR(max_abs(gns_coefficient(U, bm, 0, 0, 0, 0) - want), 0.0, 1e-13);

    CHECK_THROWS(gns_coefficient(U, bm, 0, 0, 0, 3), validation_error);
}

static void test_representation_property() {
    Rng rng(43);
    ModelSpec m = testkit::random_model(rng, 2, 1, 0.7);
    GnsBasis b = build_gns_basis(m.bath.weights);
    CMatrix U1 = interaction_unitary(m, 0.2);
    CMatrix U2 = interaction_unitary(m, 0.45);
    CoeffTable t1 = coefficient_table(U1, b, m.system.d, 0.2);
    CoeffTable t2 = coefficient_table(U2, b, m.system.d, 0.45);
    CoeffTable t12 = coefficient_table(CMatrix(U1 * U2), b, m.system.d, 0.65);

    const int nl = m.bath.N + 1;
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
            for (int k = 0; k < nl; ++k)
                for (int l = 0; l < nl; ++l) {
                    CMatrix sum = CMatrix::Zero(m.system.d, m.system.d);
                    for (int mm = 0; mm < nl; ++mm)
                        for (int nn = 0; nn < nl; ++nn)
                            sum += t1.at(mm, nn, k, l) * t2.at(i, j, mm, nn);
                    CHECK_NEAR(max_abs(t12.at(i, j, k, l) - sum), 0.0, 1e-10);
                }
}

static ModelSpec tiny_scalar_model() {
    ModelSpec m;
    m.system.d = 1;
    m.system.H_S = CMatrix::Zero(1, 1);
    m.system.V = {CMatrix::Constant(1, 1, Complex(1.0, 0.0))};
    m.bath.N = 1;
    m.bath.gamma = {0.0, 1.0};
    m.bath.weights = {2.0 / 3.0, 1.0 / 3.0};
    return m;
}

static void test_theoretical_limits() {
    ModelSpec m = tiny_scalar_model();
    LimitTable L = theoretical_limits(m);

    // dt entry: -i H_S - i sum beta_p gamma_p - (beta_0 V*V + beta_1 V V*)/2
    // = -i/3 - 1/2 for the scalar model
    CHECK_NEAR(std::abs(L.at(0, 0, 0, 0)(0, 0) - Complex(-0.5, -1.0 / 3.0)), 0.0, 1e-14);
    CHECK_NEAR(std::abs(L.at(1, 0, 0, 0)(0, 0) - Complex(0.0, -1.0 / std::sqrt(3.0))), 0.0,
               1e-14);
    CHECK_NEAR(std::abs(L.at(0, 1, 0, 0)(0, 0) - Complex(0.0, -std::sqrt(2.0 / 3.0))), 0.0,
               1e-14);
    CHECK_NEAR(std::abs(L.at(0, 0, 1, 0)(0, 0) - Complex(0.0, -1.0 / std::sqrt(3.0))), 0.0,
               1e-14);
    CHECK_NEAR(std::abs(L.at(0, 0, 0, 1)(0, 0) - Complex(0.0, -std::sqrt(2.0 / 3.0))), 0.0,
               1e-14);

    CHECK_NEAR(L.eps_at(0, 0, 0, 0), 1.0, 0.0);
    CHECK_NEAR(L.eps_at(1, 0, 0, 0), 0.5, 0.0);
    CHECK_NEAR(L.eps_at(0, 0, 0, 1), 0.5, 0.0);
    CHECK_NEAR(L.eps_at(1, 0, 0, 1), 0.0, 0.0);
    CHECK_NEAR(L.eps_at(1, 1, 1, 1), 0.0, 0.0);

    // both indices excited: identically zero
    Rng rng(44);
    ModelSpec m2 = testkit::random_model(rng, 2, 2, 0.8);
    LimitTable L2 = theoretical_limits(m2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    if ((i == 0 && j == 0) || (k == 0 && l == 0))
                        continue;
                    CHECK_NEAR(max_abs(L2.at(i, j, k, l)), 0.0, 0.0);
                }

    // energy shift: H_S -> H_S + cI moves only the dt entry, by -ic
    ModelSpec shifted = m2;
    const double c = 0.83;
    shifted.system.H_S += c * CMatrix::Identity(2, 2);
    LimitTable Ls = theoretical_limits(shifted);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    CMatrix diff = Ls.at(i, j, k, l) - L2.at(i, j, k, l);
                    if (i == 0 && j == 0 && k == 0 && l == 0)
                        CHECK_NEAR(max_abs(diff - CMatrix(Complex(0.0, -c) *
                                                          CMatrix::Identity(2, 2))),
                                   0.0, 1e-14);
                    else
                        CHECK_NEAR(max_abs(diff), 0.0, 0.0);
                }
}

static void test_empirical_limits() {
    // the slowest families ((0,0|k,k) and mirror) converge like sqrt(tau),
    // so the ladder has to reach 2^-14 for a 5e-3 worst case
    std::vector<double> taus;
    for (int k = 8; k <= 14; ++k)
        taus.push_back(std::pow(2.0, -k));

    Rng rng(45);
    ModelSpec m = testkit::random_model(rng, 2, 1, 0.3);
    EmpiricalLimits emp = empirical_limits(m, taus);

    const int nl = m.bath.N + 1;
    double worst = 0.0;
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
            for (int k = 0; k < nl; ++k)
                for (int l = 0; l < nl; ++l)
                    worst = std::max(worst, emp.at(i, j, k, l).residual);
    CHECK(worst <= 5e-3);

    // dt entry converges at first order, and its ladder decreases
    const LimitEstimate& dt = emp.at(0, 0, 0, 0);
    CHECK(dt.fitted_order >= 0.9);
    for (size_t s = 1; s < dt.residuals.size(); ++s)
        CHECK(dt.residuals[s] <= dt.residuals[s - 1] * 1.05);

    // Richardson beats the raw value on the dt entry
    CHECK(dt.richardson_residual <= dt.residual);

    // half-power family decreases monotonically too
    const LimitEstimate& up = emp.at(1, 0, 0, 0);
    for (size_t s = 1; s < up.residuals.size(); ++s)
        CHECK(up.residuals[s] <= up.residuals[s - 1] * 1.05);

    // decoupled model: every entry that moves the bath off its diagonal is
    // exactly zero; bath-diagonal entries (same position, or diagonal pairs
    // like (1,1|0,0)) keep the O(tau) phase the dt entry has
    ModelSpec dec = m;
    for (auto& v : dec.system.V)
        v.setZero();
    EmpiricalLimits de = empirical_limits(dec, taus);
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
            for (int k = 0; k < nl; ++k)
                for (int l = 0; l < nl; ++l) {
                    if (i == k && j == l)
                        continue;
                    if (i == j && k == l)
                        continue;
                    CHECK(de.at(i, j, k, l).residual <= 1e-10);
                }

    CHECK_THROWS(empirical_limits(m, {0.6, 0.3, 0.15, 0.075}), validation_error);
    CHECK_THROWS(empirical_limits(m, {0.4, 0.2, 0.1}), validation_error);
    CHECK_THROWS(empirical_limits(m, {0.1, 0.2, 0.05, 0.025}), validation_error);
}

int main() {
    test_basis();
    test_coefficients_identity_and_decoupled();
    test_representation_property();
    test_theoretical_limits();
    test_empirical_limits();
    return testkit::finish("test_gns");
}
