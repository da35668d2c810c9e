// test_numkit.cpp -- kernels against closed forms and series oracles
#include <limits>

#include "qlv/errors.hpp"
#include "qlv/numkit.hpp"

#include "check.hpp"
#include "testutil.hpp"

using namespace qlv;
using testkit::mat_exp_series;
using testkit::random_density;
using testkit::random_hermitian;
using testkit::random_matrix;

static void test_mat_exp() {
    CHECK_NEAR(max_abs(mat_exp(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3)), 0.0, 1e-15);

    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = Complex(0.3, -0.2);
    D(1, 1) = Complex(-1.1, 0.7);
    CMatrix E = mat_exp(D);
    CHECK_NEAR(std::abs(E(0, 0) - std::exp(D(0, 0))), 0.0, 1e-14);
    CHECK_NEAR(std::abs(E(1, 1) - std::exp(D(1, 1))), 0.0, 1e-14);
    CHECK_NEAR(std::abs(E(0, 1)) + std::abs(E(1, 0)), 0.0, 1e-15);

    // quarter-turn generated by sigma_x lands on -i sigma_x
    CMatrix sx = CMatrix::Zero(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    CMatrix Q = mat_exp(CMatrix(Complex(0.0, -1.5707963267948966) * sx));
    CMatrix want = Complex(0.0, -1.0) * sx;
    CHECK_NEAR(max_abs(Q - want), 0.0, 1e-13);
    CHECK_NEAR(max_abs(Q - mat_exp_series(CMatrix(Complex(0.0, -1.5707963267948966) * sx))), 0.0,
               1e-13);

    // nilpotent: series terminates after the linear term
    CMatrix Nl = CMatrix::Zero(2, 2);
    Nl(0, 1) = 4.0;
    CHECK_NEAR(max_abs(mat_exp(Nl) - (CMatrix::Identity(2, 2) + Nl)), 0.0, 1e-14);

    Rng rng(2026);
    for (double scale : {0.3, 2.0, 12.0}) {
        CMatrix A = random_matrix(rng, 4, 4, scale);
        // both routes lose digits through squaring, so compare relative to
        // the magnitude of the result
        CMatrix E1 = mat_exp(A);
        double floor = std::max(1.0, max_abs(E1));
        CHECK_NEAR(max_abs(E1 - mat_exp_series(A)) / floor, 0.0, 1e-12);
        CMatrix small = random_matrix(rng, 4, 4, 1.0);
        CHECK_NEAR(max_abs(CMatrix(mat_exp(small) * mat_exp(CMatrix(-small))) -
                           CMatrix::Identity(4, 4)),
                   0.0, 1e-12);
        CMatrix H = random_hermitian(rng, 5, scale);
        CMatrix U = mat_exp(CMatrix(Complex(0.0, -1.0) * H));
        CHECK_NEAR(max_abs(CMatrix(U * U.adjoint()) - CMatrix::Identity(5, 5)), 0.0, 1e-12);
    }

    CHECK_THROWS(mat_exp(CMatrix::Zero(2, 3)), validation_error);
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(mat_exp(bad), validation_error);
}

static void test_kron() {
    Rng rng(11);
    CMatrix B = random_matrix(rng, 2, 2);
    CMatrix K = kron(CMatrix::Identity(2, 2), B);
    CHECK_NEAR(max_abs(K.block(0, 0, 2, 2) - B), 0.0, 1e-16);
    CHECK_NEAR(max_abs(K.block(2, 2, 2, 2) - B), 0.0, 1e-16);
    CHECK_NEAR(max_abs(K.block(0, 2, 2, 2)), 0.0, 1e-16);

    CMatrix A = random_matrix(rng, 3, 2);
    CHECK_NEAR(max_abs(kron(A, CMatrix::Identity(1, 1)) - A), 0.0, 1e-16);

    CMatrix n2 = CMatrix::Zero(2, 2);
    n2(0, 1) = 1.0;
    CMatrix s = CMatrix::Constant(1, 1, Complex(2.0, 0.0));
    CMatrix want = CMatrix::Zero(2, 2);
    want(0, 1) = 2.0;
    CHECK_NEAR(max_abs(kron(n2, s) - want), 0.0, 1e-16);

    // index law on a random pair
    CMatrix C = random_matrix(rng, 2, 3);
    CMatrix D = random_matrix(rng, 3, 2);
    CMatrix KK = kron(C, D);
    bool all_ok = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 2; ++l)
                    if (std::abs(KK(i * 3 + k, j * 2 + l) - C(i, j) * D(k, l)) > 1e-16)
                        all_ok = false;
    CHECK(all_ok);
}

static void test_partial_trace() {
    Rng rng(12);
    CMatrix A = random_matrix(rng, 3, 3);
    CMatrix B = random_matrix(rng, 4, 4);
    CMatrix pt = partial_trace_right(kron(A, B), 3, 4);
    CHECK_NEAR(max_abs(pt - CMatrix(B.trace() * A)), 0.0, 1e-14);

    CMatrix M = random_matrix(rng, 4, 4);
    CMatrix R = partial_trace_right(M, 2, 2);
    CHECK_NEAR(std::abs(R.trace() - M.trace()), 0.0, 1e-14);
    // explicit index-sum oracle
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Complex s = M(a * 2, b * 2) + M(a * 2 + 1, b * 2 + 1);
            CHECK_NEAR(std::abs(R(a, b) - s), 0.0, 1e-15);
        }

    CHECK_THROWS(partial_trace_right(M, 3, 2), validation_error);
}

static void test_sandwich_and_vec() {
    Rng rng(13);
    CMatrix X = random_matrix(rng, 2, 2);
    // column stacking: (0,0), (1,0), (0,1), (1,1)
    CVector v = vec(X);
    CHECK_NEAR(std::abs(v(1) - X(1, 0)), 0.0, 1e-16);
    CHECK_NEAR(std::abs(v(2) - X(0, 1)), 0.0, 1e-16);
    CHECK_NEAR(max_abs(unvec(v, 2) - X), 0.0, 1e-16);

    CHECK_NEAR(max_abs(sandwich_superop(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) -
                       CMatrix::Identity(4, 4)),
               0.0, 1e-16);

    CMatrix A = random_matrix(rng, 2, 2);
    CHECK_NEAR(max_abs(unvec(CVector(sandwich_superop(A, CMatrix::Identity(2, 2)) * vec(X)), 2) -
                       CMatrix(A * X)),
               0.0, 1e-14);

    CMatrix A3 = random_matrix(rng, 3, 3);
    CMatrix B3 = random_matrix(rng, 3, 3);
    CMatrix X3 = random_matrix(rng, 3, 3);
    CHECK_NEAR(max_abs(unvec(CVector(sandwich_superop(A3, B3) * vec(X3)), 3) -
                       CMatrix(A3 * X3 * B3)),
               0.0, 1e-13);

    CMatrix C3 = random_matrix(rng, 3, 3);
    CMatrix D3 = random_matrix(rng, 3, 3);
    CHECK_NEAR(max_abs(CMatrix(sandwich_superop(A3, B3) * sandwich_superop(C3, D3)) -
                       sandwich_superop(CMatrix(A3 * C3), CMatrix(D3 * B3))),
               0.0, 1e-12);

    CHECK_THROWS(sandwich_superop(A3, A), validation_error);
}

static void test_herm_eig() {
    CMatrix D = CMatrix::Zero(3, 3);
    D(0, 0) = 2.0;
    D(1, 1) = -1.0;
    D(2, 2) = 0.5;
    auto [w, V] = herm_eig(D);
    CHECK_NEAR(w(0), -1.0, 1e-14);
    CHECK_NEAR(w(1), 0.5, 1e-14);
    CHECK_NEAR(w(2), 2.0, 1e-14);

    CMatrix sx = CMatrix::Zero(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    auto [wx, Vx] = herm_eig(sx);
    CHECK_NEAR(wx(0), -1.0, 1e-14);
    CHECK_NEAR(wx(1), 1.0, 1e-14);

    auto [wi, Vi] = herm_eig(CMatrix::Identity(4, 4));
    CHECK_NEAR(wi.minCoeff(), 1.0, 1e-14);
    CHECK_NEAR(wi.maxCoeff(), 1.0, 1e-14);

    Rng rng(14);
    CMatrix H = random_hermitian(rng, 5, 2.0);
    auto [wh, Vh] = herm_eig(H);
    CMatrix rec = Vh * wh.cast<Complex>().asDiagonal() * Vh.adjoint();
    CHECK_NEAR(max_abs(rec - H), 0.0, 1e-12);
    CHECK_NEAR(max_abs(CMatrix(Vh.adjoint() * Vh) - CMatrix::Identity(5, 5)), 0.0, 1e-12);

    CMatrix nh = random_matrix(rng, 3, 3);
    CHECK_THROWS(herm_eig(nh), validation_error);
}

static void test_null_space() {
    auto full = null_space(CMatrix::Zero(3, 3), 1e-10);
    CHECK(full.size() == 3);
    auto empty = null_space(CMatrix::Identity(3, 3), 1e-10);
    CHECK(empty.size() == 0);

    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = 1.0;
    auto ns = null_space(D, 1e-10);
    CHECK(ns.size() == 1);
    if (ns.size() == 1)
        CHECK_NEAR(std::abs(ns[0](1)), 1.0, 1e-12);

    // wide matrix, kernel dimension at least 1 by counting
    Rng rng(15);
    CMatrix C = random_matrix(rng, 3, 4);
    auto nsc = null_space(C, 1e-10);
    CHECK(nsc.size() >= 1);
    double scale = max_abs(C);
    for (size_t i = 0; i < nsc.size(); ++i) {
        CHECK_NEAR((C * nsc[i]).cwiseAbs().maxCoeff(), 0.0, 10.0 * 1e-10 * scale + 1e-13);
        for (size_t j = 0; j < nsc.size(); ++j) {
            double want = i == j ? 1.0 : 0.0;
            CHECK_NEAR(std::abs(nsc[i].dot(nsc[j])), want, 1e-12);
        }
    }
}

static void test_trace_norm() {
    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = -2.0;
    CHECK_NEAR(trace_norm(D), 3.0, 1e-14);
    CHECK_NEAR(trace_norm(CMatrix::Zero(3, 3)), 0.0, 1e-16);

    Rng rng(16);
    CMatrix H = random_hermitian(rng, 4, 1.5);
    auto [w, V] = herm_eig(H);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += std::abs(w(i));
    CHECK_NEAR(trace_norm(H), s, 1e-12);
}

static void test_density_and_misc() {
    Rng rng(17);
    require_density(random_density(rng, 3));

    CMatrix rho = random_density(rng, 2);
    CHECK_THROWS(require_density(CMatrix(2.0 * rho)), validation_error);
    CMatrix neg = CMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS(require_density(neg), validation_error);

    CMatrix nan = CMatrix::Zero(1, 1);
    nan(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS(require_finite(nan, "test"), validation_error);

    std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    std::vector<double> ys{0.5, 2.5, 4.5, 6.5};
    CHECK_NEAR(least_squares_slope(xs, ys), 2.0, 1e-14);
    CHECK_THROWS(least_squares_slope({1.0, 1.0}, {0.0, 1.0}), validation_error);

    CMatrix M = CMatrix::Zero(2, 2);
    M(1, 0) = Complex(3.0, -4.0);
    CHECK_NEAR(max_abs(M), 5.0, 1e-15);
}

int main() {
    test_mat_exp();
    test_kron();
    test_partial_trace();
    test_sandwich_and_vec();
    test_herm_eig();
    test_null_space();
    test_trace_norm();
    test_density_and_misc();
    return testkit::finish("test_numkit");
}
