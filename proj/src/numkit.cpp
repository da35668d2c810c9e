// numkit.cpp
#include "qlv/numkit.hpp"

#include <cmath>
#include <string>

namespace qlv {

double max_abs(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    return A.cwiseAbs().maxCoeff();
}

void require_finite(const CMatrix& A, const char* where) {
    if (!A.allFinite())
        throw validation_error(std::string(where) + ": matrix has NaN or Inf entries");
}

void require_density(const CMatrix& rho, double tol) {
    if (rho.rows() != rho.cols())
        throw validation_error("require_density: matrix not square");
    require_finite(rho, "require_density");
    double herm = max_abs(rho - rho.adjoint());
    if (herm > tol)
        throw validation_error("require_density: not Hermitian, deviation " + std::to_string(herm));
    double tr_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (tr_dev > tol)
        throw validation_error("require_density: trace deviates from 1 by " + std::to_string(tr_dev));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
    double lo = es.eigenvalues().minCoeff();
    if (lo < -tol)
        throw validation_error("require_density: negative eigenvalue " + std::to_string(lo));
}

CMatrix mat_exp(const CMatrix& A) {
    if (A.rows() != A.cols())
        throw validation_error("mat_exp: matrix not square");
    if (A.rows() < 1)
        throw validation_error("mat_exp: empty matrix");
    require_finite(A, "mat_exp");

    // degree-13 Pade coefficients and its 1-norm switch point
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const auto n = A.rows();
    double nrm = A.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (nrm > theta13)
        s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));

    CMatrix As = A / std::pow(2.0, s);
    CMatrix I = CMatrix::Identity(n, n);
    CMatrix A2 = As * As;
    CMatrix A4 = A2 * A2;
    CMatrix A6 = A4 * A2;

    CMatrix U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                      b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    CMatrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
                b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;

    CMatrix F = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k)
        F = F * F;
    return F;
}

CMatrix kron(const CMatrix& A, const CMatrix& B) {
    CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

CMatrix partial_trace_right(const CMatrix& M, int d, int m) {
    if (d < 1 || m < 1 || M.rows() != M.cols() || M.rows() != Eigen::Index(d) * m)
        throw validation_error("partial_trace_right: shape mismatch");
    CMatrix out = CMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int p = 0; p < m; ++p)
                out(a, b) += M(Eigen::Index(a) * m + p, Eigen::Index(b) * m + p);
    return out;
}

CMatrix env_block(const CMatrix& M, int d, int m, int p, int q) {
    if (M.rows() != Eigen::Index(d) * m || M.rows() != M.cols())
        throw validation_error("env_block: shape mismatch");
    if (p < 0 || p >= m || q < 0 || q >= m)
        throw validation_error("env_block: environment index out of range");
    CMatrix out(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            out(r, c) = M(Eigen::Index(r) * m + p, Eigen::Index(c) * m + q);
    return out;
}

CMatrix sandwich_superop(const CMatrix& A, const CMatrix& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw validation_error("sandwich_superop: dimension mismatch");
    return kron(B.transpose(), A);
}

std::pair<RVector, CMatrix> herm_eig(const CMatrix& A) {
    if (A.rows() != A.cols())
        throw validation_error("herm_eig: matrix not square");
    require_finite(A, "herm_eig");
    double dev = max_abs(A - A.adjoint());
    if (dev > 1e-10)
        throw validation_error("herm_eig: input not Hermitian, deviation " + std::to_string(dev));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (A + A.adjoint()));
    return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<CVector> null_space(const CMatrix& A, double tol) {
    if (tol <= 0.0)
        throw validation_error("null_space: tol must be positive");
    require_finite(A, "null_space");
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    std::vector<CVector> out;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        double sj = j < sv.size() ? sv(j) : 0.0;
        if (sj <= tol * smax)
            out.push_back(svd.matrixV().col(j));
    }
    return out;
}

double trace_norm(const CMatrix& A) {
    if (A.rows() != A.cols())
        throw validation_error("trace_norm: matrix not square");
    Eigen::JacobiSVD<CMatrix> svd(A);
    return svd.singularValues().sum();
}

CVector vec(const CMatrix& A) {
    CVector v(A.size());
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < A.cols(); ++c)
        for (Eigen::Index r = 0; r < A.rows(); ++r)
            v(idx++) = A(r, c);
    return v;
}

CMatrix unvec(const CVector& v, int d) {
    if (v.size() != Eigen::Index(d) * d)
        throw validation_error("unvec: length is not d^2");
    CMatrix A(d, d);
    Eigen::Index idx = 0;
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r)
            A(r, c) = v(idx++);
    return A;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("least_squares_slope: need two samples or more");
    double xm = 0, ym = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= double(x.size());
    ym /= double(x.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - xm) * (y[i] - ym);
        den += (x[i] - xm) * (x[i] - xm);
    }
    if (den == 0.0)
        throw validation_error("least_squares_slope: degenerate abscissae");
    return num / den;
}

} // namespace qlv
