// numkit.hpp -- dense complex linear-algebra kernels shared by every module.
//
// Conventions fixed here for the whole repo:
//   * vectorization is column-stacking, so sandwich_superop(A,B) = B^T (x) A
//   * tensor factors are ordered system (x) environment
//   * residuals are measured with the max-entry norm unless stated otherwise
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qlv/errors.hpp"

namespace qlv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// largest |entry|
double max_abs(const CMatrix& A);

// rejects NaN/Inf; `where` names the caller in the error message
void require_finite(const CMatrix& A, const char* where);

// Hermitian to `tol`, eigenvalues >= -tol, trace 1 to `tol`
void require_density(const CMatrix& rho, double tol = 1e-10);

// e^A, scaling-and-squaring with the degree-13 Pade approximant
CMatrix mat_exp(const CMatrix& A);

CMatrix kron(const CMatrix& A, const CMatrix& B);

// trace out the right (environment) factor of an (d*m)x(d*m) operator
CMatrix partial_trace_right(const CMatrix& M, int d, int m);

// d x d block <e_p| M |e_q> of M on system (x) environment, environment dim m
CMatrix env_block(const CMatrix& M, int d, int m, int p, int q);

// matrix of rho -> A rho B on column-stacked vectors
CMatrix sandwich_superop(const CMatrix& A, const CMatrix& B);

// eigenvalues ascending, eigenvectors unitary; input Hermitian to 1e-10
std::pair<RVector, CMatrix> herm_eig(const CMatrix& A);

// orthonormal basis of {v : |Av| <= tol*|A|*|v|} by singular-value threshold
std::vector<CVector> null_space(const CMatrix& A, double tol = 1e-10);

// sum of singular values
double trace_norm(const CMatrix& A);

CVector vec(const CMatrix& A);
CMatrix unvec(const CVector& v, int d);

// slope of the least-squares line through (x_i, y_i)
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qlv
