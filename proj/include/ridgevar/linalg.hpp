#pragma once

#include <Eigen/Dense>
#include <string>

#include "ridgevar/errors.hpp"

namespace ridgevar {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Kronecker product A (x) B.
MatrixXd kron(const MatrixXd& a, const MatrixXd& b);

// Column-major stacking vec(M) and its inverse.
VectorXd vec(const MatrixXd& m);
MatrixXd unvec(const VectorXd& v, int rows, int cols);

// Commutation matrix K_{mn}: K_{mn} vec(A) = vec(A') for A m x n.
MatrixXd commutation_matrix(int m, int n);

// Elimination matrix L_n: vech(A) = L_n vec(A); for lower-triangular A,
// vec(A) = L_n' vech(A).
MatrixXd elimination_matrix(int n);

// Lower Cholesky factor of a symmetric positive-definite matrix.
// Throws numeric_error if the factorization fails.
MatrixXd chol_lower(const MatrixXd& s, const std::string& context = "matrix");

// Reciprocal condition number of a symmetric matrix (min/max |eigenvalue|);
// returns 0 for an exactly singular or indefinite-beyond-roundoff input.
double rcond_sym(const MatrixXd& m);

// Solve M X = rhs for symmetric positive semi-definite M via LDLT after an
// eigenvalue-based conditioning guard: reciprocal condition below rcond_min
// raises numeric_error instead of returning garbage.
MatrixXd solve_sym(const MatrixXd& m, const MatrixXd& rhs,
                   const std::string& context, double rcond_min = 1e-14);

// Standard normal quantile, e.g. normal_quantile(0.95) = 1.6449.
double normal_quantile(double p);

}  // namespace ridgevar
