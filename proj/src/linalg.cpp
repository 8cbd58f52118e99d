#include "ridgevar/linalg.hpp"

#include <boost/math/distributions/normal.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace ridgevar {

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

VectorXd vec(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

MatrixXd unvec(const VectorXd& v, int rows, int cols) {
  if (v.size() != static_cast<long>(rows) * cols)
    throw input_error("unvec: size mismatch");
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

MatrixXd commutation_matrix(int m, int n) {
  MatrixXd k = MatrixXd::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      k(j + i * n, i + j * m) = 1.0;  // vec(A') index <- vec(A) index
  return k;
}

MatrixXd elimination_matrix(int n) {
  const int nh = n * (n + 1) / 2;
  MatrixXd l = MatrixXd::Zero(nh, n * n);
  int r = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) l(r++, i + j * n) = 1.0;
  return l;
}

MatrixXd chol_lower(const MatrixXd& s, const std::string& context) {
  if (s.rows() != s.cols()) throw input_error(context + ": not square");
  Eigen::LLT<MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw numeric_error(context + ": Cholesky factorization failed (matrix not positive definite)");
  return llt.matrixL();
}

double rcond_sym(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return 0.0;
  const VectorXd& w = es.eigenvalues();
  double wmax = w.cwiseAbs().maxCoeff();
  if (wmax == 0.0) return 0.0;
  double wmin = w.minCoeff();       // signed: negative means indefinite
  if (wmin <= 0.0) return 0.0;
  return wmin / wmax;
}

MatrixXd solve_sym(const MatrixXd& m, const MatrixXd& rhs,
                   const std::string& context, double rcond_min) {
  double rc = rcond_sym(m);
  if (rc < rcond_min)
    throw numeric_error(context + ": penalized system numerically singular (rcond " +
                        std::to_string(rc) + ")");
  Eigen::LDLT<MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success)
    throw numeric_error(context + ": LDLT factorization failed");
  return ldlt.solve(rhs);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw input_error("normal_quantile: p outside (0,1)");
  boost::math::normal_distribution<double> n01;
  return boost::math::quantile(n01, p);
}

}  // namespace ridgevar
