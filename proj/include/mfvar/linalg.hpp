#pragma once

#include <Eigen/Dense>
#include <string>

namespace mfvar {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

// Lower Cholesky factor of a symmetric PSD matrix. On failure retries once
// with jitter rel_jitter * max(1, mean diagonal) * I; throws NumericalError
// naming `what` if that also fails.
MatrixXd chol_lower(const MatrixXd& a, const std::string& what = "matrix", double rel_jitter = 1e-10);

// Same, returning the factorization object for solves.
Eigen::LLT<MatrixXd> llt_with_jitter(const MatrixXd& a, const std::string& what = "matrix",
                                     double rel_jitter = 1e-10);

inline void symmetrize(MatrixXd& a) {
  a = 0.5 * (a + a.transpose()).eval();
}

bool all_finite(const MatrixXd& a);

}  // namespace mfvar
