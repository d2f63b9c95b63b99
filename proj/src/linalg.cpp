#include "mfvar/linalg.hpp"

#include <algorithm>

#include "mfvar/errors.hpp"

namespace mfvar {

Eigen::LLT<MatrixXd> llt_with_jitter(const MatrixXd& a, const std::string& what, double rel_jitter) {
  if (a.rows() != a.cols()) throw ValidationError(what + ": not square");
  Eigen::LLT<MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  double scale = a.rows() > 0 ? std::max(1.0, a.diagonal().cwiseAbs().mean()) : 1.0;
  MatrixXd b = a;
  b.diagonal().array() += rel_jitter * scale;
  llt.compute(b);
  if (llt.info() != Eigen::Success) throw NumericalError(what + ": Cholesky failed after jitter");
  return llt;
}

MatrixXd chol_lower(const MatrixXd& a, const std::string& what, double rel_jitter) {
  if (a.size() == 0) return MatrixXd(a.rows(), a.cols());
  // PSD with exact zero rows (e.g. r = 0 factors) is common; handle by jitter
  return llt_with_jitter(a, what, rel_jitter).matrixL();
}

bool all_finite(const MatrixXd& a) { return a.allFinite(); }

}  // namespace mfvar
