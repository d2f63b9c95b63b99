#include "mfvar/fsv.hpp"

#include <cmath>
#include <string>

#include "mfvar/errors.hpp"

namespace mfvar {

void FsvState::validate() const {
  const Index n = loadings.rows();
  const Index r = loadings.cols();
  const Index T = idio_logvol.rows();
  require(idio_logvol.cols() == n, "idiosyncratic log-volatility must be T x n");
  require(factors.rows() == T && factors.cols() == r, "factor path must be T x r");
  require(factor_logvol.rows() == T && factor_logvol.cols() == r, "factor log-volatility must be T x r");
  require(static_cast<Index>(idio_params.size()) == n && static_cast<Index>(factor_params.size()) == r,
          "one set of SV parameters per series and factor");
  require(idio_logvol.allFinite() && factor_logvol.allFinite(), "log-volatility paths must be finite");
  for (const auto* v : {&idio_params, &factor_params})
    for (const SvParams& p : *v)
      require(std::abs(p.phi) < 1.0 && p.sigma > 0.0, "SV parameters need |phi| < 1 and sigma > 0");
}

SigmaT sigma_t(const FsvState& fsv, Index t) {
  require(t >= 0 && t < fsv.periods(), "period out of range");
  VectorXd wf = fsv.factor_logvol.row(t).array().exp();
  VectorXd wn = fsv.idio_logvol.row(t).array().exp();
  if (!wf.allFinite() || !wn.allFinite()) throw NumericalError("non-finite volatility at period " + std::to_string(t));
  SigmaT out;
  out.sigma = fsv.loadings * wf.asDiagonal() * fsv.loadings.transpose();
  out.sigma.diagonal() += wn;
  symmetrize(out.sigma);
  out.chol = chol_lower(out.sigma, "Sigma_t");
  return out;
}

MatrixXd draw_factors(const MatrixXd& loadings, const MatrixXd& resid, const MatrixXd& idio_var,
                      const MatrixXd& factor_var, const MatrixXd& noise, int workers) {
  const Index T = resid.rows();
  const Index n = loadings.rows();
  const Index r = loadings.cols();
  require(resid.cols() == n && idio_var.rows() == T && idio_var.cols() == n, "factor draw: residual dimensions");
  require(factor_var.rows() == T && factor_var.cols() == r && noise.rows() == T && noise.cols() == r,
          "factor draw: factor dimensions");
  MatrixXd f(T, r);
  if (r == 0) return f;
  bool failed = false;
#pragma omp parallel for num_threads(workers) schedule(static)
  for (Index t = 0; t < T; ++t) {
    VectorXd winv = idio_var.row(t).transpose().cwiseInverse();
    MatrixXd Q = loadings.transpose() * winv.asDiagonal() * loadings;
    Q.diagonal() += factor_var.row(t).transpose().cwiseInverse();
    VectorXd b = loadings.transpose() * winv.cwiseProduct(resid.row(t).transpose());
    Eigen::LLT<MatrixXd> llt(Q);
    if (llt.info() != Eigen::Success) {
#pragma omp atomic write
      failed = true;
      continue;
    }
    VectorXd mean = llt.solve(b);
    f.row(t) = (mean + llt.matrixU().solve(noise.row(t).transpose())).transpose();
  }
  if (failed) throw NumericalError("factor draw: singular posterior precision");
  return f;
}

MatrixXd draw_factors(const MatrixXd& loadings, const MatrixXd& resid, const MatrixXd& idio_var,
                      const MatrixXd& factor_var, RngStream& rng, int workers) {
  MatrixXd z(resid.rows(), loadings.cols());
  for (Index t = 0; t < z.rows(); ++t)
    for (Index j = 0; j < z.cols(); ++j) z(t, j) = rng.normal();
  return draw_factors(loadings, resid, idio_var, factor_var, z, workers);
}

MatrixXd draw_loadings(const MatrixXd& factors, const MatrixXd& resid, const MatrixXd& idio_var,
                       const FsvPriorConfig& prior, const MatrixXd& noise, int workers) {
  const Index T = resid.rows();
  const Index n = resid.cols();
  const Index r = factors.cols();
  require(factors.rows() == T && idio_var.rows() == T && idio_var.cols() == n, "loading draw: dimensions");
  require(noise.rows() == n && noise.cols() == r, "loading draw: noise must be n x r");
  require(prior.loading_var > 0, "loading prior variance must be positive");
  MatrixXd lam = MatrixXd::Zero(n, r);
  if (r == 0) return lam;
  bool failed = false;
#pragma omp parallel for num_threads(workers) schedule(static)
  for (Index i = 0; i < n; ++i) {
    const Index k = std::min<Index>(i + 1, r);
    auto F = factors.leftCols(k);
    VectorXd w = idio_var.col(i).cwiseInverse();
    MatrixXd Q = F.transpose() * w.asDiagonal() * F;
    Q.diagonal().array() += 1.0 / prior.loading_var;
    VectorXd b = F.transpose() * w.cwiseProduct(resid.col(i));
    Eigen::LLT<MatrixXd> llt(Q);
    if (llt.info() != Eigen::Success) {
#pragma omp atomic write
      failed = true;
      continue;
    }
    VectorXd z = noise.row(i).head(k).transpose();
    lam.row(i).head(k) = (llt.solve(b) + llt.matrixU().solve(z)).transpose();
  }
  if (failed) throw NumericalError("loading draw: singular posterior precision");
  return lam;
}

MatrixXd draw_loadings(const MatrixXd& factors, const MatrixXd& resid, const MatrixXd& idio_var,
                       const FsvPriorConfig& prior, RngStream& rng, int workers) {
  MatrixXd z(resid.cols(), factors.cols());
  for (Index i = 0; i < z.rows(); ++i)
    for (Index j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
  return draw_loadings(factors, resid, idio_var, prior, z, workers);
}

}  // namespace mfvar
