#include "mfvar/model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "mfvar/errors.hpp"

namespace mfvar {

VectorXd VarParameters::equation_row(int i) const {
  VectorXd row(1 + lag_coefficients.cols());
  row(0) = intercept(i);
  row.tail(lag_coefficients.cols()) = lag_coefficients.row(i).transpose();
  return row;
}

void VarParameters::set_equation_row(int i, const VectorXd& row) {
  require(row.size() == 1 + lag_coefficients.cols(), "equation row has wrong length");
  intercept(i) = row(0);
  lag_coefficients.row(i) = row.tail(lag_coefficients.cols()).transpose();
}

void VarParameters::validate() const {
  require(n_monthly >= 0 && n_quarterly >= 0 && n_vars() > 0, "VAR needs at least one variable");
  require(lags >= 1, "VAR lag order must be at least 1");
  require(intercept.size() == n_vars(), "intercept length " + std::to_string(intercept.size()) +
                                            " does not match n = " + std::to_string(n_vars()));
  require(lag_coefficients.rows() == n_vars() && lag_coefficients.cols() == n_vars() * lags,
          "lag coefficient matrix must be n x (n p)");
  require(intercept.allFinite() && lag_coefficients.allFinite(), "VAR coefficients must be finite");
}

VarParameters VarParameters::zeros(int n_monthly, int n_quarterly, int lags) {
  VarParameters p;
  p.n_monthly = n_monthly;
  p.n_quarterly = n_quarterly;
  p.lags = lags;
  p.intercept = VectorXd::Zero(p.n_vars());
  p.lag_coefficients = MatrixXd::Zero(p.n_vars(), p.n_vars() * lags);
  return p;
}

VarParameters VarParameters::padded(int new_lags) const {
  require(new_lags >= lags, "padding cannot drop lags");
  VarParameters out = zeros(n_monthly, n_quarterly, new_lags);
  out.intercept = intercept;
  out.lag_coefficients.leftCols(lag_coefficients.cols()) = lag_coefficients;
  return out;
}

double VarParameters::spectral_radius() const {
  MatrixXd cov = MatrixXd::Identity(n_vars(), n_vars());
  CompanionForm comp = build_companion(*this, cov);
  Eigen::EigenSolver<MatrixXd> es(comp.transition, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CompanionForm build_companion(const VarParameters& params, const MatrixXd& innovation_cov) {
  params.validate();
  const int n = params.n_vars();
  const int p = params.lags;
  require(innovation_cov.rows() == n && innovation_cov.cols() == n,
          "innovation covariance must be n x n with n = " + std::to_string(n));
  CompanionForm out;
  out.transition = MatrixXd::Zero(n * p, n * p);
  out.transition.topRows(n) = params.lag_coefficients;
  if (p > 1) out.transition.bottomLeftCorner(n * (p - 1), n * (p - 1)).setIdentity();
  out.intercept = VectorXd::Zero(n * p);
  out.intercept.head(n) = params.intercept;
  out.innovation_map = MatrixXd::Zero(n * p, n);
  out.innovation_map.topRows(n) = chol_lower(innovation_cov, "innovation covariance");
  return out;
}

StateSpaceSystem build_compact_system(const VarParameters& params, const MatrixXd& sigma_chol,
                                      const MatrixXd& aggregation) {
  params.validate();
  const int nm = params.n_monthly;
  const int nq = params.n_quarterly;
  const int n = params.n_vars();
  const int p = params.lags;
  if (nq == 0) throw ValidationError("compact form needs at least one quarterly variable; use the fully observed VAR");
  require(sigma_chol.rows() == n && sigma_chol.cols() == n, "innovation factor must be n x n");
  require(aggregation.rows() == nq && aggregation.cols() == p * nq, "aggregation matrix must be n_q x p n_q");
  const int m = nq * (p + 1);
  const int k = nm * p + 1;

  StateSpaceSystem s;
  s.Z = MatrixXd::Zero(n, m);
  s.C = MatrixXd::Zero(n, k);
  s.T = MatrixXd::Zero(m, m);
  s.D = MatrixXd::Zero(m, k);
  for (int l = 1; l <= p; ++l) {
    auto pl = params.lag(l);
    s.Z.block(0, l * nq, nm, nq) = pl.block(0, nm, nm, nq);           // Pi_mq
    s.C.block(0, (l - 1) * nm, nm, nm) = pl.block(0, 0, nm, nm);       // Pi_mm
    s.T.block(0, (l - 1) * nq, nq, nq) = pl.block(nm, nm, nq, nq);     // Pi_qq
    s.D.block(0, (l - 1) * nm, nq, nm) = pl.block(nm, 0, nq, nm);      // Pi_qm
  }
  s.Z.block(nm, 0, nq, p * nq) = aggregation;
  s.C.block(0, k - 1, nm, 1) = params.intercept.head(nm);
  s.D.block(0, k - 1, nq, 1) = params.intercept.tail(nq);
  s.T.block(nq, 0, p * nq, p * nq).setIdentity();

  s.G = MatrixXd::Zero(n, n);
  s.G.topRows(nm) = sigma_chol.topRows(nm);
  s.H = MatrixXd::Zero(m, n);
  s.H.topRows(nq) = sigma_chol.bottomRows(nq);
  return s;
}

double aggregate_quarterly(std::span<const double> window) {
  if (window.size() != kAggregationSpan)
    throw ValidationError("triangular aggregation needs a window of 5 monthly values, got " +
                          std::to_string(window.size()));
  double s = 0.0;
  for (int k = 0; k < kAggregationSpan; ++k) s += kTriangularWeights[k] * window[k];
  return s;
}

MatrixXd build_aggregation_matrix(int n_quarterly, int lags) {
  require(n_quarterly >= 1, "aggregation matrix needs n_q >= 1");
  if (lags < kAggregationSpan)
    throw ValidationError("triangular aggregation spans 5 months: the lag order must be at least 5 (got " +
                          std::to_string(lags) + ")");
  MatrixXd a = MatrixXd::Zero(n_quarterly, n_quarterly * lags);
  for (int j = 0; j < n_quarterly; ++j)
    for (int k = 0; k < kAggregationSpan; ++k) a(j, k * n_quarterly + j) = kTriangularWeights[k];
  return a;
}

MatrixXd make_selection(const std::vector<int>& observed, int dim) {
  MatrixXd s = MatrixXd::Zero(static_cast<Index>(observed.size()), dim);
  for (std::size_t r = 0; r < observed.size(); ++r) {
    int i = observed[r];
    if (i < 0 || i >= dim) throw ValidationError("selection index " + std::to_string(i) + " out of range");
    if (r > 0 && i <= observed[r - 1]) throw ValidationError("selection indices must be sorted and unique");
    s(static_cast<Index>(r), i) = 1.0;
  }
  return s;
}

MatrixXd simulate_var(const VarParameters& params, const MatrixXd& presample, const MatrixXd& innovations) {
  params.validate();
  const int n = params.n_vars();
  const int p = params.lags;
  require(presample.rows() == p && presample.cols() == n, "presample must be p x n");
  require(innovations.cols() == n, "innovations must have n columns");
  const Index T = innovations.rows();
  MatrixXd all(p + T, n);
  all.topRows(p) = presample;
  for (Index t = 0; t < T; ++t) {
    VectorXd x = params.intercept + innovations.row(t).transpose();
    for (int l = 1; l <= p; ++l) x.noalias() += params.lag(l) * all.row(p + t - l).transpose();
    all.row(p + t) = x.transpose();
  }
  return all.bottomRows(T);
}

}  // namespace mfvar
