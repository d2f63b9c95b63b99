#include "mfvar/regression.hpp"

#include <cmath>
#include <exception>

#include "mfvar/errors.hpp"

namespace mfvar {

std::string policy_name(SamplerPolicy p) {
  switch (p) {
    case SamplerPolicy::automatic: return "auto";
    case SamplerPolicy::rue: return "rue";
    case SamplerPolicy::bhattacharya: return "bhattacharya";
  }
  return "?";
}

SamplerPolicy parse_policy(const std::string& s) {
  if (s == "auto") return SamplerPolicy::automatic;
  if (s == "rue") return SamplerPolicy::rue;
  if (s == "bhattacharya") return SamplerPolicy::bhattacharya;
  throw ValidationError("unknown sampler policy '" + s + "' (auto | rue | bhattacharya)");
}

SamplerPolicy choose_sampler(Index n_coef, Index t_eff, SamplerPolicy policy) {
  if (policy != SamplerPolicy::automatic) return policy;
  return n_coef > t_eff ? SamplerPolicy::bhattacharya : SamplerPolicy::rue;
}

MatrixXd build_regressors(const MatrixXd& x, int lags) {
  const Index T = x.rows();
  const Index n = x.cols();
  require(lags >= 1 && T > lags, "need more periods than lags to build regressors");
  MatrixXd X(T - lags, 1 + n * lags);
  X.col(0).setOnes();
  for (int l = 1; l <= lags; ++l) X.middleCols(1 + (l - 1) * n, n) = x.middleRows(lags - l, T - lags);
  return X;
}

EquationSystem build_equation_system(int i, const MatrixXd& regressors, const MatrixXd& x, int lags,
                                     const MatrixXd& factor_part, const MatrixXd& idio_var, const VectorXd& prior_var) {
  const Index te = regressors.rows();
  require(x.rows() == te + lags, "regressors do not match the latent path");
  require(factor_part.rows() == te && idio_var.rows() == te, "factor term and variances must cover the effective sample");
  require(prior_var.size() == regressors.cols(), "prior diagonal length must equal np+1");
  require((prior_var.array() > 0).all(), "prior variances must be positive");
  VectorXd w = idio_var.col(i);
  if (!((w.array() > 0).all()) || !w.allFinite())
    throw NumericalError("equation " + std::to_string(i) + ": idiosyncratic variance must be positive");
  VectorXd s = w.cwiseSqrt().cwiseInverse();
  EquationSystem sys;
  sys.design = s.asDiagonal() * regressors;
  sys.response = s.cwiseProduct(x.col(i).tail(te) - factor_part.col(i));
  sys.prior_var = prior_var;
  return sys;
}

EquationSystem build_equation_system(int i, const MatrixXd& x, int lags, const MatrixXd& factor_part,
                                     const MatrixXd& idio_var, const VectorXd& prior_var) {
  return build_equation_system(i, build_regressors(x, lags), x, lags, factor_part, idio_var, prior_var);
}

VectorXd posterior_mean_dense(const EquationSystem& sys) {
  MatrixXd prec = sys.design.transpose() * sys.design;
  prec.diagonal() += sys.prior_var.cwiseInverse();
  return prec.inverse() * (sys.design.transpose() * sys.response);
}

MatrixXd posterior_cov_dense(const EquationSystem& sys) {
  MatrixXd prec = sys.design.transpose() * sys.design;
  prec.diagonal() += sys.prior_var.cwiseInverse();
  return prec.inverse();
}

VectorXd draw_row_rue(const EquationSystem& sys, const VectorXd& z) {
  const Index k = sys.design.cols();
  require(z.size() == k, "Rue draw: noise length");
  MatrixXd prec(k, k);
  prec.setZero();
  prec.selfadjointView<Eigen::Lower>().rankUpdate(sys.design.transpose());
  prec.diagonal() += sys.prior_var.cwiseInverse();
  MatrixXd full = prec.selfadjointView<Eigen::Lower>();
  Eigen::LLT<MatrixXd> llt = llt_with_jitter(full, "Rue sampler precision");
  VectorXd v = llt.matrixL().solve(sys.design.transpose() * sys.response);
  VectorXd mu = llt.matrixU().solve(v);
  return mu + llt.matrixU().solve(z);
}

VectorXd draw_row_rue(const EquationSystem& sys, RngStream& rng) {
  VectorXd z(sys.design.cols());
  for (Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
  return draw_row_rue(sys, z);
}

VectorXd draw_row_bhattacharya(const EquationSystem& sys, const VectorXd& u_std, const VectorXd& delta) {
  const Index k = sys.design.cols();
  const Index T = sys.design.rows();
  require(u_std.size() == k && delta.size() == T, "Bhattacharya draw: noise lengths");
  VectorXd u = sys.prior_var.cwiseSqrt().cwiseProduct(u_std);
  VectorXd v = sys.design * u + delta;
  MatrixXd XD = sys.design * sys.prior_var.asDiagonal();
  MatrixXd M = MatrixXd::Identity(T, T);
  M.noalias() += XD * sys.design.transpose();
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    Eigen::JacobiSVD<MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    throw NumericalError("Bhattacharya sampler: T x T solve failed, condition estimate " +
                         std::to_string(sv(0) / sv(sv.size() - 1)));
  }
  VectorXd w = llt.solve(sys.response - v);
  return u + XD.transpose() * w;
}

VectorXd draw_row_bhattacharya(const EquationSystem& sys, RngStream& rng) {
  VectorXd u(sys.design.cols()), d(sys.design.rows());
  for (Index j = 0; j < u.size(); ++j) u(j) = rng.normal();
  for (Index j = 0; j < d.size(); ++j) d(j) = rng.normal();
  return draw_row_bhattacharya(sys, u, d);
}

namespace {

void check_inputs(const RegressionInputs& in) {
  require(in.x && in.factor_part && in.idio_var && in.prior_var, "regression inputs incomplete");
  require(static_cast<Index>(in.prior_var->size()) == in.x->cols(), "one prior diagonal per equation");
}

VectorXd draw_equation(const RegressionInputs& in, const MatrixXd& X, int i, SamplerPolicy policy,
                       const StreamKey& key) {
  EquationSystem sys = build_equation_system(i, X, *in.x, in.lags, *in.factor_part, *in.idio_var, (*in.prior_var)[i]);
  RngStream rng = make_stream(key.seed, key.chain, key.iteration, Block::regression, static_cast<std::uint64_t>(i));
  if (choose_sampler(X.cols(), X.rows(), policy) == SamplerPolicy::bhattacharya)
    return draw_row_bhattacharya(sys, rng);
  return draw_row_rue(sys, rng);
}

std::string equation_error(int i, const std::exception& e) {
  return "regression block, equation " + std::to_string(i) + ": " + e.what();
}

}  // namespace

MatrixXd draw_pi(const RegressionInputs& in, SamplerPolicy policy, int workers, const StreamKey& key) {
  check_inputs(in);
  const MatrixXd X = build_regressors(*in.x, in.lags);
  const int n = static_cast<int>(in.x->cols());
  MatrixXd pi(n, X.cols());
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for num_threads(workers) schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      pi.row(i) = draw_equation(in, X, i, policy, key).transpose();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const NumericalError& e) {
      throw NumericalError(equation_error(i, e));
    } catch (const ValidationError& e) {
      throw ValidationError(equation_error(i, e));
    }
  }
  return pi;
}

MatrixXd draw_pi_serial(const RegressionInputs& in, SamplerPolicy policy, const StreamKey& key) {
  check_inputs(in);
  const MatrixXd X = build_regressors(*in.x, in.lags);
  const int n = static_cast<int>(in.x->cols());
  MatrixXd pi(n, X.cols());
  for (int i = 0; i < n; ++i) {
    try {
      pi.row(i) = draw_equation(in, X, i, policy, key).transpose();
    } catch (const NumericalError& e) {
      throw NumericalError(equation_error(i, e));
    }
  }
  return pi;
}

}  // namespace mfvar
