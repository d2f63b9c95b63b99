#include "mfvar/kalman.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mfvar/errors.hpp"

namespace mfvar {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

std::string at(std::size_t t) { return "step " + std::to_string(t); }

void predict(const std::vector<StepModel>& steps, std::size_t t, const MatrixXd* a_prev, const MatrixXd* P_prev,
             MatrixXd& a, MatrixXd& P) {
  const StepModel& s = steps[t];
  if (t == 0) {
    a = s.state_intercept;
    P.noalias() = s.state_noise * s.state_noise.transpose();
  } else {
    const MatrixXd& T = *s.transition;
    a = s.state_intercept;
    a.noalias() += T * *a_prev;
    MatrixXd TP = T * *P_prev;
    P.noalias() = TP * T.transpose();
    if (s.state_noise.cols() > 0) P.noalias() += s.state_noise * s.state_noise.transpose();
  }
  symmetrize(P);
}

}  // namespace

void validate_steps(const std::vector<StepModel>& steps) {
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const StepModel& s = steps[t];
    const Index m = s.state_dim();
    const Index k = s.columns();
    require(s.state_noise.rows() == m, at(t) + ": state noise rows");
    require(s.design && s.design->rows() == s.obs_dim() && s.design->cols() == m, at(t) + ": design dimensions");
    require(s.obs_intercept.rows() == s.obs_dim() && s.obs_intercept.cols() == k, at(t) + ": obs intercept");
    require(s.obs_var.size() == s.obs_dim() && (s.obs_var.array() >= 0).all(), at(t) + ": obs variances");
    require(s.obs.cols() == k, at(t) + ": data columns");
    if (t > 0) {
      require(s.transition && s.transition->rows() == m && s.transition->cols() == steps[t - 1].state_dim(),
              at(t) + ": transition dimensions");
      require(k == steps[t - 1].columns(), at(t) + ": column count changes");
    }
    if (!s.obs.allFinite() || !s.obs_intercept.allFinite() || !s.state_intercept.allFinite() ||
        !s.state_noise.allFinite())
      throw ValidationError(at(t) + ": non-finite input");
  }
}

FilterOutput univariate_filter(const std::vector<StepModel>& steps, const FilterOptions& opt) {
  validate_steps(steps);
  const std::size_t n_steps = steps.size();
  FilterOutput out;
  out.kind = FilterKind::univariate;
  out.predicted_mean.resize(n_steps);
  out.predicted_cov.resize(n_steps);
  out.gain.resize(n_steps);
  out.innovation_var.resize(n_steps);
  out.innovation.resize(n_steps);
  if (opt.keep_filtered) {
    out.filtered_mean.resize(n_steps);
    out.filtered_cov.resize(n_steps);
  }
  if (opt.keep_elements) {
    out.element_mean.resize(n_steps);
    out.element_cov.resize(n_steps);
  }
  const Index k = n_steps ? steps[0].columns() : 0;
  out.loglik = VectorXd::Zero(k);

  MatrixXd a, P, a_prev, P_prev;
  VectorXd kvec;
  Eigen::RowVectorXd v(k);
  for (std::size_t t = 0; t < n_steps; ++t) {
    const StepModel& s = steps[t];
    predict(steps, t, &a_prev, &P_prev, a, P);
    out.predicted_mean[t] = a;
    out.predicted_cov[t] = P;

    const Index nt = s.obs_dim();
    const Index m = s.state_dim();
    const MatrixXd& Z = *s.design;
    MatrixXd& K = out.gain[t];
    VectorXd& F = out.innovation_var[t];
    MatrixXd& V = out.innovation[t];
    K.resize(m, nt);
    F.resize(nt);
    V.resize(nt, k);
    for (Index i = 0; i < nt; ++i) {
      if (opt.keep_elements) {
        out.element_mean[t].push_back(a);
        out.element_cov[t].push_back(P.selfadjointView<Eigen::Lower>());
      }
      auto z = Z.row(i);
      kvec.noalias() = P.selfadjointView<Eigen::Lower>() * z.transpose();
      double f = z.dot(kvec) + s.obs_var(i);
      v = s.obs.row(i) - s.obs_intercept.row(i);
      v.noalias() -= z * a;
      V.row(i) = v;
      double tol = 1e-12 * std::max(P.diagonal().sum(), 0.0);
      if (!(f > tol)) {
        double scale = 1.0 + s.obs.row(i).cwiseAbs().maxCoeff() + s.obs_intercept.row(i).cwiseAbs().maxCoeff();
        if (v.cwiseAbs().maxCoeff() <= 1e-7 * scale) {
          // exact observation already implied by earlier elements
          K.col(i).setZero();
          F(i) = 0.0;
          continue;
        }
        throw NumericalError("univariate filter: innovation variance F is singular at " + at(t) + ", element " +
                             std::to_string(i));
      }
      K.col(i) = kvec;
      F(i) = f;
      a.noalias() += kvec * (v / f);
      P.selfadjointView<Eigen::Lower>().rankUpdate(kvec, -1.0 / f);
      for (Index c = 0; c < k; ++c) out.loglik(c) -= 0.5 * (kLog2Pi + std::log(f) + v(c) * v(c) / f);
    }
    {
      MatrixXd full = P.selfadjointView<Eigen::Lower>();
      P.swap(full);
    }
    if (opt.keep_filtered) {
      out.filtered_mean[t] = a;
      out.filtered_cov[t] = P;
    }
    a_prev.swap(a);
    P_prev.swap(P);
  }
  if (!out.loglik.allFinite()) throw NumericalError("univariate filter: non-finite log-likelihood");
  return out;
}

FilterOutput kalman_filter_reference(const std::vector<StepModel>& steps, const FilterOptions& opt) {
  validate_steps(steps);
  const std::size_t n_steps = steps.size();
  FilterOutput out;
  out.kind = FilterKind::multivariate;
  out.predicted_mean.resize(n_steps);
  out.predicted_cov.resize(n_steps);
  out.gain.resize(n_steps);
  out.innovation.resize(n_steps);
  out.scaled_innovation.resize(n_steps);
  if (opt.keep_filtered) {
    out.filtered_mean.resize(n_steps);
    out.filtered_cov.resize(n_steps);
  }
  const Index k = n_steps ? steps[0].columns() : 0;
  out.loglik = VectorXd::Zero(k);

  MatrixXd a, P, a_prev, P_prev;
  for (std::size_t t = 0; t < n_steps; ++t) {
    const StepModel& s = steps[t];
    predict(steps, t, &a_prev, &P_prev, a, P);
    out.predicted_mean[t] = a;
    out.predicted_cov[t] = P;
    const Index nt = s.obs_dim();
    if (nt > 0) {
      const MatrixXd& Z = *s.design;
      MatrixXd PZt = P * Z.transpose();
      MatrixXd F = Z * PZt;
      F.diagonal() += s.obs_var;
      symmetrize(F);
      Eigen::LLT<MatrixXd> llt(F);
      if (llt.info() != Eigen::Success)
        throw NumericalError("reference filter: innovation covariance F is singular at " + at(t));
      MatrixXd v = s.obs - s.obs_intercept;
      v.noalias() -= Z * a;
      MatrixXd Fv = llt.solve(v);
      MatrixXd K = llt.solve(PZt.transpose()).transpose();
      a.noalias() += PZt * Fv;
      P.noalias() -= K * PZt.transpose();
      symmetrize(P);
      double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
      for (Index c = 0; c < k; ++c)
        out.loglik(c) -= 0.5 * (static_cast<double>(nt) * kLog2Pi + logdet + v.col(c).dot(Fv.col(c)));
      out.innovation[t] = std::move(v);
      out.scaled_innovation[t] = std::move(Fv);
      out.gain[t] = std::move(K);
    } else {
      out.innovation[t].resize(0, k);
      out.scaled_innovation[t].resize(0, k);
      out.gain[t].resize(s.state_dim(), 0);
    }
    if (opt.keep_filtered) {
      out.filtered_mean[t] = a;
      out.filtered_cov[t] = P;
    }
    a_prev.swap(a);
    P_prev.swap(P);
  }
  if (!out.loglik.allFinite()) throw NumericalError("reference filter: non-finite log-likelihood");
  return out;
}

SmootherOutput univariate_smoother(const std::vector<StepModel>& steps, const FilterOutput& f) {
  if (f.kind != FilterKind::univariate || f.gain.size() != steps.size() || f.innovation_var.size() != steps.size())
    throw ValidationError("univariate smoother needs the stored univariate filter intermediates");
  const std::size_t n_steps = steps.size();
  SmootherOutput out;
  out.state.resize(n_steps);
  out.r0.resize(n_steps);
  if (n_steps == 0) return out;
  const Index k = steps[0].columns();
  MatrixXd r = MatrixXd::Zero(steps.back().state_dim(), k);
  Eigen::RowVectorXd w(k);
  for (std::size_t tt = n_steps; tt-- > 0;) {
    const StepModel& s = steps[tt];
    const MatrixXd& Z = *s.design;
    const MatrixXd& K = f.gain[tt];
    const VectorXd& F = f.innovation_var[tt];
    const MatrixXd& V = f.innovation[tt];
    for (Index i = s.obs_dim(); i-- > 0;) {
      if (F(i) == 0.0) continue;
      // r <- Z'F^{-1}v + (I - K Z / F)' r
      w.noalias() = V.row(i) - K.col(i).transpose() * r;
      w /= F(i);
      r.noalias() += Z.row(i).transpose() * w;
    }
    out.state[tt] = f.predicted_mean[tt];
    out.state[tt].noalias() += f.predicted_cov[tt] * r;
    out.r0[tt] = r;
    if (tt > 0) r = s.transition->transpose() * out.r0[tt];
  }
  return out;
}

SmootherOutput multivariate_smoother(const std::vector<StepModel>& steps, const FilterOutput& f) {
  if (f.kind != FilterKind::multivariate || f.gain.size() != steps.size())
    throw ValidationError("multivariate smoother needs the stored reference filter output");
  const std::size_t n_steps = steps.size();
  SmootherOutput out;
  out.state.resize(n_steps);
  out.r0.resize(n_steps);
  if (n_steps == 0) return out;
  const Index k = steps[0].columns();
  MatrixXd r = MatrixXd::Zero(steps.back().state_dim(), k);
  for (std::size_t tt = n_steps; tt-- > 0;) {
    const StepModel& s = steps[tt];
    if (s.obs_dim() > 0) {
      const MatrixXd& Z = *s.design;
      // rho = Z'F^{-1}v + (I - K Z)' r
      MatrixXd u = f.scaled_innovation[tt];
      u.noalias() -= f.gain[tt].transpose() * r;
      r.noalias() += Z.transpose() * u;
    }
    out.state[tt] = f.predicted_mean[tt];
    out.state[tt].noalias() += f.predicted_cov[tt] * r;
    out.r0[tt] = r;
    if (tt > 0) r = s.transition->transpose() * out.r0[tt];
  }
  return out;
}

FilterOutput run_filter(const std::vector<StepModel>& steps, FilterKind kind, const FilterOptions& opt) {
  return kind == FilterKind::univariate ? univariate_filter(steps, opt) : kalman_filter_reference(steps, opt);
}

SmootherOutput run_smoother(const std::vector<StepModel>& steps, const FilterOutput& f) {
  return f.kind == FilterKind::univariate ? univariate_smoother(steps, f) : multivariate_smoother(steps, f);
}

}  // namespace mfvar
