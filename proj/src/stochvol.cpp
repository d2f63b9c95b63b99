#include "mfvar/stochvol.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mfvar/errors.hpp"

namespace mfvar {

namespace {

void check_params(const SvParams& p) {
  if (!(std::abs(p.phi) < 1.0)) throw ValidationError("SV persistence must lie in (-1, 1), got " + std::to_string(p.phi));
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.mu))
    throw ValidationError("SV innovation sd must be positive and finite");
}

// S = (1 - phi^2)(h_1 - mu)^2 + sum_t (h_t - mu - phi (h_{t-1} - mu))^2
double ar_sum_squares(const VectorXd& h, double mu, double phi) {
  double d0 = h(0) - mu;
  double s = (1.0 - phi * phi) * d0 * d0;
  for (Index t = 1; t < h.size(); ++t) {
    double e = h(t) - mu - phi * (h(t - 1) - mu);
    s += e * e;
  }
  return s;
}

}  // namespace

VectorXd log_square(const VectorXd& e) { return (e.array().square() + kLogSquareOffset).log(); }

std::array<double, MixtureTable::kComponents> indicator_probabilities(double ystar, double h, const MixtureTable& table) {
  std::array<double, MixtureTable::kComponents> lp{};
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < MixtureTable::kComponents; ++j) {
    if (table.prob[j] <= 0) {
      lp[j] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double d = ystar - h - table.mean[j];
    lp[j] = std::log(table.prob[j]) - 0.5 * std::log(table.var[j]) - 0.5 * d * d / table.var[j];
    mx = std::max(mx, lp[j]);
  }
  double tot = 0;
  for (auto& v : lp) {
    v = std::exp(v - mx);
    tot += v;
  }
  for (auto& v : lp) v /= tot;
  return lp;
}

std::vector<int> sample_mixture_indicators(const VectorXd& ystar, const VectorXd& h, RngStream& rng,
                                           const MixtureTable& table) {
  require(ystar.size() == h.size(), "indicator draw: data and path lengths differ");
  std::vector<int> s(ystar.size());
  for (Index t = 0; t < ystar.size(); ++t) {
    auto p = indicator_probabilities(ystar(t), h(t), table);
    double u = rng.uniform();
    int j = 0;
    double c = p[0];
    while (u > c && j < MixtureTable::kComponents - 1) c += p[++j];
    // guard against rounding in the cumulative sum landing on a zero-probability tail
    while (p[j] == 0.0 && j > 0) --j;
    s[t] = j;
  }
  return s;
}

VectorXd draw_logvol_path(const VectorXd& ystar, const std::vector<int>& s, const SvParams& par, const VectorXd& noise,
                          const MixtureTable& table) {
  check_params(par);
  const Index T = ystar.size();
  require(static_cast<Index>(s.size()) == T && noise.size() == T, "log-volatility draw: length mismatch");
  VectorXd af(T), Pf(T), ap(T), Pp(T);
  double a = par.mu;
  double P = par.sigma * par.sigma / (1.0 - par.phi * par.phi);
  for (Index t = 0; t < T; ++t) {
    ap(t) = a;
    Pp(t) = P;
    const int j = s[t];
    double F = P + table.var[j];
    double K = P / F;
    a = a + K * (ystar(t) - table.mean[j] - a);
    P = P * table.var[j] / F;
    af(t) = a;
    Pf(t) = P;
    a = par.mu + par.phi * (a - par.mu);
    P = par.phi * par.phi * P + par.sigma * par.sigma;
  }
  VectorXd h(T);
  if (T == 0) return h;
  h(T - 1) = af(T - 1) + std::sqrt(Pf(T - 1)) * noise(T - 1);
  for (Index t = T - 1; t-- > 0;) {
    double J = par.phi * Pf(t) / Pp(t + 1);
    double m = af(t) + J * (h(t + 1) - ap(t + 1));
    double v = std::max(Pf(t) - J * J * Pp(t + 1), 0.0);
    h(t) = m + std::sqrt(v) * noise(t);
  }
  return h;
}

VectorXd draw_logvol_path(const VectorXd& ystar, const std::vector<int>& s, const SvParams& par, RngStream& rng,
                          const MixtureTable& table) {
  VectorXd z(ystar.size());
  for (Index t = 0; t < z.size(); ++t) z(t) = rng.normal();
  return draw_logvol_path(ystar, s, par, z, table);
}

double sv_phi_log_target(const VectorXd& h, double mu, double sigma, double phi, const FsvPriorConfig& prior) {
  if (!(std::abs(phi) < 1.0)) return -std::numeric_limits<double>::infinity();
  double lp = (prior.phi_a - 1.0) * std::log((1.0 + phi) / 2.0) + (prior.phi_b - 1.0) * std::log((1.0 - phi) / 2.0);
  if (h.size() == 0) return lp;
  double s2 = sigma * sigma;
  return lp + 0.5 * std::log(1.0 - phi * phi) - ar_sum_squares(h, mu, phi) / (2.0 * s2);
}

double draw_phi(const VectorXd& h, double mu, double sigma, double phi, const FsvPriorConfig& prior, RngStream& rng,
                bool* accepted) {
  double prop = phi + kPhiProposalSd * rng.normal();
  double u = rng.uniform();
  double lt_new = sv_phi_log_target(h, mu, sigma, prop, prior);
  bool ok = std::isfinite(lt_new) && std::log(u) < lt_new - sv_phi_log_target(h, mu, sigma, phi, prior);
  if (accepted) *accepted = ok;
  return ok ? prop : phi;
}

SvUpdate draw_sv_params(const VectorXd& h, const SvParams& current, const VectorXd& ystar, const std::vector<int>& s,
                        bool fixed_mean, const FsvPriorConfig& prior, RngStream& rng, const MixtureTable& table) {
  check_params(current);
  const Index T = h.size();
  require(T >= 10, "SV parameter draw needs a path of length >= 10");
  require(ystar.size() == T && static_cast<Index>(s.size()) == T, "SV parameter draw: length mismatch");
  SvUpdate out;
  SvParams p = current;
  if (fixed_mean) p.mu = 0.0;

  // centred parametrisation
  if (!fixed_mean) {
    double s2 = p.sigma * p.sigma;
    double one_m = 1.0 - p.phi;
    double prec = 1.0 / prior.mu_var + (1.0 - p.phi * p.phi) / s2 + static_cast<double>(T - 1) * one_m * one_m / s2;
    double num = prior.mu_mean / prior.mu_var + (1.0 - p.phi * p.phi) * h(0) / s2;
    for (Index t = 1; t < T; ++t) num += one_m * (h(t) - p.phi * h(t - 1)) / s2;
    p.mu = num / prec + rng.normal() / std::sqrt(prec);
  }
  p.phi = draw_phi(h, p.mu, p.sigma, p.phi, prior, rng, &out.phi_accepted);
  {
    double S = ar_sum_squares(h, p.mu, p.phi);
    double shape = 0.5 * static_cast<double>(T - 1);
    double prop = 0.5 * S / rng.gamma(shape, 1.0);
    double u = rng.uniform();
    double s2 = p.sigma * p.sigma;
    if (std::isfinite(prop) && prop > 0 && std::log(u) < -(prop - s2) / (2.0 * prior.sigma2_scale)) {
      p.sigma = std::sqrt(prop);
      out.sigma_accepted = true;
    }
  }

  // non-centred move: y* - m_s = mu + sigma htilde + e, e ~ N(0, v_s)
  VectorXd ht = (h.array() - p.mu) / p.sigma;
  Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (Index t = 0; t < T; ++t) {
    const int j = s[t];
    double w = 1.0 / table.var[j];
    double y = ystar(t) - table.mean[j];
    Q(0, 0) += w;
    Q(0, 1) += w * ht(t);
    Q(1, 1) += w * ht(t) * ht(t);
    b(0) += w * y;
    b(1) += w * y * ht(t);
  }
  Q(1, 0) = Q(0, 1);
  Q(1, 1) += 1.0 / prior.sigma2_scale;
  double sig_nc;
  double mu_nc = 0.0;
  if (fixed_mean) {
    double prec = Q(1, 1);
    sig_nc = b(1) / prec + rng.normal() / std::sqrt(prec);
  } else {
    Q(0, 0) += 1.0 / prior.mu_var;
    b(0) += prior.mu_mean / prior.mu_var;
    Eigen::LLT<Eigen::Matrix2d> llt(Q);
    Eigen::Vector2d mean = llt.solve(b);
    Eigen::Vector2d z(rng.normal(), rng.normal());
    Eigen::Vector2d d = llt.matrixU().solve(z);
    mu_nc = mean(0) + d(0);
    sig_nc = mean(1) + d(1);
  }
  if (sig_nc < 0) {
    sig_nc = -sig_nc;
    ht = -ht;
  }
  if (sig_nc > 0 && std::isfinite(sig_nc)) {
    p.sigma = sig_nc;
    p.mu = mu_nc;
    if (fixed_mean) p.mu = 0.0;
  } else {
    // degenerate draw: keep the centred values
    ht = (h.array() - p.mu) / p.sigma;
  }
  out.h = (p.mu + p.sigma * ht.array()).matrix();
  out.params = p;
  return out;
}

}  // namespace mfvar
