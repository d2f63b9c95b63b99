#include "mfvar/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "mfvar/binary_io.hpp"
#include "mfvar/errors.hpp"

namespace mfvar {

namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json config_json(const McmcConfig& c, bool with_run_settings) {
  nlohmann::json j;
  j["iterations"] = c.iterations;
  j["burn_in"] = c.burn_in;
  j["thin"] = c.thin;
  j["lags"] = c.lags;
  j["factors"] = c.factors;
  j["seed"] = c.seed;
  j["chain"] = c.chain;
  j["sampler"] = policy_name(c.sampler);
  j["smoother"] = variant_name(c.smoother);
  j["store_latent"] = c.store_latent;
  j["kappa"] = c.kappa;
  if (with_run_settings) {
    j["workers"] = c.workers;
    j["checkpoint_path"] = c.checkpoint_path;
    j["checkpoint_every"] = c.checkpoint_every;
  }
  return j;
}

McmcConfig config_from_json(const nlohmann::json& j) {
  McmcConfig c;
  c.iterations = j.at("iterations");
  c.burn_in = j.at("burn_in");
  c.thin = j.at("thin");
  c.lags = j.at("lags");
  c.factors = j.at("factors");
  c.seed = j.at("seed");
  c.chain = j.at("chain");
  c.sampler = parse_policy(j.at("sampler"));
  c.smoother = parse_variant(j.at("smoother"));
  c.store_latent = j.at("store_latent");
  c.kappa = j.at("kappa");
  c.workers = j.value("workers", 1);
  c.checkpoint_path = j.value("checkpoint_path", std::string());
  c.checkpoint_every = j.value("checkpoint_every", 0);
  return c;
}

nlohmann::json priors_json(const PriorSet& p) {
  nlohmann::json j;
  j["lambda1"] = p.minnesota.lambda1;
  j["lambda2"] = p.minnesota.lambda2;
  j["lambda3"] = p.minnesota.lambda3;
  j["intercept_sd_multiplier"] = p.minnesota.intercept_sd_multiplier;
  j["scale"] = std::vector<double>(p.minnesota.scale.data(), p.minnesota.scale.data() + p.minnesota.scale.size());
  j["mu_mean"] = p.fsv.mu_mean;
  j["mu_var"] = p.fsv.mu_var;
  j["phi_a"] = p.fsv.phi_a;
  j["phi_b"] = p.fsv.phi_b;
  j["sigma2_scale"] = p.fsv.sigma2_scale;
  j["loading_var"] = p.fsv.loading_var;
  return j;
}

PriorSet priors_from_json(const nlohmann::json& j) {
  PriorSet p;
  p.minnesota.lambda1 = j.at("lambda1");
  p.minnesota.lambda2 = j.at("lambda2");
  p.minnesota.lambda3 = j.at("lambda3");
  p.minnesota.intercept_sd_multiplier = j.at("intercept_sd_multiplier");
  auto s = j.at("scale").get<std::vector<double>>();
  p.minnesota.scale = Eigen::Map<const VectorXd>(s.data(), static_cast<Index>(s.size()));
  p.fsv.mu_mean = j.at("mu_mean");
  p.fsv.mu_var = j.at("mu_var");
  p.fsv.phi_a = j.at("phi_a");
  p.fsv.phi_b = j.at("phi_b");
  p.fsv.sigma2_scale = j.at("sigma2_scale");
  p.fsv.loading_var = j.at("loading_var");
  return p;
}

MatrixXd params_matrix(const std::vector<SvParams>& v) {
  MatrixXd m(static_cast<Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(static_cast<Index>(i)) << v[i].mu, v[i].phi, v[i].sigma;
  return m;
}

std::vector<SvParams> params_from_matrix(const MatrixXd& m) {
  std::vector<SvParams> v(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = {m(i, 0), m(i, 1), m(i, 2)};
  return v;
}

std::string data_fingerprint(const MixedFrequencyDataset& d) {
  return fingerprint(d.monthly()) + fingerprint(d.quarterly()) + std::to_string(d.quarter_phase());
}

MatrixXd latent_quarterly(const MatrixXd& x, int n_monthly) { return x.rightCols(x.cols() - n_monthly); }

// Per-chain update of all n + r univariate SV chains; one keyed stream each.
template <class F>
void for_each_chain(int n_chains, int workers, const char* block, F&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
#pragma omp parallel for num_threads(workers) schedule(dynamic)
  for (int c = 0; c < n_chains; ++c) {
    try {
      body(c);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (int c = 0; c < n_chains; ++c) {
    if (!errors[static_cast<std::size_t>(c)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(c)]);
    } catch (const std::exception& e) {
      throw NumericalError(std::string(block) + " block, volatility chain " + std::to_string(c) + ": " + e.what());
    }
  }
}

}  // namespace

void McmcConfig::validate() const {
  require(iterations >= 0 && burn_in >= 0, "iteration counts must be nonnegative");
  require(burn_in <= iterations, "burn-in must not exceed the total number of iterations");
  require(thin >= 1, "thinning stride must be at least 1");
  require(lags >= kAggregationSpan, "lag order must be at least 5 under triangular aggregation");
  require(factors >= 0, "number of factors must be nonnegative");
  require(workers >= 1, "worker count must be at least 1");
  require(kappa > 0, "initial state variance must be positive");
}

std::string McmcConfig::canonical() const { return config_json(*this, false).dump(); }

PriorSet default_priors(const MixedFrequencyDataset& data) {
  PriorSet p;
  p.minnesota = default_minnesota(data.n_vars(), ar_residual_scale(data));
  return p;
}

MatrixXd var_residuals(const MatrixXd& x, const VarParameters& params) {
  MatrixXd X = build_regressors(x, params.lags);
  MatrixXd u = x.bottomRows(X.rows());
  u.noalias() -= X.rightCols(X.cols() - 1) * params.lag_coefficients.transpose();
  u.rowwise() -= params.intercept.transpose();
  return u;
}

SmootherConditioning smoother_conditioning(const FsvState& fsv, int periods, int lags) {
  const int n = fsv.n_vars();
  require(periods - lags == fsv.periods(), "volatility paths do not match the effective sample");
  SmootherConditioning c;
  c.shift = MatrixXd::Zero(periods, n);
  c.idio_var = MatrixXd::Ones(periods, n);
  c.shift.bottomRows(fsv.periods()) = fsv.common_component();
  c.idio_var.bottomRows(fsv.periods()) = fsv.idio_logvol.array().exp().matrix();
  return c;
}

SamplerState initialize(const MixedFrequencyDataset& data, const McmcConfig& cfg, const PriorSet& priors) {
  cfg.validate();
  priors.minnesota.validate(data.n_vars());
  const int T = data.periods();
  const int nm = data.n_monthly();
  const int nq = data.n_quarterly();
  const int n = data.n_vars();
  const int p = cfg.lags;
  const int r = cfg.factors;
  require(T > p + 10, "sample too short for the lag order");

  for (int j = 0; j < nm; ++j) {
    int cnt = static_cast<int>((data.monthly().col(j).array() == data.monthly().col(j).array()).count());
    if (cnt < 20) throw ValidationError("series '" + data.names()[j] + "' has fewer than 20 observations");
  }
  for (int j = 0; j < nq; ++j) {
    int cnt = static_cast<int>((data.quarterly().col(j).array() == data.quarterly().col(j).array()).count());
    if (cnt < 20) throw ValidationError("series '" + data.names()[nm + j] + "' has fewer than 20 observations");
  }

  SamplerState s;
  s.x = MatrixXd::Zero(T, n);
  // monthly: data, ragged edge filled forward
  for (int j = 0; j < nm; ++j) {
    double last = 0.0;
    for (int t = 0; t < T; ++t) {
      if (data.monthly_observed(t, j)) last = data.monthly()(t, j);
      s.x(t, j) = last;
    }
  }
  // quarterly: spread each release over its quarter, fill gaps from neighbours,
  // then project onto the aggregation constraints
  for (int j = 0; j < nq; ++j) {
    VectorXd v = VectorXd::Constant(T, kMissing);
    for (int t = 0; t < T; ++t) {
      double y = data.quarterly()(t, j);
      if (std::isnan(y)) continue;
      for (int k = 0; k < 3 && t - k >= 0; ++k) v(t - k) = y;
    }
    int first = 0;
    while (first < T && std::isnan(v(first))) ++first;
    for (int t = 0; t < first; ++t) v(t) = v(first);
    for (int t = first + 1; t < T; ++t)
      if (std::isnan(v(t))) v(t) = v(t - 1);
    std::vector<int> rows;
    for (int t = 0; t < T; ++t)
      if (data.quarterly_usable(t, j)) rows.push_back(t);
    if (!rows.empty()) {
      MatrixXd A = MatrixXd::Zero(static_cast<Index>(rows.size()), T);
      VectorXd y(static_cast<Index>(rows.size()));
      for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
        for (int k = 0; k < kAggregationSpan; ++k) A(static_cast<Index>(r2), rows[r2] - k) = kTriangularWeights[k];
        y(static_cast<Index>(r2)) = data.quarterly()(rows[r2], j);
      }
      VectorXd resid = A * v - y;
      v -= A.transpose() * (A * A.transpose()).llt().solve(resid);
    }
    s.x.col(nm + j) = v;
  }

  s.params = VarParameters::zeros(nm, nq, p);
  const Index te = T - p;
  FsvState& f = s.fsv;
  f.loadings = MatrixXd::Zero(n, r);
  f.factors = MatrixXd::Zero(te, r);
  f.factor_logvol = MatrixXd::Zero(te, r);
  f.idio_logvol.resize(te, n);
  f.idio_params.resize(n);
  f.factor_params.assign(r, SvParams{0.0, 0.9, 0.2});
  for (int i = 0; i < n; ++i) {
    auto col = s.x.col(i).tail(te);
    double mean = col.mean();
    double var = (col.array() - mean).square().sum() / static_cast<double>(te - 1);
    if (!(var > 0)) var = 1.0;  // constant series: unit variance on the standardized scale
    f.idio_logvol.col(i).setConstant(std::log(var));
    f.idio_params[i] = SvParams{std::log(var), 0.9, 0.2};
  }

  MatrixXd u = var_residuals(s.x, s.params);
  s.idio_ystar.resize(te, n);
  s.factor_ystar.resize(te, r);
  for (int i = 0; i < n; ++i) s.idio_ystar.col(i) = log_square(u.col(i));
  for (int j = 0; j < r; ++j) s.factor_ystar.col(j) = log_square(f.factors.col(j));
  s.idio_ind.resize(te, n);
  s.factor_ind.resize(te, r);
  for (int c = 0; c < n + r; ++c) {
    RngStream rng = make_stream(cfg.seed, cfg.chain, 0, Block::init, static_cast<std::uint64_t>(c));
    const bool fac = c >= n;
    const VectorXd ys = fac ? s.factor_ystar.col(c - n) : s.idio_ystar.col(c);
    const VectorXd h = fac ? f.factor_logvol.col(c - n) : f.idio_logvol.col(c);
    auto ind = sample_mixture_indicators(ys, h, rng);
    for (Index t = 0; t < te; ++t) (fac ? s.factor_ind(t, c - n) : s.idio_ind(t, c)) = ind[static_cast<std::size_t>(t)];
  }
  return s;
}

void gibbs_sweep(SamplerState& s, const MixedFrequencyDataset& data, const McmcConfig& cfg, const PriorSet& priors,
                 const BlockObserver& observer, std::map<std::string, double>* timings,
                 std::map<std::string, double>* accepted) {
  const std::int64_t it = s.iteration + 1;
  const auto iter = static_cast<std::uint64_t>(it);
  const int n = data.n_vars();
  const int r = s.fsv.n_factors();
  const int p = cfg.lags;
  const int T = data.periods();
  const Index te = T - p;
  FsvState& f = s.fsv;
  auto t0 = Clock::now();
  std::string current;
  auto enter = [&](const std::string& block) {
    auto now = Clock::now();
    if (timings && !current.empty()) (*timings)[current] += std::chrono::duration<double>(now - t0).count();
    t0 = now;
    current = block;
    if (observer) observer(it, block);
  };
  auto stream = [&](Block b, std::uint64_t idx) { return make_stream(cfg.seed, cfg.chain, iter, b, idx); };

  // (phi, mu, sigma | Omega), with the interweaving move on (mu, sigma)
  enter("sv_params");
  std::vector<char> phi_acc(static_cast<std::size_t>(n + r), 0);
  for_each_chain(n + r, cfg.workers, "sv_params", [&](int c) {
    RngStream rng = stream(Block::sv_params, static_cast<std::uint64_t>(c));
    const bool fac = c >= n;
    const int j = fac ? c - n : c;
    const VectorXd h = fac ? f.factor_logvol.col(j) : f.idio_logvol.col(j);
    const VectorXd ys = fac ? s.factor_ystar.col(j) : s.idio_ystar.col(j);
    const Eigen::VectorXi ind = fac ? s.factor_ind.col(j) : s.idio_ind.col(j);
    std::vector<int> sv(ind.data(), ind.data() + ind.size());
    SvUpdate upd = draw_sv_params(h, fac ? f.factor_params[j] : f.idio_params[j], ys, sv, fac, priors.fsv, rng);
    if (fac) {
      f.factor_params[j] = upd.params;
      f.factor_logvol.col(j) = upd.h;
    } else {
      f.idio_params[j] = upd.params;
      f.idio_logvol.col(j) = upd.h;
    }
    phi_acc[static_cast<std::size_t>(c)] = upd.phi_accepted;
  });
  if (accepted)
    for (int c = 0; c < n + r; ++c) (*accepted)["phi"] += phi_acc[static_cast<std::size_t>(c)];

  MatrixXd idio_var = f.idio_logvol.array().exp();
  MatrixXd u = var_residuals(s.x, s.params);

  // Lambda | f, x, Omega
  enter("loadings");
  {
    RngStream rng = stream(Block::loadings, 0);
    f.loadings = draw_loadings(f.factors, u, idio_var, priors.fsv, rng, cfg.workers);
  }

  // f | Lambda, x, Omega
  enter("factors");
  {
    RngStream rng = stream(Block::factors, 0);
    MatrixXd fac_var = f.factor_logvol.array().exp();
    f.factors = draw_factors(f.loadings, u, idio_var, fac_var, rng, cfg.workers);
  }

  // Pi | Lambda, f, x, Omega
  enter("regression");
  {
    MatrixXd common = f.common_component();
    std::vector<VectorXd> pv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pv[static_cast<std::size_t>(i)] = build_prior_diagonal(i, p, priors.minnesota);
    RegressionInputs in{&s.x, p, &common, &idio_var, &pv};
    MatrixXd pi = draw_pi(in, cfg.sampler, cfg.workers, StreamKey{cfg.seed, cfg.chain, iter});
    for (int i = 0; i < n; ++i) s.params.set_equation_row(i, pi.row(i).transpose());
  }

  // x | Pi, Lambda, f, Omega, y
  enter("latent");
  {
    MixedFrequencySmoother sm(s.params, data, cfg.kappa);
    RngStream rng = stream(Block::latent, 0);
    s.x = sm.draw(cfg.smoother, smoother_conditioning(f, T, p), rng).x;
  }

  // s | Pi, Lambda, f, x, Omega
  enter("indicators");
  {
    MatrixXd nu = var_residuals(s.x, s.params) - f.common_component();
    for (int i = 0; i < n; ++i) s.idio_ystar.col(i) = log_square(nu.col(i));
    for (int j = 0; j < r; ++j) s.factor_ystar.col(j) = log_square(f.factors.col(j));
  }
  for_each_chain(n + r, cfg.workers, "indicators", [&](int c) {
    RngStream rng = stream(Block::indicators, static_cast<std::uint64_t>(c));
    const bool fac = c >= n;
    const int j = fac ? c - n : c;
    const VectorXd ys = fac ? s.factor_ystar.col(j) : s.idio_ystar.col(j);
    const VectorXd h = fac ? f.factor_logvol.col(j) : f.idio_logvol.col(j);
    auto ind = sample_mixture_indicators(ys, h, rng);
    for (Index t = 0; t < te; ++t) (fac ? s.factor_ind(t, j) : s.idio_ind(t, j)) = ind[static_cast<std::size_t>(t)];
  });

  // Omega | s, x, phi, mu, sigma
  enter("logvol");
  for_each_chain(n + r, cfg.workers, "logvol", [&](int c) {
    RngStream rng = stream(Block::logvol, static_cast<std::uint64_t>(c));
    const bool fac = c >= n;
    const int j = fac ? c - n : c;
    const VectorXd ys = fac ? s.factor_ystar.col(j) : s.idio_ystar.col(j);
    const Eigen::VectorXi ind = fac ? s.factor_ind.col(j) : s.idio_ind.col(j);
    std::vector<int> sv(ind.data(), ind.data() + ind.size());
    VectorXd h = draw_logvol_path(ys, sv, fac ? f.factor_params[j] : f.idio_params[j], rng);
    if (!h.allFinite()) throw NumericalError("non-finite log-volatility path");
    (fac ? f.factor_logvol.col(j) : f.idio_logvol.col(j)) = h;
  });

  if (timings) (*timings)[current] += std::chrono::duration<double>(Clock::now() - t0).count();
  s.iteration = it;
}

namespace {

DrawRecord make_record(const SamplerState& s, int n_monthly, bool with_x) {
  DrawRecord d;
  d.iteration = s.iteration;
  const int n = s.params.n_vars();
  d.pi.resize(n, 1 + s.params.lag_coefficients.cols());
  for (int i = 0; i < n; ++i) d.pi.row(i) = s.params.equation_row(i).transpose();
  d.loadings = s.fsv.loadings;
  d.factors = s.fsv.factors;
  d.idio_logvol = s.fsv.idio_logvol;
  d.factor_logvol = s.fsv.factor_logvol;
  d.idio_params = params_matrix(s.fsv.idio_params);
  d.factor_params = params_matrix(s.fsv.factor_params);
  d.x_quarterly = latent_quarterly(s.x, n_monthly);
  if (with_x) d.x = s.x;
  return d;
}

struct RunContext {
  McmcConfig cfg;
  PriorSet priors;
  SamplerState state;
  ChainStore store;
  std::map<std::string, double> accepted;
};

void write_state(std::ostream& os, const SamplerState& s) {
  write_u64(os, static_cast<std::uint64_t>(s.iteration));
  write_u64(os, static_cast<std::uint64_t>(s.params.n_monthly));
  write_u64(os, static_cast<std::uint64_t>(s.params.n_quarterly));
  write_u64(os, static_cast<std::uint64_t>(s.params.lags));
  write_matrix(os, s.params.intercept);
  write_matrix(os, s.params.lag_coefficients);
  write_matrix(os, s.fsv.loadings);
  write_matrix(os, s.fsv.factors);
  write_matrix(os, s.fsv.idio_logvol);
  write_matrix(os, s.fsv.factor_logvol);
  write_matrix(os, params_matrix(s.fsv.idio_params));
  write_matrix(os, params_matrix(s.fsv.factor_params));
  write_matrix(os, s.x);
  write_matrix(os, s.idio_ystar);
  write_matrix(os, s.factor_ystar);
  write_matrix(os, s.idio_ind.cast<double>());
  write_matrix(os, s.factor_ind.cast<double>());
}

SamplerState read_state(std::istream& is) {
  SamplerState s;
  s.iteration = static_cast<std::int64_t>(read_u64(is));
  s.params.n_monthly = static_cast<int>(read_u64(is));
  s.params.n_quarterly = static_cast<int>(read_u64(is));
  s.params.lags = static_cast<int>(read_u64(is));
  s.params.intercept = read_matrix(is);
  s.params.lag_coefficients = read_matrix(is);
  s.fsv.loadings = read_matrix(is);
  s.fsv.factors = read_matrix(is);
  s.fsv.idio_logvol = read_matrix(is);
  s.fsv.factor_logvol = read_matrix(is);
  s.fsv.idio_params = params_from_matrix(read_matrix(is));
  s.fsv.factor_params = params_from_matrix(read_matrix(is));
  s.x = read_matrix(is);
  s.idio_ystar = read_matrix(is);
  s.factor_ystar = read_matrix(is);
  s.idio_ind = read_matrix(is).cast<int>();
  s.factor_ind = read_matrix(is).cast<int>();
  return s;
}

constexpr char kCheckpointMagic[4] = {'M', 'F', 'V', 'K'};

void write_checkpoint(const std::string& path, const RunContext& ctx, const std::string& data_fp,
                      const std::string& note) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw ValidationError("cannot write checkpoint '" + path + "'");
    os.write(kCheckpointMagic, 4);
    write_u32(os, 1);
    write_string(os, config_json(ctx.cfg, true).dump());
    write_string(os, priors_json(ctx.priors).dump());
    write_string(os, data_fp);
    write_string(os, note);
    write_string(os, nlohmann::json(ctx.accepted).dump());
    write_state(os, ctx.state);
    ctx.store.write(os);
  }
  std::rename(tmp.c_str(), path.c_str());
}

ChainStore run_loop(RunContext& ctx, const MixedFrequencyDataset& data, const BlockObserver& observer) {
  const McmcConfig& cfg = ctx.cfg;
  const std::string data_fp = data_fingerprint(data);
  const int n_chains = data.n_vars() + cfg.factors;
  while (ctx.state.iteration < cfg.iterations) {
    SamplerState before = ctx.state;
    std::string block;
    auto track = [&](std::int64_t i, const std::string& b) {
      block = b;
      if (observer) observer(i, b);
    };
    try {
      gibbs_sweep(ctx.state, data, cfg, ctx.priors, track, &ctx.store.meta.block_seconds, &ctx.accepted);
    } catch (const std::exception& e) {
      std::string where = "iteration " + std::to_string(before.iteration + 1) + ", block " + block;
      if (!cfg.checkpoint_path.empty()) {
        ctx.state = std::move(before);
        write_checkpoint(cfg.checkpoint_path, ctx, data_fp, where);
      }
      if (dynamic_cast<const ValidationError*>(&e)) throw ValidationError(where + ": " + e.what());
      throw NumericalError(where + ": " + e.what());
    }
    const std::int64_t it = ctx.state.iteration;
    if (it > cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0)
      ctx.store.draws.push_back(make_record(ctx.state, data.n_monthly(), cfg.store_latent));
    if (!cfg.checkpoint_path.empty() && cfg.checkpoint_every > 0 && it % cfg.checkpoint_every == 0)
      write_checkpoint(cfg.checkpoint_path, ctx, data_fp, "periodic");
  }
  if (ctx.state.iteration > 0)
    ctx.store.meta.acceptance["phi"] =
        ctx.accepted["phi"] / (static_cast<double>(ctx.state.iteration) * std::max(1, n_chains));
  return ctx.store;
}

ChainMetadata make_meta(const McmcConfig& cfg, const MixedFrequencyDataset& data) {
  ChainMetadata m;
  m.config_json = config_json(cfg, true).dump();
  m.config_hash = fingerprint(cfg.canonical() + data_fingerprint(data));
  m.seed = cfg.seed;
  m.chain = cfg.chain;
  m.n_monthly = data.n_monthly();
  m.n_quarterly = data.n_quarterly();
  m.lags = cfg.lags;
  m.factors = cfg.factors;
  m.periods = data.periods();
  m.quarter_phase = data.quarter_phase();
  m.workers = cfg.workers;
  m.names = data.names();
  m.center = data.standardization.center;
  m.scale = data.standardization.scale;
  return m;
}

}  // namespace

ChainStore run_mcmc(const McmcConfig& cfg, const MixedFrequencyDataset& data, const PriorSet& priors,
                    const BlockObserver& observer) {
  cfg.validate();
  RunContext ctx{cfg, priors, initialize(data, cfg, priors), ChainStore{}, {}};
  ctx.store.meta = make_meta(cfg, data);
  return run_loop(ctx, data, observer);
}

ChainStore resume_mcmc(const std::string& checkpoint, const MixedFrequencyDataset& data,
                       const BlockObserver& observer) {
  std::ifstream is(checkpoint, std::ios::binary);
  if (!is) throw ValidationError("cannot open checkpoint '" + checkpoint + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kCheckpointMagic, 4) != 0) throw ValidationError("not a checkpoint file");
  if (read_u32(is) != 1) throw ValidationError("unsupported checkpoint version");
  RunContext ctx;
  ctx.cfg = config_from_json(nlohmann::json::parse(read_string(is)));
  ctx.priors = priors_from_json(nlohmann::json::parse(read_string(is)));
  if (read_string(is) != data_fingerprint(data)) throw ValidationError("checkpoint was written for different data");
  read_string(is);  // note
  ctx.accepted = nlohmann::json::parse(read_string(is)).get<std::map<std::string, double>>();
  ctx.state = read_state(is);
  ctx.store = ChainStore::read(is);
  return run_loop(ctx, data, observer);
}

}  // namespace mfvar
