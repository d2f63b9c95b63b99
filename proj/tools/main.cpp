#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mfvar/bench.hpp"
#include "mfvar/diagnostics.hpp"
#include "mfvar/errors.hpp"
#include "mfvar/export.hpp"
#include "mfvar/gibbs.hpp"
#include "mfvar/ingest.hpp"

using namespace mfvar;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Flags override the config file; the config file overrides built-in defaults.
class Settings {
 public:
  void load(const std::string& path) {
    boost::property_tree::ptree pt;
    try {
      boost::property_tree::ini_parser::read_ini(path, pt);
    } catch (const std::exception& e) {
      throw ValidationError("cannot read config '" + path + "': " + e.what());
    }
    static const std::map<std::string, std::vector<std::string>> known = {
        {"model", {"lags", "factors", "smoother", "kappa"}},
        {"prior",
         {"lambda1", "lambda2", "lambda3", "intercept_sd_multiplier", "mu_mean", "mu_var", "phi_a", "phi_b",
          "sigma2_scale", "loading_var"}},
        {"mcmc", {"iters", "burn", "thin", "seed", "chain", "sampler", "workers", "store_latent", "checkpoint_every"}},
        {"io", {"data", "meta", "as_of", "out", "checkpoint"}},
    };
    for (const auto& [section, body] : pt) {
      auto it = known.find(section);
      if (it == known.end()) throw ValidationError("config: unknown section [" + section + "]");
      for (const auto& [key, val] : body) {
        if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
          throw ValidationError("config: unknown key '" + key + "' in [" + section + "]");
        values_[section + "." + key] = val.data();
      }
    }
  }

  template <class T>
  void resolve(const std::string& key, const std::optional<T>& flag, T& target) const {
    if (flag) {
      target = *flag;
      return;
    }
    auto it = values_.find(key);
    if (it == values_.end()) return;
    std::istringstream is(it->second);
    T v{};
    if constexpr (std::is_same_v<T, bool>) {
      std::string s;
      is >> s;
      if (s != "true" && s != "false" && s != "1" && s != "0")
        throw ValidationError("config: '" + key + "' must be true or false");
      v = s == "true" || s == "1";
    } else if constexpr (std::is_same_v<T, std::string>) {
      v = it->second;
    } else {
      if (!(is >> v) || !(is >> std::ws).eof()) throw ValidationError("config: cannot parse '" + key + "'");
    }
    target = v;
  }

 private:
  std::map<std::string, std::string> values_;
};

struct EstimateArgs {
  std::string config;
  std::optional<std::string> data, meta, as_of, out, checkpoint, sampler, smoother;
  std::optional<int> iters, burn, thin, lags, factors, workers, checkpoint_every;
  std::optional<std::uint64_t> seed, chain;
  std::optional<double> kappa, lambda1, lambda2, lambda3;
  std::optional<bool> store_latent;
  std::string resume;
  bool quiet = false;
};

int run_estimate(const EstimateArgs& a) {
  Settings s;
  if (!a.config.empty()) s.load(a.config);
  std::string data_path, meta_path, as_of = "9999-12-31", out = "chain.mfvc";
  s.resolve("io.data", a.data, data_path);
  s.resolve("io.meta", a.meta, meta_path);
  s.resolve("io.as_of", a.as_of, as_of);
  s.resolve("io.out", a.out, out);
  if (data_path.empty() || meta_path.empty()) throw ValidationError("estimate needs --data and --meta");

  IngestResult in = ingest(data_path, meta_path, Date::parse(as_of));
  const auto& d = in.data;
  std::cerr << "data: " << d.periods() << " months, " << d.n_monthly() << " monthly, " << d.n_quarterly()
            << " quarterly, balanced through row " << d.balanced_end() << "\n";

  auto progress = [&](std::int64_t it, const std::string& block) {
    if (!a.quiet && block == "sv_params" && it % 500 == 0) std::cerr << "iteration " << it << "\n";
  };

  ChainStore store;
  if (!a.resume.empty()) {
    store = resume_mcmc(a.resume, d, progress);
  } else {
    McmcConfig cfg;
    std::string sampler = policy_name(cfg.sampler), smoother = variant_name(cfg.smoother);
    s.resolve("mcmc.iters", a.iters, cfg.iterations);
    s.resolve("mcmc.burn", a.burn, cfg.burn_in);
    s.resolve("mcmc.thin", a.thin, cfg.thin);
    s.resolve("mcmc.seed", a.seed, cfg.seed);
    s.resolve("mcmc.chain", a.chain, cfg.chain);
    s.resolve("mcmc.sampler", a.sampler, sampler);
    s.resolve("mcmc.workers", a.workers, cfg.workers);
    s.resolve("mcmc.store_latent", a.store_latent, cfg.store_latent);
    s.resolve("mcmc.checkpoint_every", a.checkpoint_every, cfg.checkpoint_every);
    s.resolve("model.lags", a.lags, cfg.lags);
    s.resolve("model.factors", a.factors, cfg.factors);
    s.resolve("model.smoother", a.smoother, smoother);
    s.resolve("model.kappa", a.kappa, cfg.kappa);
    s.resolve("io.checkpoint", a.checkpoint, cfg.checkpoint_path);
    cfg.sampler = parse_policy(sampler);
    cfg.smoother = parse_variant(smoother);

    PriorSet priors = default_priors(d);
    const std::optional<double> none;
    s.resolve("prior.lambda1", a.lambda1, priors.minnesota.lambda1);
    s.resolve("prior.lambda2", a.lambda2, priors.minnesota.lambda2);
    s.resolve("prior.lambda3", a.lambda3, priors.minnesota.lambda3);
    s.resolve("prior.intercept_sd_multiplier", none, priors.minnesota.intercept_sd_multiplier);
    s.resolve("prior.mu_mean", none, priors.fsv.mu_mean);
    s.resolve("prior.mu_var", none, priors.fsv.mu_var);
    s.resolve("prior.phi_a", none, priors.fsv.phi_a);
    s.resolve("prior.phi_b", none, priors.fsv.phi_b);
    s.resolve("prior.sigma2_scale", none, priors.fsv.sigma2_scale);
    s.resolve("prior.loading_var", none, priors.fsv.loading_var);
    store = run_mcmc(cfg, d, priors, progress);
  }
  store.save(out);
  std::cerr << "saved " << store.draws.size() << " draws to " << out << "\n";
  for (const auto& [block, sec] : store.meta.block_seconds) std::cerr << "  " << block << ": " << sec << " s\n";
  return 0;
}

int run_bench(const std::string& spec_path, const std::string& out, std::optional<int> workers) {
  std::ifstream is(spec_path);
  if (!is) throw ValidationError("cannot open benchmark spec '" + spec_path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  BenchSpec spec = BenchSpec::from_json(ss.str());
  if (workers) spec.workers = *workers;
  BenchTable t = bench_smoothers(spec);
  write_bench_csv(t, out);
  for (const auto& r : t.rows)
    std::printf("%-20s n=%-4d p=%-3d median %.4f s\n", variant_name(r.variant).c_str(), r.n_vars, r.lags,
                r.median_seconds);
  return 0;
}

int run_diagnose(const std::string& chain, const std::string& out) {
  ChainStore store = ChainStore::load(chain);
  IfSummary s = summarize_if(store);
  std::printf("%-12s %6s %8s %8s %8s %8s %8s %8s %6s\n", "group", "count", "min", "p50", "p75", "p95", "p99", "max",
              ">20");
  for (const auto& g : s.groups)
    std::printf("%-12s %6zu %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f %6.3f\n", g.group.c_str(), g.count, g.min, g.p50,
                g.p75, g.p95, g.p99, g.max, g.share_above_20);
  for (const auto& [k, v] : store.meta.acceptance) std::printf("acceptance %s: %.3f\n", k.c_str(), v);
  if (!out.empty()) write_table(export_table(store, "if_summary"), "csv", out);
  return 0;
}

int run_export(const std::string& chain, const std::string& what, const std::string& format, std::string out,
               const std::string& vol_mode) {
  ChainStore store = ChainStore::load(chain);
  VolAggregation mode;
  if (vol_mode == "squared")
    mode = VolAggregation::squared_weights;
  else if (vol_mode == "sd")
    mode = VolAggregation::sd_weights;
  else
    throw ValidationError("unknown volatility aggregation '" + vol_mode + "' (squared or sd)");
  if (out.empty()) out = what + "." + format;
  write_table(export_table(store, what, mode), format, out);
  std::cerr << "wrote " << out << "\n";
  return 0;
}

int run_simulate(const SyntheticSpec& spec, const std::string& data_out, const std::string& meta_out) {
  SyntheticSystem sys = make_synthetic(spec);
  IngestResult r;
  const int n = sys.data.n_vars();
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) {
    SeriesMeta m;
    m.id = j < sys.data.n_monthly() ? "m" + std::to_string(j + 1) : "q" + std::to_string(j - sys.data.n_monthly() + 1);
    m.frequency = j < sys.data.n_monthly() ? Frequency::monthly : Frequency::quarterly;
    r.meta.push_back(m);
    names.push_back(m.id);
  }
  for (int t = 0; t < sys.data.periods(); ++t) r.dates.push_back(Date{1960 + t / 12, 1 + t % 12, 1});
  r.data = MixedFrequencyDataset(sys.data.monthly(), sys.data.quarterly(), 2, names);
  r.data.standardization = {VectorXd::Zero(n), VectorXd::Ones(n)};
  write_dataset(r, data_out, meta_out);
  std::cerr << "wrote " << data_out << " and " << meta_out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-frequency BVAR with factor stochastic volatility"};
  app.require_subcommand(1);

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Run the Gibbs sampler and save a chain store");
  est->add_option("--config", ea.config, "INI file with [model], [prior], [mcmc], [io] sections");
  est->add_option("--data", ea.data, "CSV: date column then one column per series");
  est->add_option("--meta", ea.meta, "CSV: id,frequency,transform,delay_months,delay_day");
  est->add_option("--as-of", ea.as_of, "snapshot date YYYY-MM-DD");
  est->add_option("--iters", ea.iters);
  est->add_option("--burn", ea.burn);
  est->add_option("--thin", ea.thin);
  est->add_option("--lags", ea.lags);
  est->add_option("--factors", ea.factors);
  est->add_option("--seed", ea.seed);
  est->add_option("--chain-id", ea.chain);
  est->add_option("--sampler", ea.sampler, "auto | rue | bhattacharya");
  est->add_option("--smoother", ea.smoother, "companion | adaptive | adaptive-univariate");
  est->add_option("--kappa", ea.kappa, "initial state variance");
  est->add_option("--lambda1", ea.lambda1);
  est->add_option("--lambda2", ea.lambda2);
  est->add_option("--lambda3", ea.lambda3);
  est->add_option("--workers", ea.workers);
  est->add_option("--store-latent", ea.store_latent, "keep full latent paths in the store");
  est->add_option("--checkpoint", ea.checkpoint, "checkpoint file (written on failure and periodically)");
  est->add_option("--checkpoint-every", ea.checkpoint_every);
  est->add_option("--resume", ea.resume, "continue from a checkpoint");
  est->add_option("--out", ea.out, "chain store path");
  est->add_flag("--quiet", ea.quiet);

  std::string spec_path, bench_out = "bench.csv";
  std::optional<int> bench_workers;
  auto* bench = app.add_subcommand("bench", "Time the simulation smoothers on synthetic systems");
  bench->add_option("--spec", spec_path, "JSON benchmark spec")->required();
  bench->add_option("--out", bench_out);
  bench->add_option("--workers", bench_workers);

  std::string diag_chain, diag_out;
  auto* diag = app.add_subcommand("diagnose", "Inefficiency factors by parameter group");
  diag->add_option("--chain", diag_chain)->required();
  diag->add_option("--out", diag_out);

  std::string ex_chain, ex_what, ex_format = "csv", ex_out, ex_vol = "squared";
  auto* exp = app.add_subcommand("export", "Write draws or summaries");
  exp->add_option("--chain", ex_chain)->required();
  exp->add_option("--what", ex_what, "pi_mean | pi_draws | loadings | factor_vol | idio_vol | gdp_vol | "
                                     "latent_gdp | sv_params | if_summary")
      ->required();
  exp->add_option("--format", ex_format, "csv | bin");
  exp->add_option("--out", ex_out);
  exp->add_option("--vol-aggregation", ex_vol, "squared | sd");

  SyntheticSpec sim;
  std::string sim_data = "synthetic.csv", sim_meta = "synthetic_meta.csv";
  auto* simc = app.add_subcommand("simulate", "Write a synthetic mixed-frequency panel");
  simc->add_option("--monthly", sim.n_monthly);
  simc->add_option("--quarterly", sim.n_quarterly);
  simc->add_option("--lags", sim.lags);
  simc->add_option("--periods", sim.periods);
  simc->add_option("--factors", sim.factors);
  simc->add_option("--seed", sim.seed);
  simc->add_option("--out-data", sim_data);
  simc->add_option("--out-meta", sim_meta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*est) return run_estimate(ea);
    if (*bench) return run_bench(spec_path, bench_out, bench_workers);
    if (*diag) return run_diagnose(diag_chain, diag_out);
    if (*exp) return run_export(ex_chain, ex_what, ex_format, ex_out, ex_vol);
    if (*simc) return run_simulate(sim, sim_data, sim_meta);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
