// Serial vs OpenMP timings of the parallel kernels. Each parallel result is
// checked bitwise against its serial reference before timing is reported.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <omp.h>

#include "mfvar/bench.hpp"
#include "mfvar/fsv.hpp"
#include "mfvar/priors.hpp"
#include "mfvar/regression.hpp"
#include "mfvar/rng.hpp"
#include "mfvar/stochvol.hpp"

using namespace mfvar;

namespace {

template <class F>
double best_of(int reps, F f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

void report(const char* name, double serial, double par, int workers, bool ok) {
  std::printf("%-14s serial %9.4f s  omp(%d) %9.4f s  speedup %5.2f  %s\n", name, serial, workers, par,
              serial / par, ok ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] == '-') {
    std::printf("usage: kernel_bench [n_vars=40] [lags=6] [workers=max]\n");
    return 0;
  }
  const int n = argc > 1 ? std::atoi(argv[1]) : 40;
  const int p = argc > 2 ? std::atoi(argv[2]) : 6;
  const int workers = argc > 3 ? std::atoi(argv[3]) : omp_get_max_threads();
  if (n < 2 || p < 5 || workers < 1) {
    std::fprintf(stderr, "need n_vars >= 2, lags >= 5, workers >= 1\n");
    return 2;
  }
  const int T = 300;
  const int reps = 3;
  std::printf("n=%d p=%d T=%d workers=%d\n", n, p, T, workers);
  bool all_ok = true;

  SyntheticSpec ss;
  ss.n_monthly = n - 1;
  ss.lags = p;
  ss.periods = T;
  ss.ragged = false;
  SyntheticSystem sys = make_synthetic(ss);
  const Index te = T - p;
  MatrixXd common = sys.fsv.common_component();
  MatrixXd idio_var = sys.fsv.idio_logvol.array().exp();
  MinnesotaConfig mc = default_minnesota(n, VectorXd::Ones(n));
  std::vector<VectorXd> pv;
  for (int i = 0; i < n; ++i) pv.push_back(build_prior_diagonal(i, p, mc));
  RegressionInputs in{&sys.x, p, &common, &idio_var, &pv};
  StreamKey key{7, 0, 1};

  {
    MatrixXd a, b;
    double s = best_of(reps, [&] { a = draw_pi_serial(in, SamplerPolicy::automatic, key); });
    double q = best_of(reps, [&] { b = draw_pi(in, SamplerPolicy::automatic, workers, key); });
    all_ok &= same(a, b);
    report("draw_pi", s, q, workers, same(a, b));
  }

  {
    // one FFBS path per chain, per-chain keyed streams
    const int chains = n + 1;
    MatrixXd ys(te, chains);
    for (int c = 0; c < chains; ++c) {
      RngStream rng = make_stream(7, 0, 1, Block::bench, static_cast<std::uint64_t>(c));
      for (Index t = 0; t < te; ++t) ys(t, c) = std::log(std::pow(rng.normal(), 2) + 1e-8);
    }
    std::vector<int> s0(static_cast<std::size_t>(te), 4);
    auto run = [&](int w) {
      MatrixXd h(te, chains);
#pragma omp parallel for num_threads(w) schedule(dynamic)
      for (int c = 0; c < chains; ++c) {
        RngStream rng = make_stream(7, 0, 2, Block::bench, static_cast<std::uint64_t>(c));
        h.col(c) = draw_logvol_path(ys.col(c), s0, SvParams{0.0, 0.9, 0.2}, rng);
      }
      return h;
    };
    MatrixXd a, b;
    double s = best_of(reps, [&] { a = run(1); });
    double q = best_of(reps, [&] { b = run(workers); });
    all_ok &= same(a, b);
    report("sv_chains", s, q, workers, same(a, b));
  }

  {
    MatrixXd u = sys.x.bottomRows(te);
    FsvPriorConfig fp;
    MatrixXd a, b;
    double s = best_of(reps, [&] {
      RngStream rng = make_stream(7, 0, 3, Block::bench, 0);
      a = draw_loadings(sys.fsv.factors, u, idio_var, fp, rng, 1);
    });
    double q = best_of(reps, [&] {
      RngStream rng = make_stream(7, 0, 3, Block::bench, 0);
      b = draw_loadings(sys.fsv.factors, u, idio_var, fp, rng, workers);
    });
    all_ok &= same(a, b);
    report("loadings", s, q, workers, same(a, b));
  }
  return all_ok ? 0 : 1;
}
