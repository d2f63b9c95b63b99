#pragma once

#include <memory>
#include <vector>

#include "mfvar/kalman.hpp"
#include "mfvar/model.hpp"
#include "oracles.hpp"

namespace testsys {

using namespace mfvar;

// Random compact-form steps: n_m monthly rows with diagonal noise, quarterly
// aggregation rows at every third period with zero noise, random monthly gaps.
inline std::vector<StepModel> random_compact_steps(int nm, int nq, int p, int T, int cols, RngStream& rng,
                                                   double miss_prob = 0.2) {
  VarParameters v = VarParameters::zeros(nm, nq, p);
  v.lag_coefficients = oracle::random_matrix(nm + nq, (nm + nq) * p, rng, 0.15 / p);
  MatrixXd chol = MatrixXd::Identity(nm + nq, nm + nq);
  chol.bottomLeftCorner(nq, nm) = oracle::random_matrix(nq, nm, rng, 0.3);
  StateSpaceSystem sys = build_compact_system(v, chol, build_aggregation_matrix(nq, p));
  const int m = sys.state_dim();
  auto transition = std::make_shared<const MatrixXd>(sys.T);
  std::vector<StepModel> steps(T);
  for (int t = 0; t < T; ++t) {
    StepModel& s = steps[t];
    s.transition = transition;
    MatrixXd X = oracle::random_matrix(sys.n_exog(), cols, rng);
    s.state_intercept = sys.D * X;
    if (t == 0) {
      s.state_noise = 3.0 * MatrixXd::Identity(m, m);
    } else {
      s.state_noise = MatrixXd::Zero(m, nq);
      s.state_noise.topRows(nq) = oracle::random_matrix(nq, nq, rng, 0.5) + MatrixXd::Identity(nq, nq);
    }
    std::vector<int> rows;
    for (int j = 0; j < nm; ++j)
      if (rng.uniform() > miss_prob) rows.push_back(j);
    if (t % 3 == 2 && t >= 4)
      for (int j = 0; j < nq; ++j) rows.push_back(nm + j);
    const Index nt = static_cast<Index>(rows.size());
    MatrixXd Z(nt, m), c(nt, cols);
    s.obs_var.resize(nt);
    MatrixXd CX = sys.C * X;
    for (Index r = 0; r < nt; ++r) {
      Z.row(r) = sys.Z.row(rows[r]);
      c.row(r) = CX.row(rows[r]);
      s.obs_var(r) = rows[r] < nm ? 0.2 + rng.uniform() : 0.0;
    }
    s.design = std::make_shared<const MatrixXd>(Z);
    s.obs_intercept = c;
    s.obs = oracle::random_matrix(nt, cols, rng, 2.0);
  }
  return steps;
}

}  // namespace testsys
