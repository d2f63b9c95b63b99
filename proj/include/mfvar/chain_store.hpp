#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfvar/linalg.hpp"

namespace mfvar {

// One retained draw. Parameter matrices: idio_params n x 3 and factor_params
// r x 3 with columns (mu, phi, sigma).
struct DrawRecord {
  std::int64_t iteration = 0;
  MatrixXd pi;             // n x (np+1), regressor order
  MatrixXd loadings;       // n x r
  MatrixXd factors;        // T_eff x r
  MatrixXd idio_logvol;    // T_eff x n
  MatrixXd factor_logvol;  // T_eff x r
  MatrixXd idio_params;
  MatrixXd factor_params;
  MatrixXd x_quarterly;    // T x n_q latent monthly values of quarterly series
  MatrixXd x;              // T x n, empty unless requested
};

struct ChainMetadata {
  std::string config_hash;
  std::string config_json;
  std::uint64_t seed = 0;
  std::uint64_t chain = 0;
  int n_monthly = 0;
  int n_quarterly = 0;
  int lags = 0;
  int factors = 0;
  int periods = 0;
  int quarter_phase = 2;  // quarter-end rows: t % 3 == quarter_phase
  int workers = 1;
  std::vector<std::string> names;
  VectorXd center;  // back-transformation constants, may be empty
  VectorXd scale;
  // not part of the payload: run-dependent
  std::map<std::string, double> block_seconds;
  std::map<std::string, double> acceptance;
};

class ChainStore {
 public:
  ChainMetadata meta;
  std::vector<DrawRecord> draws;

  void save(const std::string& path) const;
  static ChainStore load(const std::string& path);
  void write(std::ostream& os) const;
  static ChainStore read(std::istream& is);

  // Bitwise comparison of draws and of the run-independent metadata.
  bool same_payload(const ChainStore& other) const;
};

// FNV-1a, stable across platforms; used for config/data fingerprints.
std::string fingerprint(const std::string& text);
std::string fingerprint(const MatrixXd& m);

}  // namespace mfvar
