#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mfvar/bench.hpp"
#include "mfvar/binary_io.hpp"
#include "mfvar/errors.hpp"
#include "mfvar/export.hpp"
#include "mfvar/gibbs.hpp"

using namespace mfvar;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mfvar_export_" + name)).string();
}

const ChainStore& shared_store() {
  static const ChainStore store = [] {
    SyntheticSpec spec;
    spec.n_monthly = 3;
    spec.periods = 90;
    SyntheticSystem sys = make_synthetic(spec);
    McmcConfig c;
    c.iterations = 80;
    c.burn_in = 20;
    c.thin = 1;
    c.lags = 5;
    return run_mcmc(c, sys.data, default_priors(sys.data));
  }();
  return store;
}

}  // namespace

TEST_CASE("export table shapes") {
  const ChainStore& s = shared_store();
  const Index D = static_cast<Index>(s.draws.size());
  const Index n = 4, p = 5, te = 90 - 5;
  CHECK(export_table(s, "pi_mean").values.rows() == n);
  CHECK(export_table(s, "pi_mean").values.cols() == n * p + 1);
  CHECK(export_table(s, "pi_draws").values.rows() == D);
  CHECK(export_table(s, "pi_draws").values.cols() == n * (n * p + 1));
  CHECK(export_table(s, "loadings").values.cols() == n);
  Table fv = export_table(s, "factor_vol");
  CHECK(fv.values.rows() == te);
  CHECK(fv.values.cols() == 3);
  CHECK((fv.values.col(0).array() <= fv.values.col(1).array()).all());
  CHECK((fv.values.col(1).array() <= fv.values.col(2).array()).all());
  CHECK(export_table(s, "idio_vol").values.cols() == 3 * n);
  CHECK(export_table(s, "gdp_vol").values.cols() == 3);
  CHECK(export_table(s, "latent_gdp").values.rows() == 90);
  CHECK(export_table(s, "sv_params").values.cols() == 3 * (n + 1));
  CHECK(export_table(s, "if_summary").values.cols() == 8);
  for (const auto& w : export_selectors()) CHECK(export_table(s, w).columns.size() == static_cast<std::size_t>(export_table(s, w).values.cols()));
  CHECK_THROWS_AS(export_table(s, "everything"), ValidationError);
}

TEST_CASE("binary export round trip") {
  Table t = export_table(shared_store(), "pi_draws");
  const std::string path = temp_path("pi.bin");
  write_table(t, "bin", path);
  MatrixXd back = load_matrix_binary(path);
  CHECK(back.rows() == t.values.rows());
  CHECK(std::memcmp(back.data(), t.values.data(), sizeof(double) * t.values.size()) == 0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_table(t, "xlsx", path), ValidationError);

  const std::string csv = temp_path("pi.csv");
  write_table(export_table(shared_store(), "pi_mean"), "csv", csv);
  std::ifstream is(csv);
  std::string head;
  std::getline(is, head);
  CHECK(head.find(',') != std::string::npos);
  std::remove(csv.c_str());
}

TEST_CASE("chain store round trip") {
  std::stringstream ss;
  shared_store().write(ss);
  ChainStore back = ChainStore::read(ss);
  CHECK(back.same_payload(shared_store()));
  CHECK(back.meta.quarter_phase == shared_store().meta.quarter_phase);
  std::stringstream junk("not a store");
  CHECK_THROWS_AS(ChainStore::read(junk), ValidationError);
}
