#include "mfvar/chain_store.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mfvar/binary_io.hpp"
#include "mfvar/errors.hpp"

namespace mfvar {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'V', 'C'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const unsigned char* p, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

bool bits_equal(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

std::vector<double> to_vec(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
VectorXd from_vec(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

std::string fingerprint(const std::string& text) {
  return hex(fnv1a(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

std::string fingerprint(const MatrixXd& m) {
  std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  std::uint64_t h = fnv1a(reinterpret_cast<const unsigned char*>(dims), sizeof dims);
  h = fnv1a(reinterpret_cast<const unsigned char*>(m.data()), sizeof(double) * static_cast<std::size_t>(m.size()), h);
  return hex(h);
}

void ChainStore::write(std::ostream& os) const {
  nlohmann::json j;
  j["config_hash"] = meta.config_hash;
  j["config"] = meta.config_json;
  j["seed"] = meta.seed;
  j["chain"] = meta.chain;
  j["n_monthly"] = meta.n_monthly;
  j["n_quarterly"] = meta.n_quarterly;
  j["lags"] = meta.lags;
  j["factors"] = meta.factors;
  j["periods"] = meta.periods;
  j["quarter_phase"] = meta.quarter_phase;
  j["workers"] = meta.workers;
  j["names"] = meta.names;
  j["center"] = to_vec(meta.center);
  j["scale"] = to_vec(meta.scale);
  j["block_seconds"] = meta.block_seconds;
  j["acceptance"] = meta.acceptance;
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_string(os, j.dump());
  write_u64(os, draws.size());
  for (const DrawRecord& d : draws) {
    write_u64(os, static_cast<std::uint64_t>(d.iteration));
    for (const MatrixXd* m : {&d.pi, &d.loadings, &d.factors, &d.idio_logvol, &d.factor_logvol, &d.idio_params,
                              &d.factor_params, &d.x_quarterly, &d.x})
      write_matrix(os, *m);
  }
}

ChainStore ChainStore::read(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("not a chain store file");
  if (read_u32(is) != kVersion) throw ValidationError("unsupported chain store version");
  ChainStore s;
  auto j = nlohmann::json::parse(read_string(is));
  s.meta.config_hash = j.at("config_hash");
  s.meta.config_json = j.at("config");
  s.meta.seed = j.at("seed");
  s.meta.chain = j.at("chain");
  s.meta.n_monthly = j.at("n_monthly");
  s.meta.n_quarterly = j.at("n_quarterly");
  s.meta.lags = j.at("lags");
  s.meta.factors = j.at("factors");
  s.meta.periods = j.at("periods");
  s.meta.quarter_phase = j.value("quarter_phase", 2);
  s.meta.workers = j.at("workers");
  s.meta.names = j.at("names").get<std::vector<std::string>>();
  s.meta.center = from_vec(j.at("center").get<std::vector<double>>());
  s.meta.scale = from_vec(j.at("scale").get<std::vector<double>>());
  s.meta.block_seconds = j.at("block_seconds").get<std::map<std::string, double>>();
  s.meta.acceptance = j.at("acceptance").get<std::map<std::string, double>>();
  std::uint64_t n = read_u64(is);
  s.draws.resize(n);
  for (DrawRecord& d : s.draws) {
    d.iteration = static_cast<std::int64_t>(read_u64(is));
    for (MatrixXd* m : {&d.pi, &d.loadings, &d.factors, &d.idio_logvol, &d.factor_logvol, &d.idio_params,
                        &d.factor_params, &d.x_quarterly, &d.x})
      *m = read_matrix(is);
  }
  return s;
}

void ChainStore::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  write(os);
  if (!os) throw ValidationError("write to '" + path + "' failed");
}

ChainStore ChainStore::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open chain store '" + path + "'");
  return read(is);
}

bool ChainStore::same_payload(const ChainStore& o) const {
  if (meta.config_hash != o.meta.config_hash || meta.seed != o.meta.seed || meta.chain != o.meta.chain ||
      draws.size() != o.draws.size())
    return false;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const DrawRecord& a = draws[k];
    const DrawRecord& b = o.draws[k];
    if (a.iteration != b.iteration) return false;
    if (!bits_equal(a.pi, b.pi) || !bits_equal(a.loadings, b.loadings) || !bits_equal(a.factors, b.factors) ||
        !bits_equal(a.idio_logvol, b.idio_logvol) || !bits_equal(a.factor_logvol, b.factor_logvol) ||
        !bits_equal(a.idio_params, b.idio_params) || !bits_equal(a.factor_params, b.factor_params) ||
        !bits_equal(a.x_quarterly, b.x_quarterly) || !bits_equal(a.x, b.x))
      return false;
  }
  return true;
}

}  // namespace mfvar
