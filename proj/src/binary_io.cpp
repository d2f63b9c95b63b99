#include "mfvar/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "mfvar/errors.hpp"

namespace mfvar {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace {
template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ValidationError("truncated binary input");
  return v;
}
constexpr char kMatrixMagic[4] = {'M', 'F', 'V', 'B'};
}  // namespace

void write_u32(std::ostream& os, std::uint32_t v) { put(os, v); }
void write_u64(std::ostream& os, std::uint64_t v) { put(os, v); }
void write_f64(std::ostream& os, double v) { put(os, v); }
std::uint32_t read_u32(std::istream& is) { return get<std::uint32_t>(is); }
std::uint64_t read_u64(std::istream& is) { return get<std::uint64_t>(is); }
double read_f64(std::istream& is) { return get<double>(is); }

void write_string(std::ostream& os, const std::string& s) {
  write_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
  std::uint64_t n = read_u64(is);
  if (n > (1ull << 32)) throw ValidationError("corrupt string length in binary input");
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw ValidationError("truncated binary input");
  return s;
}

void write_matrix(std::ostream& os, const MatrixXd& m) {
  write_u64(os, static_cast<std::uint64_t>(m.rows()));
  write_u64(os, static_cast<std::uint64_t>(m.cols()));
  os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
}

MatrixXd read_matrix(std::istream& is) {
  std::uint64_t r = read_u64(is);
  std::uint64_t c = read_u64(is);
  if (r > (1ull << 31) || c > (1ull << 31)) throw ValidationError("corrupt matrix header in binary input");
  MatrixXd m(static_cast<Index>(r), static_cast<Index>(c));
  is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!is) throw ValidationError("truncated matrix payload");
  return m;
}

void save_matrix_binary(const std::string& path, const MatrixXd& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  os.write(kMatrixMagic, 4);
  write_u32(os, 1);
  write_matrix(os, m);
  if (!os) throw ValidationError("write to '" + path + "' failed");
}

MatrixXd load_matrix_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMatrixMagic, 4) != 0) throw ValidationError("'" + path + "' is not a matrix file");
  if (read_u32(is) != 1) throw ValidationError("unsupported matrix file version");
  return read_matrix(is);
}

}  // namespace mfvar
