#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mfvar/linalg.hpp"

namespace mfvar {

// Little-endian primitives; matrices as (int64 rows, int64 cols, column-major doubles).
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f64(std::ostream& os, double v);
void write_string(std::ostream& os, const std::string& s);
void write_matrix(std::ostream& os, const MatrixXd& m);

std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
double read_f64(std::istream& is);
std::string read_string(std::istream& is);
MatrixXd read_matrix(std::istream& is);

// Standalone matrix file: "MFVB" magic, uint32 version (1), matrix payload.
void save_matrix_binary(const std::string& path, const MatrixXd& m);
MatrixXd load_matrix_binary(const std::string& path);

}  // namespace mfvar
