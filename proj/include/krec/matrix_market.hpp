#pragma once

#include <iosfwd>
#include <string>

#include "krec/sparse.hpp"

namespace krec {

/// Reads a coordinate Matrix Market file (real, integer or complex;
/// general, symmetric, hermitian or skew-symmetric). Symmetric storage is
/// expanded and duplicate entries are summed. Errors derive from
/// ParseError and carry the line number.
SparseMatrix read_matrix_market(const std::string& path);
SparseMatrix read_matrix_market(std::istream& in);

/// Writes a complex general coordinate file with 17 significant digits.
void write_matrix_market(const SparseMatrix& A, const std::string& path);
void write_matrix_market(const SparseMatrix& A, std::ostream& out);

}  // namespace krec
