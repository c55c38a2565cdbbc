#include "krec/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "krec/error.hpp"

namespace krec {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

enum class Field { Real, Complex };
enum class Symmetry { General, Symmetric, Hermitian, Skew };

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw BannerError("empty input", 1);
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field_s, sym_s;
  banner >> tag >> object >> format >> field_s >> sym_s;
  if (tag != "%%MatrixMarket") throw BannerError("missing %%MatrixMarket banner", lineno);
  if (lower(object) != "matrix" || lower(format) != "coordinate")
    throw BannerError("only 'matrix coordinate' files are supported", lineno);
  Field field;
  field_s = lower(field_s);
  if (field_s == "real" || field_s == "integer" || field_s == "double")
    field = Field::Real;
  else if (field_s == "complex")
    field = Field::Complex;
  else
    throw BannerError("unsupported field '" + field_s + "'", lineno);
  Symmetry sym;
  sym_s = lower(sym_s);
  if (sym_s == "general")
    sym = Symmetry::General;
  else if (sym_s == "symmetric")
    sym = Symmetry::Symmetric;
  else if (sym_s == "hermitian")
    sym = Symmetry::Hermitian;
  else if (sym_s == "skew-symmetric")
    sym = Symmetry::Skew;
  else
    throw BannerError("unsupported symmetry '" + sym_s + "'", lineno);

  // Size line, after comments and blank lines.
  Index nrows = 0, ncols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) throw MalformedLineError("missing size line", lineno + 1);
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ss(line);
    if (!(ss >> nrows >> ncols >> nnz) || nrows <= 0 || ncols <= 0 || nnz < 0)
      throw MalformedLineError("malformed size line", lineno);
    std::string extra;
    if (ss >> extra) throw MalformedLineError("trailing data on size line", lineno);
    break;
  }
  if (sym != Symmetry::General && nrows != ncols)
    throw MalformedLineError("symmetric storage requires a square matrix", lineno);

  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(sym == Symmetry::General ? nnz : 2 * nnz));
  Index read = 0;
  while (read < nnz) {
    if (!std::getline(in, line))
      throw MalformedLineError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(read),
                               lineno + 1);
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ss(line);
    Index i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ss >> i >> j >> re)) throw MalformedLineError("malformed entry", lineno);
    if (field == Field::Complex && !(ss >> im)) throw MalformedLineError("missing imaginary part", lineno);
    std::string extra;
    if (ss >> extra) throw MalformedLineError("trailing data on entry line", lineno);
    if (i < 1 || i > nrows || j < 1 || j > ncols)
      throw IndexOutOfBoundsError("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                                      std::to_string(nrows) + " x " + std::to_string(ncols),
                                  lineno);
    const Complex v(re, im);
    triplets.push_back({i - 1, j - 1, v});
    if (i != j) {
      switch (sym) {
        case Symmetry::General:
          break;
        case Symmetry::Symmetric:
          triplets.push_back({j - 1, i - 1, v});
          break;
        case Symmetry::Hermitian:
          triplets.push_back({j - 1, i - 1, std::conj(v)});
          break;
        case Symmetry::Skew:
          triplets.push_back({j - 1, i - 1, -v});
          break;
      }
    }
    ++read;
  }
  return SparseMatrix::from_triplets(nrows, ncols, std::move(triplets));
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_matrix_market(in);
}

void write_matrix_market(const SparseMatrix& A, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonzeros() << '\n';
  out << std::setprecision(17);
  const auto& ro = A.row_offsets();
  const auto& ci = A.col_indices();
  const auto& va = A.values();
  for (Index i = 0; i < A.rows(); ++i)
    for (Index p = ro[i]; p < ro[i + 1]; ++p)
      out << i + 1 << ' ' << ci[p] + 1 << ' ' << va[p].real() << ' ' << va[p].imag() << '\n';
}

void write_matrix_market(const SparseMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_matrix_market(A, out);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace krec
