#include "gaussmax/corrmat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gaussmax/error.hpp"

namespace gaussmax {
namespace {

std::string describe(std::size_t row, std::size_t col, double value) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "entry (" << row + 1 << ", " << col + 1 << ") = " << value;
  return msg.str();
}

// LDL^T without pivoting. A pivot within tolerance of zero is treated as an
// exact zero, which then requires the rest of its column to vanish as well.
void require_positive_semidefinite(std::size_t n, const std::vector<double>& a) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a[i * n + i]));
  const double tol = CorrelationMatrix::kPivotTolerance * std::max(max_diag, 1.0);
  const double column_tol = std::sqrt(tol);

  std::vector<double> l(n * n, 0.0);
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double pivot = a[k * n + k];
    for (std::size_t j = 0; j < k; ++j) pivot -= l[k * n + j] * l[k * n + j] * d[j];
    if (pivot < -tol) {
      std::ostringstream msg;
      msg << "matrix is not positive semidefinite (pivot " << k + 1 << " = " << pivot << ")";
      throw Error(ErrorCode::NotPositiveSemidefinite, msg.str());
    }
    const bool zero_pivot = pivot <= tol;
    d[k] = zero_pivot ? 0.0 : pivot;
    l[k * n + k] = 1.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = a[i * n + k];
      for (std::size_t j = 0; j < k; ++j) s -= l[i * n + j] * l[k * n + j] * d[j];
      if (zero_pivot) {
        if (std::abs(s) > column_tol) {
          throw Error(ErrorCode::NotPositiveSemidefinite,
                      "matrix is not positive semidefinite (singular leading block with "
                      "nonzero coupling at row " + std::to_string(i + 1) + ")");
        }
        l[i * n + k] = 0.0;
      } else {
        l[i * n + k] = s / pivot;
      }
    }
  }
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 2 || entries_.size() != dim_ * dim_) {
    throw Error(ErrorCode::InvalidArgument,
                "correlation matrix needs dim*dim entries with dim >= 2");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "matrix has a non-finite entry");
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (entries_[i * dim_ + i] != 1.0) {
      throw Error(ErrorCode::NonUnitDiagonal, "diagonal " + describe(i, i, entries_[i * dim_ + i]));
    }
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const double upper = entries_[i * dim_ + j];
      const double lower = entries_[j * dim_ + i];
      if (std::abs(upper - lower) > kSymmetryTolerance) {
        throw Error(ErrorCode::Asymmetric, describe(i, j, upper) + " differs from its transpose");
      }
      if (std::abs(upper) > 1.0 || std::abs(lower) > 1.0) {
        throw Error(ErrorCode::OutOfRangeEntry, describe(i, j, upper) + " is outside [-1, 1]");
      }
    }
  }
  require_positive_semidefinite(dim_, entries_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const double avg = 0.5 * (entries_[i * dim_ + j] + entries_[j * dim_ + i]);
      entries_[i * dim_ + j] = avg;
      entries_[j * dim_ + i] = avg;
    }
  }
}

namespace {
std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorCode::InvalidArgument, "correlation matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}
}  // namespace

CorrelationMatrix::CorrelationMatrix(const std::vector<std::vector<double>>& rows)
    : CorrelationMatrix(rows.size(), flatten(rows)) {}

CorrelationMatrix CorrelationMatrix::identity(std::size_t dim) {
  std::vector<double> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return CorrelationMatrix(dim, std::move(e));
}

CorrelationMatrix CorrelationMatrix::leading_block(std::size_t k) const {
  if (k < 2 || k > dim_) throw Error(ErrorCode::InvalidArgument, "leading block size out of range");
  std::vector<double> e(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) e[i * k + j] = (*this)(i, j);
  return CorrelationMatrix(k, std::move(e));
}

CorrelationMatrix CorrelationMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != dim_) throw Error(ErrorCode::InvalidArgument, "permutation has wrong length");
  std::vector<bool> seen(dim_, false);
  for (std::size_t p : perm) {
    if (p >= dim_ || seen[p]) throw Error(ErrorCode::InvalidArgument, "not a permutation");
    seen[p] = true;
  }
  std::vector<double> e(dim_ * dim_);
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b) e[a * dim_ + b] = (*this)(perm[a], perm[b]);
  return CorrelationMatrix(dim_, std::move(e));
}

Ar1Parameter::Ar1Parameter(double rho) : rho_(rho) {
  if (!(std::abs(rho) < 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lag-one correlation must satisfy |rho| < 1, got " << rho;
    throw Error(ErrorCode::RhoOutOfRange, msg.str());
  }
}

CorrelationMatrix ar1_matrix(Ar1Parameter rho, int ell) {
  if (ell < 2 || ell > kMaxAr1Ell) {
    throw Error(ErrorCode::EllOutOfRange,
                "AR(1) segment length must be in [2, 6], got " + std::to_string(ell));
  }
  const auto n = static_cast<std::size_t>(ell);
  // Powers by repeated multiplication so rho^0 is exactly 1 and the matrix
  // is exactly symmetric.
  std::vector<double> powers(n, 1.0);
  for (std::size_t d = 1; d < n; ++d) powers[d] = powers[d - 1] * rho.value();
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = powers[i > j ? i - j : j - i];
  return CorrelationMatrix(n, std::move(e));
}

CorrelationMatrix read_correlation_matrix(std::istream& in) {
  std::vector<double> values;
  long long ell = -1;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    if (ell < 0) {
      if (!(row >> ell) || ell < 2) {
        throw Error(ErrorCode::InvalidArgument, "matrix file: first line must be a dimension >= 2");
      }
      std::string rest;
      if (row >> rest) throw Error(ErrorCode::InvalidArgument, "matrix file: trailing data after dimension");
      continue;
    }
    std::vector<double> parsed;
    std::string token;
    while (row >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw Error(ErrorCode::InvalidArgument, "matrix file: cannot parse '" + token + "'");
      }
      parsed.push_back(v);
    }
    if (parsed.size() != static_cast<std::size_t>(ell)) {
      throw Error(ErrorCode::InvalidArgument, "matrix file: row has " + std::to_string(parsed.size()) +
                                                  " values, expected " + std::to_string(ell));
    }
    values.insert(values.end(), parsed.begin(), parsed.end());
  }
  if (ell < 0) throw Error(ErrorCode::InvalidArgument, "matrix file: empty input");
  const auto n = static_cast<std::size_t>(ell);
  if (values.size() != n * n) {
    throw Error(ErrorCode::InvalidArgument, "matrix file: expected " + std::to_string(ell) + " rows");
  }
  return CorrelationMatrix(n, std::move(values));
}

std::ostream& operator<<(std::ostream& os, const CorrelationMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  return os;
}

}  // namespace gaussmax
