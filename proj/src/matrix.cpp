#include "mmc/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "mmc/errors.hpp"

namespace mmc {

RMatrix::RMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw StructuralError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RMatrix RMatrix::from_rows(const std::vector<RVector>& rows, std::size_t cols) {
  RMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw StructuralError("row has wrong length");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

RMatrix RMatrix::identity(std::size_t n) {
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RVector RMatrix::row_vector(std::size_t r) const {
  const auto s = row(r);
  return {s.begin(), s.end()};
}

RVector RMatrix::col_vector(std::size_t c) const {
  RVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void RMatrix::append_row(RVector values) {
  if (values.size() != cols_) throw StructuralError("append_row: wrong row length");
  data_.insert(data_.end(), std::make_move_iterator(values.begin()),
               std::make_move_iterator(values.end()));
  ++rows_;
}

RMatrix RMatrix::transposed() const {
  RMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool RMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw StructuralError("dot: size mismatch");
  mpq_class acc;
  mpq_class tmp;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    mpq_mul(tmp.get_mpq_t(), a[i].mpq().get_mpq_t(), b[i].mpq().get_mpq_t());
    acc += tmp;
  }
  return Rational(std::move(acc));
}

RVector multiply(const RMatrix& a, std::span<const Rational> x) {
  if (a.cols() != x.size()) throw StructuralError("multiply: size mismatch");
  RVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = dot(a.row(r), x);
  return out;
}

Rational frobenius(const RMatrix& a, const RMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw StructuralError("frobenius: shape mismatch");
  }
  Rational acc;
  for (std::size_t r = 0; r < a.rows(); ++r) acc += dot(a.row(r), b.row(r));
  return acc;
}

Rational sum(std::span<const Rational> v) {
  Rational acc;
  for (const auto& x : v) acc += x;
  return acc;
}

RVector unit_vector(std::size_t n, std::size_t i) {
  RVector e(n);
  e.at(i) = 1;
  return e;
}

bool lex_less(const RVector& a, const RVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string format_vector(std::span<const Rational> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
  return os.str();
}

std::size_t rank(const RMatrix& a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class scale = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(r, c).mpq().get_den_mpz_t());
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m[r][c] = a(r, c).mpq().get_num() * (scale / a(r, c).mpq().get_den());
    }
  }

  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

namespace {

// Reduced row echelon form in place; returns the pivot column of each
// nonzero row.
std::vector<std::size_t> rref(RMatrix& m, std::size_t eliminate_cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  mpq_class tmp;
  for (std::size_t c = 0; c < eliminate_cols && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    }
    const Rational inv = Rational(1) / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(r, j).is_zero()) continue;
        mpq_mul(tmp.get_mpq_t(), f.mpq().get_mpq_t(), m(r, j).mpq().get_mpq_t());
        m(i, j).mpq() -= tmp;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

RMatrix augment(const RMatrix& a, std::span<const Rational> b) {
  RMatrix m(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    m(r, a.cols()) = b[r];
  }
  return m;
}

}  // namespace

std::optional<RVector> solve_linear_system(const RMatrix& a, std::span<const Rational> b) {
  if (a.rows() != a.cols()) throw StructuralError("solve_linear_system: matrix is not square");
  if (b.size() != a.rows()) throw StructuralError("solve_linear_system: rhs size mismatch");
  RMatrix m = augment(a, b);
  const auto pivots = rref(m, a.cols());
  if (pivots.size() < a.cols()) return std::nullopt;
  RVector x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m(r, a.cols());
  return x;
}

std::optional<AffineHull> affine_hull(const RMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw StructuralError("affine_hull: rhs size mismatch");
  const std::size_t n = a.cols();
  RMatrix m = augment(a, b);
  const auto pivots = rref(m, n);
  for (std::size_t r = pivots.size(); r < m.rows(); ++r) {
    if (!m(r, n).is_zero()) return std::nullopt;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;

  AffineHull hull;
  hull.particular.assign(n, Rational());
  for (std::size_t r = 0; r < pivots.size(); ++r) hull.particular[pivots[r]] = m(r, n);

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  hull.basis = RMatrix(n, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    hull.basis(f, k) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) hull.basis(pivots[r], k) = -m(r, f);
  }
  return hull;
}

}  // namespace mmc
