#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmc/rational.hpp"

namespace mmc {

using RVector = std::vector<Rational>;

/// Dense row-major matrix of rationals with fixed dimensions.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Throws StructuralError on ragged input.
  RMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static RMatrix from_rows(const std::vector<RVector>& rows, std::size_t cols);
  static RMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  RVector row_vector(std::size_t r) const;
  RVector col_vector(std::size_t c) const;

  /// Grows the matrix by one row; for incremental builders.
  void append_row(RVector values);

  RMatrix transposed() const;
  bool is_symmetric() const;

  friend bool operator==(const RMatrix&, const RMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
RVector multiply(const RMatrix& a, std::span<const Rational> x);
/// Frobenius inner product.
Rational frobenius(const RMatrix& a, const RMatrix& b);
Rational sum(std::span<const Rational> v);
RVector unit_vector(std::size_t n, std::size_t i);

/// Lexicographic order on exact coordinates.
bool lex_less(const RVector& a, const RVector& b);

std::string format_vector(std::span<const Rational> v);

/// Exact rank by fraction-free (Bareiss) elimination after clearing
/// row denominators.
std::size_t rank(const RMatrix& a);

/// Exact solution of a square system, or nullopt when A is singular.
/// Throws StructuralError when A is not square or b has the wrong size.
std::optional<RVector> solve_linear_system(const RMatrix& a, std::span<const Rational> b);

/// Affine solution set of an equality system: x = particular + basis * z.
struct AffineHull {
  RVector particular;
  RMatrix basis;  // n x d, columns span the null space
};

/// nullopt when the system is inconsistent.
std::optional<AffineHull> affine_hull(const RMatrix& a, std::span<const Rational> b);

}  // namespace mmc
