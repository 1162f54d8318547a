#pragma once

#include <cstddef>
#include <vector>

#include "mmc/matrix.hpp"

namespace mmc {

/// Output labels are 0-based internally and printed 1-based.
using Output = std::size_t;

/// A k x k task loss: nonnegative, with L(y,y') = 0 exactly when y = y'.
class LossMatrix {
 public:
  /// Throws ValidationError when the invariants do not hold or k < 2.
  explicit LossMatrix(RMatrix entries);

  std::size_t k() const noexcept { return entries_.rows(); }
  const Rational& operator()(Output y, Output y2) const { return entries_(y, y2); }
  std::span<const Rational> row(Output y) const { return entries_.row(y); }
  const RMatrix& matrix() const noexcept { return entries_; }
  bool is_symmetric() const { return entries_.is_symmetric(); }

  friend bool operator==(const LossMatrix&, const LossMatrix&) = default;

 private:
  RMatrix entries_;
};

/// A probability vector with exact unit mass.
class SimplexPoint {
 public:
  /// Throws ValidationError naming the violated constraint.
  explicit SimplexPoint(RVector q);
  static SimplexPoint vertex(std::size_t k, Output y);
  static SimplexPoint barycenter(std::size_t k);
  /// (e_y + e_z) / 2; equals e_y when y == z.
  static SimplexPoint pair_midpoint(std::size_t k, Output y, Output z);

  std::size_t size() const noexcept { return q_.size(); }
  const Rational& operator[](Output y) const { return q_[y]; }
  const RVector& values() const noexcept { return q_; }
  /// Largest coordinate.
  const Rational& max_entry() const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  RVector q_;
};

using ScoreVector = RVector;

/// Conditional expected losses L_y . q for every prediction y.
RVector expected_losses(const LossMatrix& loss, const SimplexPoint& q);

/// All minimizers of L_y . q, ascending. Never empty.
std::vector<Output> bayes_predictor(const LossMatrix& loss, const SimplexPoint& q);

/// Least-index maximizer of v.
Output argmax_decode(std::span<const Rational> v);

/// -L_y, the score vector that embeds output y.
ScoreVector embedding(const LossMatrix& loss, Output y);

/// Uniform grid {m / N : m in N^k, sum m = N}, ascending lexicographic in m.
std::vector<SimplexPoint> simplex_grid(std::size_t k, std::size_t denominator);

}  // namespace mmc
