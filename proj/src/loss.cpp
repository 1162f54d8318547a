#include "mmc/loss.hpp"

#include <algorithm>
#include <string>

#include "mmc/errors.hpp"

namespace mmc {

namespace {

std::string label(Output y) { return std::to_string(y + 1); }

}  // namespace

LossMatrix::LossMatrix(RMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ValidationError("loss matrix must be square");
  if (entries_.rows() < 2) throw ValidationError("loss matrix needs at least two outputs");
  for (Output y = 0; y < k(); ++y) {
    for (Output z = 0; z < k(); ++z) {
      const Rational& v = entries_(y, z);
      const std::string where = "L(" + label(y) + "," + label(z) + ")";
      if (v.sign() < 0) throw ValidationError("negative entry " + where + " = " + v.str());
      if (y == z && !v.is_zero()) throw ValidationError("nonzero diagonal entry " + where);
      if (y != z && v.is_zero()) throw ValidationError("zero off-diagonal entry " + where);
    }
  }
}

SimplexPoint::SimplexPoint(RVector q) : q_(std::move(q)) {
  if (q_.empty()) throw ValidationError("probability vector is empty");
  for (Output y = 0; y < q_.size(); ++y) {
    if (q_[y].sign() < 0) {
      throw ValidationError("q_" + label(y) + " = " + q_[y].str() + " violates q >= 0");
    }
  }
  const Rational total = sum(q_);
  if (total != Rational(1)) {
    throw ValidationError("entries sum to " + total.str() + ", violating sum(q) = 1");
  }
}

SimplexPoint SimplexPoint::vertex(std::size_t k, Output y) { return SimplexPoint(unit_vector(k, y)); }

SimplexPoint SimplexPoint::barycenter(std::size_t k) {
  return SimplexPoint(RVector(k, Rational(1, static_cast<long>(k))));
}

SimplexPoint SimplexPoint::pair_midpoint(std::size_t k, Output y, Output z) {
  RVector q(k);
  q.at(y) += Rational(1, 2);
  q.at(z) += Rational(1, 2);
  return SimplexPoint(std::move(q));
}

const Rational& SimplexPoint::max_entry() const { return *std::max_element(q_.begin(), q_.end()); }

RVector expected_losses(const LossMatrix& loss, const SimplexPoint& q) {
  if (q.size() != loss.k()) throw StructuralError("dimension mismatch between loss and q");
  return multiply(loss.matrix(), q.values());
}

std::vector<Output> bayes_predictor(const LossMatrix& loss, const SimplexPoint& q) {
  const RVector risks = expected_losses(loss, q);
  const Rational best = *std::min_element(risks.begin(), risks.end());
  std::vector<Output> out;
  for (Output y = 0; y < risks.size(); ++y) {
    if (risks[y] == best) out.push_back(y);
  }
  return out;
}

Output argmax_decode(std::span<const Rational> v) {
  if (v.empty()) throw StructuralError("argmax of an empty score vector");
  Output best = 0;
  for (Output y = 1; y < v.size(); ++y) {
    if (v[y] > v[best]) best = y;
  }
  return best;
}

ScoreVector embedding(const LossMatrix& loss, Output y) {
  ScoreVector v;
  for (const auto& x : loss.row(y)) v.push_back(-x);
  return v;
}

namespace {

void compositions(std::size_t k, std::size_t remaining, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (prefix.size() + 1 == k) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::size_t m = 0; m <= remaining; ++m) {
    prefix.push_back(m);
    compositions(k, remaining - m, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<SimplexPoint> simplex_grid(std::size_t k, std::size_t denominator) {
  if (k == 0 || denominator == 0) throw StructuralError("simplex grid needs k >= 1 and N >= 1");
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> prefix;
  compositions(k, denominator, prefix, parts);
  std::vector<SimplexPoint> grid;
  grid.reserve(parts.size());
  const long n = static_cast<long>(denominator);
  for (const auto& m : parts) {
    RVector q;
    for (auto c : m) q.emplace_back(static_cast<long>(c), n);
    grid.emplace_back(std::move(q));
  }
  return grid;
}

}  // namespace mmc
