#include "mmc/polytope.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "mmc/errors.hpp"

#ifdef MMC_HAVE_OPENMP
#include <omp.h>
#endif

namespace mmc {

void HPolytope::add_row(RVector coefficients, Relation rel, Rational bound, RowTag tag) {
  if (a.rows() == 0 && a.cols() == 0) a = RMatrix(0, coefficients.size());
  if (coefficients.size() != a.cols()) throw StructuralError("polytope row has wrong length");
  a.append_row(std::move(coefficients));
  b.push_back(std::move(bound));
  relations.push_back(rel);
  tags.push_back(tag);
}

bool HPolytope::contains(std::span<const Rational> x) const {
  if (x.size() != dimension()) throw StructuralError("point has wrong dimension for polytope");
  for (std::size_t i = 0; i < num_rows(); ++i) {
    const Rational lhs = dot(a.row(i), x);
    if (relations[i] == Relation::kEqual ? lhs != b[i] : lhs < b[i]) return false;
  }
  return true;
}

std::vector<std::size_t> HPolytope::tight_rows(std::span<const Rational> x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < num_rows(); ++i) {
    if (dot(a.row(i), x) == b[i]) out.push_back(i);
  }
  return out;
}

LinearProgram HPolytope::as_lp(RVector objective) const {
  LinearProgram lp;
  lp.objective = std::move(objective);
  lp.constraints = a;
  lp.rhs = b;
  lp.var_kinds.assign(dimension(), VarKind::kFree);
  for (auto rel : relations) {
    lp.row_kinds.push_back(rel == Relation::kEqual ? RowKind::kEqual : RowKind::kGreaterEqual);
  }
  return lp;
}

bool VertexSet::contains(const RVector& x) const {
  return std::binary_search(vertices.begin(), vertices.end(), x, lex_less);
}

PredictionSet prediction_set(const LossMatrix& loss, Output y) {
  const std::size_t k = loss.k();
  if (y >= k) throw StructuralError("output index out of range");
  HPolytope p;
  p.outputs = k;
  p.a = RMatrix(0, k);
  p.add_row(RVector(k, Rational(1)), Relation::kEqual, 1, {RowBlock::kSimplex, 0});
  for (Output z = 0; z < k; ++z) {
    p.add_row(unit_vector(k, z), Relation::kGreaterEqual, 0, {RowBlock::kNonNegative, z});
  }
  for (Output z = 0; z < k; ++z) {
    RVector row(k);
    for (Output j = 0; j < k; ++j) row[j] = loss(z, j) - loss(y, j);
    p.add_row(std::move(row), Relation::kGreaterEqual, 0, {RowBlock::kLoss, z});
  }
  return {y, std::move(p)};
}

HPolytope simplex_polytope(std::size_t k) {
  HPolytope p;
  p.outputs = k;
  p.a = RMatrix(0, k);
  p.add_row(RVector(k, Rational(1)), Relation::kEqual, 1, {RowBlock::kSimplex, 0});
  for (Output z = 0; z < k; ++z) {
    p.add_row(unit_vector(k, z), Relation::kGreaterEqual, 0, {RowBlock::kNonNegative, z});
  }
  return p;
}

HPolytope epigraph_polytope(const LossMatrix& loss) {
  const std::size_t k = loss.k();
  HPolytope p;
  p.outputs = k;
  p.a = RMatrix(0, k + 1);
  for (Output y = 0; y < k; ++y) {
    RVector row(loss.row(y).begin(), loss.row(y).end());
    row.push_back(-1);
    p.add_row(std::move(row), Relation::kGreaterEqual, 0, {RowBlock::kLoss, y});
  }
  for (Output y = 0; y < k; ++y) {
    p.add_row(unit_vector(k + 1, y), Relation::kGreaterEqual, 0, {RowBlock::kNonNegative, y});
  }
  RVector ones(k + 1, Rational(1));
  ones[k] = 0;
  RVector minus_ones(k + 1, Rational(-1));
  minus_ones[k] = 0;
  p.add_row(std::move(ones), Relation::kGreaterEqual, 1, {RowBlock::kSimplex, 0});
  p.add_row(std::move(minus_ones), Relation::kGreaterEqual, -1, {RowBlock::kSimplex, 1});
  return p;
}

HPolytope transport_polytope(const SimplexPoint& q) {
  const std::size_t k = q.size();
  const std::size_t n = k * k;
  HPolytope p;
  p.outputs = k;
  p.a = RMatrix(0, n);
  for (std::size_t i = 0; i < k; ++i) {
    RVector row(n);
    for (std::size_t j = 0; j < k; ++j) row[i * k + j] = 1;
    p.add_row(std::move(row), Relation::kEqual, q[i], {RowBlock::kTransportRow, i});
  }
  for (std::size_t j = 0; j < k; ++j) {
    RVector col(n);
    for (std::size_t i = 0; i < k; ++i) col[i * k + j] = 1;
    p.add_row(std::move(col), Relation::kEqual, q[j], {RowBlock::kTransportColumn, j});
  }
  for (std::size_t c = 0; c < n; ++c) {
    p.add_row(unit_vector(n, c), Relation::kGreaterEqual, 0, {RowBlock::kNonNegative, c});
  }
  return p;
}

bool is_bounded(const HPolytope& p) {
  for (std::size_t c = 0; c < p.dimension(); ++c) {
    for (int s : {1, -1}) {
      RVector objective(p.dimension());
      objective[c] = s;
      const LpSolution sol = solve_lp(p.as_lp(std::move(objective)));
      if (sol.status == LpStatus::kInfeasible) return true;
      if (sol.status == LpStatus::kUnbounded) return false;
    }
  }
  return true;
}

namespace {

void check_limits(const HPolytope& p, const EnumerationLimits& limits) {
  if (p.outputs > limits.max_outputs) {
    throw ResourceError("vertex enumeration capped at k = " + std::to_string(limits.max_outputs) +
                        " (got k = " + std::to_string(p.outputs) + "); use a smaller loss");
  }
  const bool transport = std::any_of(p.tags.begin(), p.tags.end(), [](const RowTag& t) {
    return t.block == RowBlock::kTransportRow;
  });
  if (transport && p.outputs > kMaxTransportOutputs) {
    throw ResourceError("transportation polytopes are enumerated only for k <= " +
                        std::to_string(kMaxTransportOutputs));
  }
  if (rank(p.a) < p.dimension()) {
    throw StructuralError("vertex enumeration requires a pointed polyhedron (it contains a line)");
  }
}

struct Split {
  std::vector<std::size_t> equalities;
  std::vector<std::size_t> inequalities;
};

Split split_rows(const HPolytope& p) {
  Split s;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    (p.relations[i] == Relation::kEqual ? s.equalities : s.inequalities).push_back(i);
  }
  return s;
}

std::optional<AffineHull> equality_hull(const HPolytope& p, const Split& s) {
  std::vector<RVector> rows;
  RVector rhs;
  for (auto i : s.equalities) {
    rows.push_back(p.a.row_vector(i));
    rhs.push_back(p.b[i]);
  }
  return affine_hull(RMatrix::from_rows(rows, p.dimension()), rhs);
}

VertexSet finish(std::set<RVector, decltype(&lex_less)>& found) {
  VertexSet out;
  out.vertices.assign(found.begin(), found.end());
  return out;
}

// Depth-first search over inequality rows in the reduced coordinates of the
// equality hull, keeping an incremental echelon form so that dependent
// partial choices are pruned.
class ReducedEnumerator {
 public:
  ReducedEnumerator(const HPolytope& p, const AffineHull& hull, std::vector<std::size_t> rows)
      : p_(p), hull_(hull), dim_(hull.basis.cols()) {
    for (auto i : rows) {
      RVector g(dim_);
      bool nonzero = false;
      for (std::size_t c = 0; c < dim_; ++c) {
        for (std::size_t j = 0; j < p.dimension(); ++j) {
          if (p.a(i, j).is_zero() || hull.basis(j, c).is_zero()) continue;
          g[c] += p.a(i, j) * hull.basis(j, c);
        }
        nonzero = nonzero || !g[c].is_zero();
      }
      if (!nonzero) continue;
      reduced_.push_back(std::move(g));
      offsets_.push_back(p.b[i] - dot(p.a.row(i), hull.particular));
    }
  }

  std::size_t candidates() const { return reduced_.size(); }
  std::size_t dimension() const { return dim_; }

  // Enumerates every independent subset whose smallest member is `first`.
  void run_from(std::size_t first, std::set<RVector, decltype(&lex_less)>& out) {
    echelon_.clear();
    if (!push(first)) return;
    descend(first + 1, out);
  }

 private:
  struct EchelonRow {
    RVector coeffs;
    Rational rhs;
    std::size_t pivot;
  };

  bool push(std::size_t idx) {
    EchelonRow row{reduced_[idx], offsets_[idx], 0};
    for (const auto& e : echelon_) {
      if (row.coeffs[e.pivot].is_zero()) continue;
      const Rational f = row.coeffs[e.pivot];
      for (std::size_t c = 0; c < dim_; ++c) {
        if (!e.coeffs[c].is_zero()) row.coeffs[c] -= f * e.coeffs[c];
      }
      row.rhs -= f * e.rhs;
    }
    std::size_t pivot = dim_;
    for (std::size_t c = 0; c < dim_; ++c) {
      if (!row.coeffs[c].is_zero()) {
        pivot = c;
        break;
      }
    }
    if (pivot == dim_) return false;
    const Rational inv = Rational(1) / row.coeffs[pivot];
    for (auto& x : row.coeffs) {
      if (!x.is_zero()) x *= inv;
    }
    row.rhs *= inv;
    row.pivot = pivot;
    echelon_.push_back(std::move(row));
    return true;
  }

  void descend(std::size_t next, std::set<RVector, decltype(&lex_less)>& out) {
    if (echelon_.size() == dim_) {
      emit(out);
      return;
    }
    const std::size_t needed = dim_ - echelon_.size();
    for (std::size_t idx = next; idx + needed <= reduced_.size(); ++idx) {
      if (!push(idx)) continue;
      descend(idx + 1, out);
      echelon_.pop_back();
    }
  }

  void emit(std::set<RVector, decltype(&lex_less)>& out) {
    RVector z(dim_);
    for (std::size_t r = echelon_.size(); r-- > 0;) {
      const auto& e = echelon_[r];
      Rational v = e.rhs;
      for (std::size_t c = 0; c < dim_; ++c) {
        if (c != e.pivot && !e.coeffs[c].is_zero()) v -= e.coeffs[c] * z[c];
      }
      z[e.pivot] = std::move(v);
    }
    RVector x = hull_.particular;
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t c = 0; c < dim_; ++c) {
        if (!hull_.basis(j, c).is_zero() && !z[c].is_zero()) x[j] += hull_.basis(j, c) * z[c];
      }
    }
    if (p_.contains(x)) out.insert(std::move(x));
  }

  const HPolytope& p_;
  const AffineHull& hull_;
  std::size_t dim_;
  std::vector<RVector> reduced_;
  RVector offsets_;
  std::vector<EchelonRow> echelon_;
};

}  // namespace

VertexSet enumerate_vertices(const HPolytope& p, const EnumerationLimits& limits) {
  check_limits(p, limits);
  const Split split = split_rows(p);
  std::set<RVector, decltype(&lex_less)> found(lex_less);
  const auto hull = equality_hull(p, split);
  if (!hull) return {};

  const std::size_t dim = hull->basis.cols();
  if (dim == 0) {
    if (p.contains(hull->particular)) found.insert(hull->particular);
    return finish(found);
  }

  const ReducedEnumerator prototype(p, *hull, split.inequalities);
  if (prototype.candidates() < dim) return {};
  const long firsts = static_cast<long>(prototype.candidates() - dim + 1);

#pragma omp parallel
  {
    ReducedEnumerator local = prototype;
    std::set<RVector, decltype(&lex_less)> mine(lex_less);
#pragma omp for schedule(dynamic)
    for (long first = 0; first < firsts; ++first) {
      local.run_from(static_cast<std::size_t>(first), mine);
    }
#pragma omp critical(mmc_vertex_merge)
    found.merge(mine);
  }
  return finish(found);
}

VertexSet enumerate_vertices_serial(const HPolytope& p, const EnumerationLimits& limits) {
  check_limits(p, limits);
  const Split split = split_rows(p);
  std::set<RVector, decltype(&lex_less)> found(lex_less);
  const auto hull = equality_hull(p, split);
  if (!hull) return {};
  const std::size_t need = hull->basis.cols();
  const std::size_t m = split.inequalities.size();
  if (need > m) return {};

  std::vector<std::size_t> pick(need);
  for (std::size_t i = 0; i < need; ++i) pick[i] = i;
  for (;;) {
    std::vector<RVector> rows;
    RVector rhs;
    for (auto i : split.equalities) {
      rows.push_back(p.a.row_vector(i));
      rhs.push_back(p.b[i]);
    }
    for (auto s : pick) {
      rows.push_back(p.a.row_vector(split.inequalities[s]));
      rhs.push_back(p.b[split.inequalities[s]]);
    }
    const auto sub = affine_hull(RMatrix::from_rows(rows, p.dimension()), rhs);
    if (sub && sub->basis.cols() == 0 && p.contains(sub->particular)) found.insert(sub->particular);

    // next combination
    std::size_t i = need;
    while (i > 0 && pick[i - 1] == m - need + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < need; ++j) pick[j] = pick[j - 1] + 1;
  }
  return finish(found);
}

bool satisfies_rank_condition(const HPolytope& p, std::span<const Rational> x) {
  const auto tight = p.tight_rows(x);
  std::vector<RVector> rows;
  for (auto i : tight) rows.push_back(p.a.row_vector(i));
  return rank(RMatrix::from_rows(rows, p.dimension())) == p.dimension();
}

ActiveSets active_sets(const HPolytope& p, std::span<const Rational> x) {
  if (!p.contains(x)) throw PreconditionError("active_sets: point is not in the polytope");
  ActiveSets s;
  s.outputs = p.outputs;
  for (auto i : p.tight_rows(x)) {
    if (p.tags[i].block == RowBlock::kLoss) s.loss_rows.push_back(p.tags[i].index);
    if (p.tags[i].block == RowBlock::kNonNegative) s.zero_coordinates.push_back(p.tags[i].index);
  }
  return s;
}

}  // namespace mmc
