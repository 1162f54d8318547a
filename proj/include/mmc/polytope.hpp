#pragma once

#include <cstddef>
#include <vector>

#include "mmc/loss.hpp"
#include "mmc/lp.hpp"

namespace mmc {

/// Which family a polytope row belongs to; used to report active sets.
enum class RowBlock {
  kLoss,         // L_y . q - u >= 0 (epigraph) or (L_z - L_y) . q >= 0 (prediction set)
  kNonNegative,  // x_i >= 0
  kSimplex,      // unit mass
  kTransportRow,
  kTransportColumn,
};

struct RowTag {
  RowBlock block;
  std::size_t index;
};

enum class Relation { kGreaterEqual, kEqual };

/// {x : a_i . x >= b_i or a_i . x = b_i}.
struct HPolytope {
  RMatrix a;
  RVector b;
  std::vector<Relation> relations;
  std::vector<RowTag> tags;
  // Number of task outputs the polytope was built from; drives size caps.
  std::size_t outputs = 0;

  std::size_t dimension() const { return a.cols(); }
  std::size_t num_rows() const { return a.rows(); }

  void add_row(RVector coefficients, Relation rel, Rational bound, RowTag tag);
  bool contains(std::span<const Rational> x) const;
  /// Rows satisfied with equality at x (equality rows included).
  std::vector<std::size_t> tight_rows(std::span<const Rational> x) const;
  /// The program maximize objective . x over the polytope (variables free).
  LinearProgram as_lp(RVector objective) const;
};

/// Vertices in ascending lexicographic order, without duplicates.
struct VertexSet {
  std::vector<RVector> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
  bool contains(const RVector& x) const;
  friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

struct PredictionSet {
  Output y;
  HPolytope hrep;

  bool contains(const SimplexPoint& q) const { return hrep.contains(q.values()); }
};

struct EnumerationLimits {
  // Largest output count k accepted by enumerate_vertices.
  std::size_t max_outputs = 10;
};

/// Transportation polytopes are only enumerated up to this many outputs.
inline constexpr std::size_t kMaxTransportOutputs = 4;

/// Delta(y): the simplex intersected with (L_z - L_y) . q >= 0 for every z.
PredictionSet prediction_set(const LossMatrix& loss, Output y);

/// The probability simplex over k outputs.
HPolytope simplex_polytope(std::size_t k);

/// P = {(q, u) : q in simplex, L_y . q >= u}, written with the L block
/// (with a -1 column for u), the identity block and the two simplex rows
/// 1.q >= 1 and -1.q >= -1.
HPolytope epigraph_polytope(const LossMatrix& loss);

/// U(q, q) over the row-major flattening of a k x k plan.
HPolytope transport_polytope(const SimplexPoint& q);

/// Maximizes and minimizes every coordinate (2n programs).
bool is_bounded(const HPolytope& p);

/// Extreme points via exhaustive search over linearly independent active
/// subsystems, split across OpenMP threads by the first chosen row.
/// Works for pointed polyhedra, bounded or not (the epigraph P is unbounded
/// below in u). Throws ResourceError over the cap and StructuralError when
/// the constraint matrix has rank below the dimension.
VertexSet enumerate_vertices(const HPolytope& p, const EnumerationLimits& limits = {});

/// Single-threaded reference: every subset of inequality rows of the right
/// size is stacked with the equality rows and solved in the original
/// coordinates. Exponentially slower; kept for cross-checking.
VertexSet enumerate_vertices_serial(const HPolytope& p, const EnumerationLimits& limits = {});

/// Rank of the tight subsystem at x equals the ambient dimension.
bool satisfies_rank_condition(const HPolytope& p, std::span<const Rational> x);

struct ActiveSets {
  std::vector<Output> loss_rows;         // S: tight rows of the loss block
  std::vector<Output> zero_coordinates;  // T: tight nonnegativity rows
  std::size_t outputs = 0;

  bool has_tight_loss_row() const { return !loss_rows.empty(); }
  bool enough_tight_rows() const { return loss_rows.size() + zero_coordinates.size() >= outputs; }
};

/// Throws PreconditionError when x is not in p.
ActiveSets active_sets(const HPolytope& p, std::span<const Rational> x);

}  // namespace mmc
