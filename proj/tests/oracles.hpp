#pragma once

// Independent checks shared by the unit and acceptance binaries.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmc/loss.hpp"
#include "mmc/lp.hpp"
#include "mmc/polytope.hpp"
#include "mmc/random.hpp"

namespace mmc::test {

struct ClosureResult {
  bool ok = true;
  std::string failure;
  std::size_t objectives = 0;
  std::size_t vertices_hit = 0;
};

/// Solves max c.x over the polytope restricted to c.x >= value and checks
/// that every coordinate is pinned, i.e. the optimum is a single point.
inline bool unique_optimum(const HPolytope& p, const RVector& c, const Rational& value,
                           const RVector& point) {
  HPolytope face = p;
  face.add_row(c, Relation::kGreaterEqual, value, RowTag{RowBlock::kLoss, 0});
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    for (int sign : {1, -1}) {
      RVector obj(p.dimension());
      obj[i] = sign;
      const LpSolution sol = solve_lp(face.as_lp(obj));
      if (!sol.optimal() || sol.optimum != sign * point[i]) return false;
    }
  }
  return true;
}

/// Random-objective LP closure: every LP optimum is an enumerated vertex, and
/// every enumerated vertex is the unique optimum of the objective built from
/// its tight inequality rows. When `last_positive` is set the last objective
/// coordinate is kept positive (the epigraph is unbounded below in u).
inline ClosureResult lp_closure_check(const HPolytope& p, const VertexSet& vertices, Rng& rng,
                                      std::size_t samples, bool last_positive = false) {
  ClosureResult out;
  const std::size_t n = p.dimension();
  std::set<std::size_t> hit;
  for (std::size_t s = 0; s < samples; ++s) {
    RVector c = rng.vector(n, -5, 5, 7);
    if (last_positive) c.back() = Rational(1 + static_cast<long>(rng.below(4)), 1 + static_cast<long>(rng.below(3)));
    const LpSolution sol = solve_lp(p.as_lp(c));
    ++out.objectives;
    if (!sol.optimal()) {
      out.ok = false;
      out.failure = "random objective LP did not reach an optimum";
      return out;
    }
    // The optimum value must be attained at an enumerated vertex.
    std::optional<Rational> best;
    for (const auto& v : vertices.vertices) {
      const Rational value = dot(c, v);
      if (!best || value > *best) best = value;
    }
    if (!best || *best != sol.optimum) {
      out.ok = false;
      out.failure = "LP optimum " + sol.optimum.str() + " not attained by an enumerated vertex";
      return out;
    }
    // A basic optimal solution of a pointed polyhedron is a vertex.
    const auto it = std::find(vertices.vertices.begin(), vertices.vertices.end(), sol.point);
    if (it == vertices.vertices.end()) {
      out.ok = false;
      out.failure = "LP optimum " + format_vector(sol.point) + " is not enumerated";
      return out;
    }
    hit.insert(static_cast<std::size_t>(it - vertices.vertices.begin()));
  }
  out.vertices_hit = hit.size();

  for (const auto& v : vertices.vertices) {
    RVector c(n);
    for (std::size_t r : p.tight_rows(v)) {
      if (p.relations[r] != Relation::kGreaterEqual) continue;
      for (std::size_t j = 0; j < n; ++j) c[j] -= p.a(r, j);
    }
    const LpSolution sol = solve_lp(p.as_lp(c));
    if (!sol.optimal() || sol.optimum != dot(c, v) || !unique_optimum(p, c, sol.optimum, v)) {
      out.ok = false;
      out.failure = "enumerated point " + format_vector(v) + " is not a unique LP optimum";
      return out;
    }
  }
  return out;
}

}  // namespace mmc::test
