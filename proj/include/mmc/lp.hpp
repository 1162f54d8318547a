#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mmc/matrix.hpp"

namespace mmc {

enum class RowKind { kLessEqual, kEqual, kGreaterEqual };
enum class VarKind { kNonNegative, kFree };

/// maximize objective . x  subject to  A x (<=|=|>=) b  and per-variable signs.
struct LinearProgram {
  RVector objective;
  RMatrix constraints;
  RVector rhs;
  std::vector<RowKind> row_kinds;
  std::vector<VarKind> var_kinds;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  /// Empty program over n nonnegative variables with a zero objective.
  static LinearProgram with_variables(std::size_t n);
  void add_row(RVector coefficients, RowKind kind, Rational bound);

  /// Throws StructuralError when dimensions disagree.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rational optimum;
  RVector point;
  // One multiplier per constraint row, signed for the original row relation.
  RVector duals;
  // Basic columns in augmented numbering: j < n is variable j, n + i is the
  // slack of row i. Nonbasic entries pin their variable to zero or their row
  // to equality.
  std::vector<std::size_t> basis;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

/// Two-phase dense tableau simplex with Bland's least-index rule.
LpSolution solve_lp(const LinearProgram& lp);

/// The point pinned down by a basis: nonbasic variables at zero, rows with a
/// nonbasic slack held at equality. nullopt if that system is not square and
/// nonsingular.
std::optional<RVector> reconstruct_from_basis(const LinearProgram& lp,
                                              const std::vector<std::size_t>& basis);

struct CertificateCheck {
  bool ok = true;
  std::string failure;
};

/// Independent optimality check: primal feasibility, objective value, dual
/// sign conditions, dual feasibility and zero duality gap.
CertificateCheck certify_optimal(const LinearProgram& lp, const LpSolution& sol);

}  // namespace mmc
