#include "mmc/lp.hpp"

#include <algorithm>
#include <utility>

#include "mmc/errors.hpp"

namespace mmc {

LinearProgram LinearProgram::with_variables(std::size_t n) {
  LinearProgram lp;
  lp.objective.assign(n, Rational());
  lp.constraints = RMatrix(0, n);
  lp.var_kinds.assign(n, VarKind::kNonNegative);
  return lp;
}

void LinearProgram::add_row(RVector coefficients, RowKind kind, Rational bound) {
  if (coefficients.size() != num_variables()) throw StructuralError("add_row: wrong row length");
  constraints.append_row(std::move(coefficients));
  rhs.push_back(std::move(bound));
  row_kinds.push_back(kind);
}

void LinearProgram::validate() const {
  if (constraints.cols() != objective.size()) {
    throw StructuralError("linear program: constraint columns do not match objective length");
  }
  if (constraints.rows() != rhs.size()) {
    throw StructuralError("linear program: constraint rows do not match rhs length");
  }
  if (row_kinds.size() != rhs.size()) {
    throw StructuralError("linear program: one row kind per constraint row required");
  }
  if (var_kinds.size() != objective.size()) {
    throw StructuralError("linear program: one variable kind per variable required");
  }
}

namespace {

// Column roles in the internal standard form.
enum class ColRole { kPlus, kMinus, kSlack, kSurplus, kArtificial };

struct Column {
  ColRole role;
  std::size_t source;  // variable index or row index
};

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) { build(); }

  LpSolution run() {
    LpSolution sol;
    if (has_artificial_) {
      load_objective(/*phase_one=*/true);
      iterate(/*allow_artificial=*/true);  // phase one is bounded by construction
      if (value().sign() < 0) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
      evict_artificials();
    }
    load_objective(/*phase_one=*/false);
    if (!iterate(/*allow_artificial=*/false)) {
      sol.status = LpStatus::kUnbounded;
      return sol;
    }
    sol.status = LpStatus::kOptimal;
    extract(sol);
    return sol;
  }

 private:
  mpq_class& at(std::size_t r, std::size_t c) { return cells_[r * width_ + c]; }

  void build() {
    const std::size_t n = lp_.num_variables();
    const std::size_t m = lp_.num_rows();
    for (std::size_t j = 0; j < n; ++j) {
      columns_.push_back({ColRole::kPlus, j});
      if (lp_.var_kinds[j] == VarKind::kFree) columns_.push_back({ColRole::kMinus, j});
    }
    structural_ = columns_.size();

    sign_.assign(m, 1);
    kind_.resize(m);
    unit_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      RowKind kind = lp_.row_kinds[i];
      if (lp_.rhs[i].sign() < 0) {
        sign_[i] = -1;
        if (kind == RowKind::kLessEqual) kind = RowKind::kGreaterEqual;
        else if (kind == RowKind::kGreaterEqual) kind = RowKind::kLessEqual;
      }
      kind_[i] = kind;
      unit_[i] = columns_.size();
      if (kind == RowKind::kLessEqual) {
        columns_.push_back({ColRole::kSlack, i});
      } else {
        columns_.push_back({ColRole::kArtificial, i});
        has_artificial_ = true;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (kind_[i] == RowKind::kGreaterEqual) columns_.push_back({ColRole::kSurplus, i});
    }

    rhs_col_ = columns_.size();
    width_ = rhs_col_ + 1;
    obj_row_ = m;
    cells_.assign((m + 1) * width_, mpq_class());
    basis_.resize(m);
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Column& col = columns_[c];
      switch (col.role) {
        case ColRole::kPlus:
        case ColRole::kMinus:
          for (std::size_t i = 0; i < m; ++i) {
            const Rational& a = lp_.constraints(i, col.source);
            if (a.is_zero()) continue;
            at(i, c) = a.mpq();
            if ((col.role == ColRole::kMinus) != (sign_[i] < 0)) at(i, c) = -at(i, c);
          }
          break;
        case ColRole::kSlack:
        case ColRole::kArtificial:
          at(col.source, c) = 1;
          basis_[col.source] = c;
          break;
        case ColRole::kSurplus:
          at(col.source, c) = -1;
          break;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      at(i, rhs_col_) = lp_.rhs[i].mpq();
      if (sign_[i] < 0) at(i, rhs_col_) = -at(i, rhs_col_);
    }
  }

  mpq_class cost(std::size_t c, bool phase_one) const {
    const Column& col = columns_[c];
    if (phase_one) return col.role == ColRole::kArtificial ? mpq_class(-1) : mpq_class(0);
    if (col.role == ColRole::kPlus) return lp_.objective[col.source].mpq();
    if (col.role == ColRole::kMinus) return -lp_.objective[col.source].mpq();
    return 0;
  }

  // Objective row holds reduced costs c_j - c_B B^-1 A_j and, in the rhs
  // column, minus the current objective value.
  void load_objective(bool phase_one) {
    const std::size_t m = lp_.num_rows();
    std::vector<mpq_class> basic_cost(m);
    for (std::size_t i = 0; i < m; ++i) basic_cost[i] = cost(basis_[i], phase_one);
    mpq_class tmp;
    for (std::size_t c = 0; c < width_; ++c) {
      mpq_class acc = c == rhs_col_ ? mpq_class(0) : cost(c, phase_one);
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(basic_cost[i]) == 0 || sgn(at(i, c)) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), basic_cost[i].get_mpq_t(), at(i, c).get_mpq_t());
        acc -= tmp;
      }
      at(obj_row_, c) = acc;
    }
  }

  Rational value() { return Rational(mpq_class(-at(obj_row_, rhs_col_))); }

  // Returns false when an improving column has no blocking row.
  bool iterate(bool allow_artificial) {
    const std::size_t m = lp_.num_rows();
    mpq_class best;
    mpq_class ratio;
    for (;;) {
      std::size_t enter = rhs_col_;
      for (std::size_t c = 0; c < rhs_col_; ++c) {
        if (!allow_artificial && columns_[c].role == ColRole::kArtificial) continue;
        if (sgn(at(obj_row_, c)) > 0) {
          enter = c;
          break;
        }
      }
      if (enter == rhs_col_) return true;

      std::size_t leave = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(at(i, enter)) <= 0) continue;
        mpq_div(ratio.get_mpq_t(), at(i, rhs_col_).get_mpq_t(), at(i, enter).get_mpq_t());
        if (leave == m || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    mpq_inv(factor_.get_mpq_t(), at(pr, pc).get_mpq_t());
    nonzero_.clear();
    for (std::size_t c = 0; c < width_; ++c) {
      if (sgn(at(pr, c)) == 0) continue;
      if (c != pc) mpq_mul(at(pr, c).get_mpq_t(), at(pr, c).get_mpq_t(), factor_.get_mpq_t());
      nonzero_.push_back(c);
    }
    at(pr, pc) = 1;
    for (std::size_t r = 0; r <= obj_row_; ++r) {
      if (r == pr || sgn(at(r, pc)) == 0) continue;
      mpq_swap(factor_.get_mpq_t(), at(r, pc).get_mpq_t());
      for (std::size_t c : nonzero_) {
        if (c == pc) continue;
        mpq_mul(scratch_.get_mpq_t(), factor_.get_mpq_t(), at(pr, c).get_mpq_t());
        mpq_sub(at(r, c).get_mpq_t(), at(r, c).get_mpq_t(), scratch_.get_mpq_t());
      }
      at(r, pc) = 0;
    }
    basis_[pr] = pc;
  }

  // After phase one every artificial sits at zero; pivot each basic one out
  // on any real column. A row with no real entry is redundant and keeps its
  // artificial, which can then never move.
  void evict_artificials() {
    for (std::size_t i = 0; i < lp_.num_rows(); ++i) {
      if (columns_[basis_[i]].role != ColRole::kArtificial) continue;
      for (std::size_t c = 0; c < rhs_col_; ++c) {
        if (columns_[c].role == ColRole::kArtificial) continue;
        if (sgn(at(i, c)) != 0) {
          pivot(i, c);
          break;
        }
      }
    }
  }

  void extract(LpSolution& sol) {
    const std::size_t n = lp_.num_variables();
    const std::size_t m = lp_.num_rows();
    std::vector<mpq_class> x(n);
    for (std::size_t i = 0; i < m; ++i) {
      const Column& col = columns_[basis_[i]];
      if (col.role == ColRole::kPlus) x[col.source] += at(i, rhs_col_);
      if (col.role == ColRole::kMinus) x[col.source] -= at(i, rhs_col_);
    }
    sol.point.clear();
    for (auto& v : x) sol.point.emplace_back(std::move(v));
    sol.optimum = value();

    sol.duals.clear();
    for (std::size_t i = 0; i < m; ++i) {
      mpq_class y = -at(obj_row_, unit_[i]);
      if (sign_[i] < 0) y = -y;
      sol.duals.emplace_back(std::move(y));
    }

    sol.basis.clear();
    for (std::size_t i = 0; i < m; ++i) {
      const Column& col = columns_[basis_[i]];
      const bool structural = col.role == ColRole::kPlus || col.role == ColRole::kMinus;
      sol.basis.push_back(structural ? col.source : n + col.source);
    }
    std::sort(sol.basis.begin(), sol.basis.end());
  }

  const LinearProgram& lp_;
  std::vector<Column> columns_;
  std::size_t structural_ = 0;
  std::vector<int> sign_;
  std::vector<RowKind> kind_;
  std::vector<std::size_t> unit_;
  std::vector<std::size_t> basis_;
  bool has_artificial_ = false;
  std::size_t rhs_col_ = 0;
  std::size_t width_ = 0;
  std::size_t obj_row_ = 0;
  std::vector<mpq_class> cells_;
  std::vector<std::size_t> nonzero_;
  mpq_class factor_;
  mpq_class scratch_;
};

bool satisfies(const Rational& lhs, RowKind kind, const Rational& rhs) {
  switch (kind) {
    case RowKind::kLessEqual: return lhs <= rhs;
    case RowKind::kEqual: return lhs == rhs;
    case RowKind::kGreaterEqual: return lhs >= rhs;
  }
  return false;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  return Tableau(lp).run();
}

std::optional<RVector> reconstruct_from_basis(const LinearProgram& lp,
                                              const std::vector<std::size_t>& basis) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  std::vector<bool> basic(n + lp.num_rows(), false);
  for (auto b : basis) {
    if (b >= basic.size()) return std::nullopt;
    basic[b] = true;
  }
  std::vector<RVector> rows;
  RVector rhs;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (basic[n + i]) continue;
    rows.push_back(lp.constraints.row_vector(i));
    rhs.push_back(lp.rhs[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (basic[j]) continue;
    rows.push_back(unit_vector(n, j));
    rhs.push_back(Rational());
  }
  if (rows.size() != n) return std::nullopt;
  return solve_linear_system(RMatrix::from_rows(rows, n), rhs);
}

CertificateCheck certify_optimal(const LinearProgram& lp, const LpSolution& sol) {
  lp.validate();
  auto fail = [](std::string why) { return CertificateCheck{false, std::move(why)}; };
  if (!sol.optimal()) return fail("solution is not marked optimal");
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.num_rows();
  if (sol.point.size() != n) return fail("point has wrong dimension");
  if (sol.duals.size() != m) return fail("dual vector has wrong dimension");

  for (std::size_t j = 0; j < n; ++j) {
    if (lp.var_kinds[j] == VarKind::kNonNegative && sol.point[j].sign() < 0) {
      return fail("variable " + std::to_string(j) + " is negative");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!satisfies(dot(lp.constraints.row(i), sol.point), lp.row_kinds[i], lp.rhs[i])) {
      return fail("row " + std::to_string(i) + " is violated");
    }
  }
  if (dot(lp.objective, sol.point) != sol.optimum) return fail("objective value mismatch");

  // Dual of a maximization: y >= 0 on <= rows, y <= 0 on >= rows,
  // A^T y >= c on nonnegative variables and A^T y = c on free ones.
  for (std::size_t i = 0; i < m; ++i) {
    const int s = sol.duals[i].sign();
    if (lp.row_kinds[i] == RowKind::kLessEqual && s < 0) return fail("dual sign on <= row");
    if (lp.row_kinds[i] == RowKind::kGreaterEqual && s > 0) return fail("dual sign on >= row");
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational reduced;
    for (std::size_t i = 0; i < m; ++i) reduced += lp.constraints(i, j) * sol.duals[i];
    reduced -= lp.objective[j];
    if (lp.var_kinds[j] == VarKind::kFree ? !reduced.is_zero() : reduced.sign() < 0) {
      return fail("dual infeasible at column " + std::to_string(j));
    }
  }
  if (dot(lp.rhs, sol.duals) != sol.optimum) return fail("nonzero duality gap");
  return {};
}

}  // namespace mmc
