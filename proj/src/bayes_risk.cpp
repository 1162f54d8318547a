#include "mmc/bayes_risk.hpp"

#include <algorithm>

#include "mmc/errors.hpp"
#include "mmc/random.hpp"
#include "mmc/surrogate.hpp"

namespace mmc {

namespace {

void check_dims(const LossMatrix& loss, const SimplexPoint& q) {
  if (q.size() != loss.k()) throw StructuralError("dimension mismatch between loss and q");
}

void require_symmetric(const LossMatrix& loss, const char* op) {
  if (!loss.is_symmetric()) throw PreconditionError(std::string(op) + " requires a symmetric loss");
}

std::vector<Output> support(const SimplexPoint& q) {
  std::vector<Output> s;
  for (Output y = 0; y < q.size(); ++y) {
    if (!q[y].is_zero()) s.push_back(y);
  }
  return s;
}

// Transport LP over the support of q: variable (a, b) is Q(s[a], s[b]).
LinearProgram transport_lp(const LossMatrix& loss, const SimplexPoint& q,
                           const std::vector<Output>& s) {
  const std::size_t m = s.size();
  LinearProgram lp = LinearProgram::with_variables(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) lp.objective[a * m + b] = loss(s[a], s[b]);
  }
  for (std::size_t a = 0; a < m; ++a) {
    RVector row(m * m);
    for (std::size_t b = 0; b < m; ++b) row[a * m + b] = 1;
    lp.add_row(std::move(row), RowKind::kEqual, q[s[a]]);
  }
  for (std::size_t b = 0; b < m; ++b) {
    RVector col(m * m);
    for (std::size_t a = 0; a < m; ++a) col[a * m + b] = 1;
    lp.add_row(std::move(col), RowKind::kEqual, q[s[b]]);
  }
  return lp;
}

RMatrix expand_plan(std::size_t k, const std::vector<Output>& s, const RVector& x) {
  RMatrix plan(k, k);
  const std::size_t m = s.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) plan(s[a], s[b]) = x[a * m + b];
  }
  return plan;
}

}  // namespace

bool in_transport_polytope(const RMatrix& plan, const SimplexPoint& q) {
  const std::size_t k = q.size();
  if (plan.rows() != k || plan.cols() != k) return false;
  for (std::size_t i = 0; i < k; ++i) {
    Rational row_sum;
    Rational col_sum;
    for (std::size_t j = 0; j < k; ++j) {
      if (plan(i, j).sign() < 0) return false;
      row_sum += plan(i, j);
      col_sum += plan(j, i);
    }
    if (row_sum != q[i] || col_sum != q[i]) return false;
  }
  return true;
}

bool in_restriction_cone(const LossMatrix& loss, const RMatrix& plan) {
  const std::size_t k = loss.k();
  if (plan.rows() != k || plan.cols() != k) return false;
  for (Output y = 0; y < k; ++y) {
    for (Output z = 0; z < k; ++z) {
      Rational acc;
      for (Output j = 0; j < k; ++j) {
        if (!plan(y, j).is_zero()) acc += (loss(y, j) - loss(z, j)) * plan(y, j);
      }
      if (acc.sign() > 0) return false;
    }
  }
  return true;
}

RiskValue bayes_risk_L(const LossMatrix& loss, const SimplexPoint& q) {
  const RVector risks = expected_losses(loss, q);
  const auto it = std::min_element(risks.begin(), risks.end());
  RiskValue r;
  r.value = *it;
  r.output = static_cast<Output>(it - risks.begin());
  return r;
}

RiskValue bayes_risk_M(const LossMatrix& loss, const SimplexPoint& q) {
  check_dims(loss, q);
  const auto s = support(q);
  const LpSolution sol = solve_lp(transport_lp(loss, q, s));
  if (!sol.optimal()) throw Error("transport LP did not reach an optimum");
  RiskValue r;
  r.value = sol.optimum;
  r.plan = expand_plan(loss.k(), s, sol.point);
  return r;
}

RiskValue bayes_risk_M_dual(const LossMatrix& loss, const SimplexPoint& q) {
  check_dims(loss, q);
  require_symmetric(loss, "bayes_risk_M_dual");
  const std::size_t k = loss.k();
  LinearProgram lp = LinearProgram::with_variables(k);
  for (Output y = 0; y < k; ++y) {
    lp.objective[y] = -q[y];
    lp.var_kinds[y] = VarKind::kFree;
  }
  for (Output y = 0; y < k; ++y) {
    for (Output z = y; z < k; ++z) {
      RVector row(k);
      row[y] += 1;
      row[z] += 1;
      lp.add_row(std::move(row), RowKind::kGreaterEqual, Rational(2) * loss(y, z));
    }
  }
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) throw Error("dual transport LP did not reach an optimum");
  RiskValue r;
  r.value = -sol.optimum;
  r.dual = sol.point;
  return r;
}

RiskValue bayes_risk_RM(const LossMatrix& loss, const SimplexPoint& q) {
  check_dims(loss, q);
  const auto s = support(q);
  const std::size_t m = s.size();
  LinearProgram lp = transport_lp(loss, q, s);
  for (std::size_t a = 0; a < m; ++a) {
    const Output y = s[a];
    for (Output z = 0; z < loss.k(); ++z) {
      if (z == y) continue;
      RVector row(m * m);
      bool any = false;
      for (std::size_t b = 0; b < m; ++b) {
        row[a * m + b] = loss(y, s[b]) - loss(z, s[b]);
        any = any || !row[a * m + b].is_zero();
      }
      if (any) lp.add_row(std::move(row), RowKind::kLessEqual, 0);
    }
  }
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) throw Error("restricted transport LP did not reach an optimum");
  RiskValue r;
  r.value = sol.optimum;
  r.plan = expand_plan(loss.k(), s, sol.point);
  return r;
}

RiskValue bayes_risk_MM(const LossMatrix& loss, const SimplexPoint& q) {
  check_dims(loss, q);
  return bayes_risk_L(loss, q);
}

bool cross_check_bayes_risk_MM(const LossMatrix& loss, const SimplexPoint& q) {
  const RiskValue hl = bayes_risk_L(loss, q);
  const auto optimal = bayes_predictor(loss, q);
  for (Output z = 0; z < loss.k(); ++z) {
    const Rational risk = conditional_risk(eval_max_min_margin, loss, embedding(loss, z), q);
    const bool is_optimal = std::binary_search(optimal.begin(), optimal.end(), z);
    if (is_optimal ? risk != hl.value : risk < hl.value) return false;
  }
  return true;
}

RiskValue bayes_risk_M_by_vertices(const LossMatrix& loss, const SimplexPoint& q) {
  check_dims(loss, q);
  const std::size_t k = loss.k();
  const VertexSet vs = enumerate_vertices(transport_polytope(q));
  RiskValue best;
  for (const auto& x : vs.vertices) {
    RMatrix plan(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) plan(i, j) = x[i * k + j];
    }
    const Rational value = frobenius(loss.matrix(), plan);
    if (!best.plan || value > best.value) {
      best.value = value;
      best.plan = std::move(plan);
    }
  }
  if (!best.plan) throw Error("transport polytope has no vertices");
  return best;
}

PairConjugate conjugate_neg_HM(const LossMatrix& loss, std::span<const Rational> v) {
  require_symmetric(loss, "conjugate_neg_HM");
  if (v.size() != loss.k()) throw StructuralError("score vector length does not match k");
  PairConjugate out;
  const Rational half(1, 2);
  bool first = true;
  for (Output y = 0; y < loss.k(); ++y) {
    for (Output z = y; z < loss.k(); ++z) {
      Rational value = loss(y, z) + (v[y] + v[z]) * half;
      if (first || value > out.value) {
        out.value = std::move(value);
        out.maximizers.assign(1, {y, z});
        first = false;
      } else if (value == out.value) {
        out.maximizers.emplace_back(y, z);
      }
    }
  }
  return out;
}

Rational conjugate_neg_HM_lp(const LossMatrix& loss, std::span<const Rational> v) {
  require_symmetric(loss, "conjugate_neg_HM_lp");
  const std::size_t k = loss.k();
  if (v.size() != k) throw StructuralError("score vector length does not match k");
  LinearProgram lp = LinearProgram::with_variables(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) lp.objective[i * k + j] = loss(i, j) + v[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      RVector row(k * k);
      row[i * k + j] = 1;
      row[j * k + i] = -1;
      lp.add_row(std::move(row), RowKind::kEqual, 0);
    }
  }
  lp.add_row(RVector(k * k, Rational(1)), RowKind::kEqual, 1);
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) throw Error("symmetric conjugate LP did not reach an optimum");
  return sol.optimum;
}

std::optional<SimplexPoint> subgradient_point_neg_HM(const LossMatrix& loss,
                                                     std::span<const Rational> v) {
  const PairConjugate c = conjugate_neg_HM(loss, v);
  if (c.maximizers.size() != 1) return std::nullopt;
  const auto [y, z] = c.maximizers.front();
  return SimplexPoint::pair_midpoint(loss.k(), y, z);
}

bool verify_mm_minimizer(const LossMatrix& loss, const SimplexPoint& q, Output y) {
  const auto optimal = bayes_predictor(loss, q);
  if (!std::binary_search(optimal.begin(), optimal.end(), y)) {
    throw PreconditionError("verify_mm_minimizer: output is not Bayes-optimal at q");
  }
  const Rational risk = conditional_risk(eval_max_min_margin, loss, embedding(loss, y), q);
  return risk == bayes_risk_L(loss, q).value;
}

FenchelYoungCheck fenchel_young_spot_check(const LossMatrix& loss, std::span<const Rational> v,
                                           std::uint64_t seed, std::size_t samples) {
  require_symmetric(loss, "fenchel_young_spot_check");
  const PairConjugate conj = conjugate_neg_HM(loss, v);
  Rng rng(seed);
  FenchelYoungCheck out;
  out.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const SimplexPoint q = rng.simplex_point(loss.k(), 6, i % loss.k());
    if (conj.value < dot(v, q.values()) + bayes_risk_M(loss, q).value) out.inequality_holds = false;
  }
  if (const auto point = subgradient_point_neg_HM(loss, v)) {
    out.equality_at_subgradient =
        conj.value == dot(v, point->values()) + bayes_risk_M(loss, *point).value;
  }
  return out;
}

}  // namespace mmc
