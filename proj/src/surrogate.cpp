#include "mmc/surrogate.hpp"

#include "mmc/errors.hpp"
#include "mmc/polytope.hpp"

namespace mmc {

namespace {

void check_dims(const LossMatrix& loss, std::span<const Rational> v, Output y) {
  if (v.size() != loss.k()) throw StructuralError("score vector length does not match k");
  if (y >= loss.k()) throw StructuralError("output index out of range");
}

}  // namespace

Rational eval_max_margin(const LossMatrix& loss, std::span<const Rational> v, Output y) {
  check_dims(loss, v, y);
  Rational best = loss(y, 0) + v[0];
  for (Output z = 1; z < loss.k(); ++z) {
    Rational s = loss(y, z) + v[z];
    if (s > best) best = std::move(s);
  }
  return best - v[y];
}

Rational eval_restricted_max_margin(const LossMatrix& loss, std::span<const Rational> v, Output y) {
  check_dims(loss, v, y);
  const PredictionSet ps = prediction_set(loss, y);
  RVector objective(loss.k());
  for (Output z = 0; z < loss.k(); ++z) objective[z] = loss(y, z) + v[z];
  const LpSolution sol = solve_lp(ps.hrep.as_lp(std::move(objective)));
  if (!sol.optimal()) throw Error("restricted max-margin LP did not reach an optimum");
  return sol.optimum - v[y];
}

ConjugateValue neg_bayes_risk_L_conjugate(const LossMatrix& loss, std::span<const Rational> v) {
  const std::size_t k = loss.k();
  if (v.size() != k) throw StructuralError("score vector length does not match k");
  // variables (q_1..q_k, u); maximize v.q + u
  LinearProgram lp = LinearProgram::with_variables(k + 1);
  for (Output z = 0; z < k; ++z) lp.objective[z] = v[z];
  lp.objective[k] = 1;
  lp.var_kinds[k] = VarKind::kFree;
  for (Output z = 0; z < k; ++z) {
    RVector row(k + 1);
    for (Output j = 0; j < k; ++j) row[j] = -loss(z, j);
    row[k] = 1;
    lp.add_row(std::move(row), RowKind::kLessEqual, 0);
  }
  RVector mass(k + 1, Rational(1));
  mass[k] = 0;
  lp.add_row(std::move(mass), RowKind::kEqual, 1);
  LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) throw Error("conjugate LP did not reach an optimum");
  sol.point.pop_back();
  return {sol.optimum, SimplexPoint(std::move(sol.point))};
}

Rational eval_max_min_margin(const LossMatrix& loss, std::span<const Rational> v, Output y) {
  check_dims(loss, v, y);
  return neg_bayes_risk_L_conjugate(loss, v).value - v[y];
}

}  // namespace mmc
