#pragma once

#include "mmc/loss.hpp"

namespace mmc {

/// S_M(v, y) = max_z L(y, z) + v_z - v_y, by enumeration.
Rational eval_max_margin(const LossMatrix& loss, std::span<const Rational> v, Output y);

/// S_RM(v, y) = max over q in Delta(y) of L_y . q + v . q - v_y, by LP.
Rational eval_restricted_max_margin(const LossMatrix& loss, std::span<const Rational> v, Output y);

struct ConjugateValue {
  Rational value;
  SimplexPoint maximizer;  // an optimal q
};

/// (-H_L)^*(v) = max over q in the simplex of v . q + min_z L_z . q, by LP
/// in (q, u).
ConjugateValue neg_bayes_risk_L_conjugate(const LossMatrix& loss, std::span<const Rational> v);

/// S_MM(v, y) = (-H_L)^*(v) - v_y.
Rational eval_max_min_margin(const LossMatrix& loss, std::span<const Rational> v, Output y);

/// sum_y q_y S(v, y) for the loss evaluator `eval`.
template <typename Eval>
Rational conditional_risk(Eval eval, const LossMatrix& loss, std::span<const Rational> v,
                          const SimplexPoint& q) {
  Rational acc;
  for (Output y = 0; y < loss.k(); ++y) {
    if (!q[y].is_zero()) acc += q[y] * eval(loss, v, y);
  }
  return acc;
}

}  // namespace mmc
