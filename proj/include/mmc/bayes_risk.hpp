#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmc/loss.hpp"
#include "mmc/polytope.hpp"

namespace mmc {

// Plans are k x k matrices indexed (true label, paired label): row y of a
// plan is the block Q_y that meets L_y in <L, Q> = sum_y L_y . Q_y.

/// Q >= 0, Q 1 = q and Q^T 1 = q.
bool in_transport_polytope(const RMatrix& plan, const SimplexPoint& q);

/// (1 L_y^T - L) Q_y <= 0 for every y, i.e. (L_y - L_z) . Q_y <= 0 for all z.
bool in_restriction_cone(const LossMatrix& loss, const RMatrix& plan);

struct RiskValue {
  Rational value;
  std::optional<Output> output;  // minimizing prediction, for H_L
  std::optional<RMatrix> plan;   // transport plan, for H_M and H_RM
  std::optional<RVector> dual;   // multipliers a, for the dual of H_M
};

/// H_L(q) = min_y L_y . q with the least minimizing y.
RiskValue bayes_risk_L(const LossMatrix& loss, const SimplexPoint& q);

/// H_M(q) = max over U(q, q) of <L, Q>. Rows and columns outside the support
/// of q are pinned to zero before solving.
RiskValue bayes_risk_M(const LossMatrix& loss, const SimplexPoint& q);

/// min a . q subject to (a_y + a_z) / 2 >= L(y, z). Requires symmetric L.
RiskValue bayes_risk_M_dual(const LossMatrix& loss, const SimplexPoint& q);

/// H_RM(q) = max over U(q, q) intersected with C_L of <L, Q>.
RiskValue bayes_risk_RM(const LossMatrix& loss, const SimplexPoint& q);

/// H_MM(q), which equals H_L(q).
RiskValue bayes_risk_MM(const LossMatrix& loss, const SimplexPoint& q);

/// Recomputes sum_y q_y S_MM(-L_z, y) for each z in y*(q) and checks each
/// equals H_L(q), and that no score vector -L_z beats it.
bool cross_check_bayes_risk_MM(const LossMatrix& loss, const SimplexPoint& q);

/// Brute force over the enumerated vertices of U(q, q); k <= 4.
RiskValue bayes_risk_M_by_vertices(const LossMatrix& loss, const SimplexPoint& q);

struct PairConjugate {
  Rational value;
  // Unordered maximizing pairs (y <= z), ascending.
  std::vector<std::pair<Output, Output>> maximizers;
};

/// (-H_M)^*(v) = max_{y, z} L(y, z) + (v_y + v_z) / 2. Requires symmetric L.
PairConjugate conjugate_neg_HM(const LossMatrix& loss, std::span<const Rational> v);

/// Same value as an LP over symmetric probability matrices:
/// max <L + v 1^T, Q> with Q = Q^T, Q >= 0, sum Q = 1.
Rational conjugate_neg_HM_lp(const LossMatrix& loss, std::span<const Rational> v);

/// (e_y + e_z) / 2 for the unique maximizing pair; nullopt when several
/// pairs tie and the subdifferential is not a single point.
std::optional<SimplexPoint> subgradient_point_neg_HM(const LossMatrix& loss,
                                                     std::span<const Rational> v);

/// -L_y minimizes the Max-Min-Margin conditional risk at q. Requires y in
/// y*(q).
bool verify_mm_minimizer(const LossMatrix& loss, const SimplexPoint& q, Output y);

struct FenchelYoungCheck {
  std::size_t samples = 0;
  bool inequality_holds = true;  // conj(v) >= v.q + H_M(q) at every sample
  // Equality at the subgradient point, when it is unique.
  std::optional<bool> equality_at_subgradient;
};

/// Samples random q with a seeded generator. Requires symmetric L.
FenchelYoungCheck fenchel_young_spot_check(const LossMatrix& loss, std::span<const Rational> v,
                                           std::uint64_t seed, std::size_t samples = 32);

}  // namespace mmc
