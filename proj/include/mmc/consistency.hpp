#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmc/bayes_risk.hpp"
#include "mmc/loss.hpp"
#include "mmc/polytope.hpp"

namespace mmc {

using Triple = std::array<Output, 3>;

struct DistanceCheck {
  bool holds = true;
  bool symmetric = true;
  std::optional<std::pair<Output, Output>> asymmetric_pair;
  // (a, z, b) with L(a, b) > L(a, z) + L(z, b).
  std::optional<Triple> violating_triple;
};

/// Symmetry plus the triangle inequality; positivity off the diagonal is a
/// LossMatrix invariant. Reports the first violation in (a, b, z) loop order.
DistanceCheck is_distance(const LossMatrix& loss);

/// The first of the three identities
///   L(y1,y2) = L(y1,z) + L(z,y2), L(y1,y3) = L(y1,z) + L(z,y3),
///   L(y2,y3) = L(y2,z) + L(z,y3)
/// that fails at z, numbered 1..3; nullopt when all three hold.
std::optional<int> failing_identity(const LossMatrix& loss, const Triple& t, Output z);

struct IdentityFailure {
  Output z;
  int identity;
};

struct NecessaryConditionResult {
  bool holds = true;
  bool is_distance = true;
  bool triples_hold = true;
  bool vacuous = false;  // k <= 2
  std::optional<Triple> violating_triple;
  std::vector<IdentityFailure> failures;  // one per z for the violating triple
};

/// Searches every unordered triple for a centre z. Requires symmetric L.
NecessaryConditionResult check_necessary_condition(const LossMatrix& loss);

struct TreeEdge {
  Output a;
  Output b;
  Rational weight;
};

struct TreeCertificate {
  std::vector<TreeEdge> edges;
};

/// Path-sum distances of a weighted spanning tree; nullopt if the edges do
/// not form one.
std::optional<RMatrix> tree_path_sums(std::size_t k, const std::vector<TreeEdge>& edges);

/// Minimum spanning tree (least-index ties) accepted only when its path sums
/// reproduce L exactly.
std::optional<TreeCertificate> certify_tree_metric(const LossMatrix& loss);

struct DominantLabelCheck {
  Output y = 0;
  RMatrix witness;
  Rational witness_value;  // <L, Q>
  Rational two_h_l;        // 2 H_L(q)
  Rational dual_value;     // H_M(q) from the dual program
  bool plan_feasible = false;
  bool value_matches = false;  // <L, Q> = 2 L_y . q
  bool dual_feasible = false;  // a = 2 L_y satisfies the dual rows
  bool dual_bound = false;     // dual value <= 2 H_L(q)
  bool y_optimal = false;

  bool verified() const {
    return plan_feasible && value_matches && dual_feasible && dual_bound && y_optimal;
  }
};

/// The plan Q with row and column y equal to q off the diagonal and
/// Q_yy = 2 q_y - 1.
RMatrix dominant_label_witness(const SimplexPoint& q, Output y);

/// Throws NotADistanceError or NoDominantLabelError on the preconditions.
DominantLabelCheck check_dominant_label_identity(const LossMatrix& loss, const SimplexPoint& q);

struct RmSimpleCheck {
  bool holds = true;
  RVector minima;  // min of q_y over Delta(y), per y
  std::vector<SimplexPoint> witnesses;
};

RmSimpleCheck check_rm_simple_sufficient(const LossMatrix& loss);

struct A1Violation {
  SimplexPoint vertex;
  Output from_set;  // the prediction set the vertex belongs to
  Output y;         // q is outside Delta(y) while q_y > 0
};

struct A1Check {
  bool holds = true;
  std::size_t vertices_checked = 0;
  std::optional<A1Violation> violation;
};

/// Throws ResourceError when k exceeds the enumeration cap.
A1Check check_assumption_a1(const LossMatrix& loss, const EnumerationLimits& limits = {});

struct GridRecord {
  SimplexPoint q;
  Rational h_l;
  Rational h_m;
  Rational h_rm;
};

struct Discrepancy {
  SimplexPoint q;
  std::string what;
};

struct OracleOptions {
  std::size_t denominator = 0;  // 0 selects 2k
  // Compare H_M against brute force over the vertices of U(q, q) when k is
  // at most this.
  std::size_t vertex_check_max_k = 3;
};

struct GridReport {
  std::size_t denominator = 0;
  std::vector<GridRecord> records;
  std::vector<Discrepancy> discrepancies;
  std::size_t vertex_checked_points = 0;
};

/// Sweeps the grid {m / N}, recomputing H_L, H_M and H_RM and checking
/// H_RM <= H_L <= H_M, H_M <= 2 H_L for distances and H_M = 2 H_L under a
/// dominant label. OpenMP over grid points.
GridReport brute_force_oracle(const LossMatrix& loss, const OracleOptions& options = {});
GridReport brute_force_oracle_serial(const LossMatrix& loss, const OracleOptions& options = {});

enum class CheckStatus { kHolds, kFails, kNotApplicable };

struct EmbeddingCheck {
  std::string identity;
  bool hypothesis_met = false;
  bool holds = false;
  std::string counterexample;  // empty when holds

  CheckStatus status() const {
    if (!hypothesis_met) return CheckStatus::kNotApplicable;
    return holds ? CheckStatus::kHolds : CheckStatus::kFails;
  }
};

struct EmbeddingHypotheses {
  bool distance = false;
  bool tree_certified = false;
  bool a1 = false;
};

/// Evaluates every identity regardless of its hypothesis; the status of an
/// identity without its hypothesis is "not applicable".
std::vector<EmbeddingCheck> check_embedding_identities(const LossMatrix& loss,
                                                       const EmbeddingHypotheses& hyp,
                                                       const GridReport& grid);

enum class Verdict { kConsistent, kInconsistent, kUndetermined };

struct SurrogateVerdict {
  Verdict verdict = Verdict::kUndetermined;
  std::vector<std::string> justification;
};

struct DominantLabelSweep {
  bool applicable = false;
  std::size_t points = 0;
  std::size_t verified = 0;
  std::optional<SimplexPoint> first_failure;
};

struct FenchelYoungSweep {
  bool applicable = false;
  std::size_t vectors = 0;
  bool inequality_holds = true;
  std::size_t equality_checked = 0;
  bool equality_holds = true;
};

struct ReportOptions {
  EnumerationLimits limits;
  std::size_t grid = 0;  // 0 selects 2k
  std::uint64_t seed = 0;
  std::size_t vertex_check_max_k = 3;
};

struct ConsistencyReport {
  std::size_t k = 0;
  bool symmetric = false;
  DistanceCheck distance;
  std::optional<NecessaryConditionResult> necessary;  // symmetric losses only
  std::optional<TreeCertificate> tree;
  RmSimpleCheck rm_simple;
  std::optional<A1Check> a1;  // nullopt when over the enumeration cap
  std::string a1_error;
  DominantLabelSweep dominant_label;
  std::vector<EmbeddingCheck> embedding;
  GridReport grid;
  FenchelYoungSweep fenchel_young;
  SurrogateVerdict max_margin;
  SurrogateVerdict restricted_max_margin;
  SurrogateVerdict max_min_margin;
};

ConsistencyReport build_report(const LossMatrix& loss, const ReportOptions& options = {});

const char* to_string(Verdict v);
const char* to_string(CheckStatus s);

}  // namespace mmc
