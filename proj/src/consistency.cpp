#include "mmc/consistency.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "mmc/errors.hpp"
#include "mmc/random.hpp"
#include "mmc/surrogate.hpp"

namespace mmc {

namespace {

std::string label(Output y) { return std::to_string(y + 1); }

std::string triple_str(const Triple& t) {
  return "(" + label(t[0]) + ", " + label(t[1]) + ", " + label(t[2]) + ")";
}

}  // namespace

DistanceCheck is_distance(const LossMatrix& loss) {
  const std::size_t k = loss.k();
  DistanceCheck out;
  for (Output a = 0; a < k && !out.asymmetric_pair; ++a) {
    for (Output b = a + 1; b < k; ++b) {
      if (loss(a, b) != loss(b, a)) {
        out.symmetric = false;
        out.asymmetric_pair = {a, b};
        break;
      }
    }
  }
  for (Output a = 0; a < k && !out.violating_triple; ++a) {
    for (Output b = 0; b < k && !out.violating_triple; ++b) {
      for (Output z = 0; z < k; ++z) {
        if (loss(a, b) > loss(a, z) + loss(z, b)) {
          out.violating_triple = Triple{a, z, b};
          break;
        }
      }
    }
  }
  out.holds = out.symmetric && !out.violating_triple;
  return out;
}

std::optional<int> failing_identity(const LossMatrix& loss, const Triple& t, Output z) {
  const auto [y1, y2, y3] = t;
  if (loss(y1, y2) != loss(y1, z) + loss(z, y2)) return 1;
  if (loss(y1, y3) != loss(y1, z) + loss(z, y3)) return 2;
  if (loss(y2, y3) != loss(y2, z) + loss(z, y3)) return 3;
  return std::nullopt;
}

NecessaryConditionResult check_necessary_condition(const LossMatrix& loss) {
  if (!loss.is_symmetric()) {
    throw PreconditionError("check_necessary_condition requires a symmetric loss");
  }
  const std::size_t k = loss.k();
  NecessaryConditionResult out;
  out.is_distance = is_distance(loss).holds;
  if (k <= 2) {
    out.vacuous = true;
    out.holds = true;
    return out;
  }
  for (Output y1 = 0; y1 < k && out.triples_hold; ++y1) {
    for (Output y2 = y1 + 1; y2 < k && out.triples_hold; ++y2) {
      for (Output y3 = y2 + 1; y3 < k; ++y3) {
        const Triple t{y1, y2, y3};
        std::vector<IdentityFailure> failures;
        bool centred = false;
        for (Output z = 0; z < k; ++z) {
          const auto bad = failing_identity(loss, t, z);
          if (!bad) {
            centred = true;
            break;
          }
          failures.push_back({z, *bad});
        }
        if (!centred) {
          out.triples_hold = false;
          out.violating_triple = t;
          out.failures = std::move(failures);
          break;
        }
      }
    }
  }
  out.holds = out.is_distance && out.triples_hold;
  return out;
}

std::optional<RMatrix> tree_path_sums(std::size_t k, const std::vector<TreeEdge>& edges) {
  if (edges.size() + 1 != k) return std::nullopt;
  std::vector<std::vector<std::pair<Output, const Rational*>>> adj(k);
  for (const auto& e : edges) {
    if (e.a >= k || e.b >= k || e.a == e.b || e.weight.sign() <= 0) return std::nullopt;
    adj[e.a].emplace_back(e.b, &e.weight);
    adj[e.b].emplace_back(e.a, &e.weight);
  }
  RMatrix dist(k, k);
  for (Output s = 0; s < k; ++s) {
    std::vector<bool> seen(k, false);
    std::vector<Output> stack{s};
    seen[s] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Output u = stack.back();
      stack.pop_back();
      for (const auto& [w, weight] : adj[u]) {
        if (seen[w]) continue;
        seen[w] = true;
        ++reached;
        dist(s, w) = dist(s, u) + *weight;
        stack.push_back(w);
      }
    }
    if (reached != k) return std::nullopt;
  }
  return dist;
}

std::optional<TreeCertificate> certify_tree_metric(const LossMatrix& loss) {
  if (!is_distance(loss).holds) return std::nullopt;
  const std::size_t k = loss.k();
  std::vector<std::pair<Output, Output>> pairs;
  for (Output a = 0; a < k; ++a) {
    for (Output b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    return loss(x.first, x.second) < loss(y.first, y.second);
  });

  std::vector<Output> parent(k);
  std::iota(parent.begin(), parent.end(), Output{0});
  auto find = [&](Output x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  TreeCertificate cert;
  for (const auto& [a, b] : pairs) {
    const Output ra = find(a);
    const Output rb = find(b);
    if (ra == rb) continue;
    parent[std::max(ra, rb)] = std::min(ra, rb);
    cert.edges.push_back({a, b, loss(a, b)});
  }
  const auto sums = tree_path_sums(k, cert.edges);
  if (!sums || *sums != loss.matrix()) return std::nullopt;
  return cert;
}

RMatrix dominant_label_witness(const SimplexPoint& q, Output y) {
  const std::size_t k = q.size();
  RMatrix plan(k, k);
  for (Output z = 0; z < k; ++z) {
    if (z == y) continue;
    plan(y, z) = q[z];
    plan(z, y) = q[z];
  }
  plan(y, y) = Rational(2) * q[y] - 1;
  return plan;
}

DominantLabelCheck check_dominant_label_identity(const LossMatrix& loss, const SimplexPoint& q) {
  if (q.size() != loss.k()) throw StructuralError("dimension mismatch between loss and q");
  if (!is_distance(loss).holds) {
    throw NotADistanceError("dominant label identity requires a distance");
  }
  const Rational half(1, 2);
  Output y = 0;
  while (y < q.size() && q[y] < half) ++y;
  if (y == q.size()) throw NoDominantLabelError("no coordinate of q reaches 1/2");

  DominantLabelCheck out;
  out.y = y;
  out.witness = dominant_label_witness(q, y);
  out.witness_value = frobenius(loss.matrix(), out.witness);
  out.plan_feasible = in_transport_polytope(out.witness, q);
  const Rational ly_q = dot(loss.row(y), q.values());
  out.value_matches = out.witness_value == Rational(2) * ly_q;

  out.dual_feasible = true;
  for (Output a = 0; a < loss.k(); ++a) {
    for (Output b = a; b < loss.k(); ++b) {
      if (loss(y, a) + loss(y, b) < loss(a, b)) out.dual_feasible = false;
    }
  }

  const RiskValue hl = bayes_risk_L(loss, q);
  out.two_h_l = Rational(2) * hl.value;
  out.dual_value = bayes_risk_M_dual(loss, q).value;
  out.dual_bound = out.dual_value <= out.two_h_l;
  out.y_optimal = ly_q == hl.value;
  return out;
}

RmSimpleCheck check_rm_simple_sufficient(const LossMatrix& loss) {
  const std::size_t k = loss.k();
  RmSimpleCheck out;
  for (Output y = 0; y < k; ++y) {
    const PredictionSet ps = prediction_set(loss, y);
    RVector objective(k);
    objective[y] = -1;
    const LpSolution sol = solve_lp(ps.hrep.as_lp(std::move(objective)));
    if (!sol.optimal()) throw Error("prediction set LP did not reach an optimum");
    out.minima.push_back(-sol.optimum);
    out.witnesses.emplace_back(sol.point);
    if (out.minima.back().sign() <= 0) out.holds = false;
  }
  return out;
}

A1Check check_assumption_a1(const LossMatrix& loss, const EnumerationLimits& limits) {
  const std::size_t k = loss.k();
  std::vector<PredictionSet> sets;
  for (Output y = 0; y < k; ++y) sets.push_back(prediction_set(loss, y));
  A1Check out;
  for (Output from = 0; from < k && !out.violation; ++from) {
    const VertexSet vs = enumerate_vertices(sets[from].hrep, limits);
    for (const auto& x : vs.vertices) {
      ++out.vertices_checked;
      const SimplexPoint q(x);
      for (Output y = 0; y < k; ++y) {
        if (q[y].is_zero() || sets[y].contains(q)) continue;
        out.holds = false;
        out.violation = A1Violation{q, from, y};
        break;
      }
      if (out.violation) break;
    }
  }
  return out;
}

namespace {

void check_point(const LossMatrix& loss, bool distance, bool by_vertices, GridRecord& rec,
                 std::vector<std::string>& issues) {
  rec.h_l = bayes_risk_L(loss, rec.q).value;
  rec.h_m = bayes_risk_M(loss, rec.q).value;
  rec.h_rm = bayes_risk_RM(loss, rec.q).value;
  const Rational two_h_l = Rational(2) * rec.h_l;
  if (by_vertices) {
    const Rational brute = bayes_risk_M_by_vertices(loss, rec.q).value;
    if (brute != rec.h_m) {
      issues.push_back("H_M by LP = " + rec.h_m.str() + " but by vertices = " + brute.str());
    }
  }
  if (rec.h_rm > rec.h_l) issues.push_back("H_RM = " + rec.h_rm.str() + " > H_L = " + rec.h_l.str());
  if (rec.h_l > rec.h_m) issues.push_back("H_L = " + rec.h_l.str() + " > H_M = " + rec.h_m.str());
  if (distance && rec.h_m > two_h_l) {
    issues.push_back("H_M = " + rec.h_m.str() + " > 2 H_L = " + two_h_l.str());
  }
  if (distance && rec.q.max_entry() >= Rational(1, 2) && rec.h_m != two_h_l) {
    issues.push_back("dominant label but H_M = " + rec.h_m.str() + " != 2 H_L = " + two_h_l.str());
  }
}

GridReport prepare_grid(const LossMatrix& loss, const OracleOptions& options) {
  GridReport out;
  out.denominator = options.denominator == 0 ? 2 * loss.k() : options.denominator;
  if (out.denominator == 0) throw StructuralError("grid denominator must be positive");
  for (auto& q : simplex_grid(loss.k(), out.denominator)) {
    out.records.push_back({std::move(q), {}, {}, {}});
  }
  return out;
}

void collect(GridReport& out, std::vector<std::vector<std::string>>& issues) {
  for (std::size_t i = 0; i < issues.size(); ++i) {
    for (auto& what : issues[i]) out.discrepancies.push_back({out.records[i].q, std::move(what)});
  }
}

}  // namespace

GridReport brute_force_oracle(const LossMatrix& loss, const OracleOptions& options) {
  GridReport out = prepare_grid(loss, options);
  const bool distance = is_distance(loss).holds;
  const bool by_vertices = loss.k() <= std::min(options.vertex_check_max_k, kMaxTransportOutputs);
  const auto n = static_cast<std::ptrdiff_t>(out.records.size());
  std::vector<std::vector<std::string>> issues(out.records.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      check_point(loss, distance, by_vertices, out.records[i], issues[i]);
    } catch (...) {
#pragma omp critical(mmc_oracle_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  collect(out, issues);
  if (by_vertices) out.vertex_checked_points = out.records.size();
  return out;
}

GridReport brute_force_oracle_serial(const LossMatrix& loss, const OracleOptions& options) {
  GridReport out = prepare_grid(loss, options);
  const bool distance = is_distance(loss).holds;
  const bool by_vertices = loss.k() <= std::min(options.vertex_check_max_k, kMaxTransportOutputs);
  std::vector<std::vector<std::string>> issues(out.records.size());
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    check_point(loss, distance, by_vertices, out.records[i], issues[i]);
  }
  collect(out, issues);
  if (by_vertices) out.vertex_checked_points = out.records.size();
  return out;
}

std::vector<EmbeddingCheck> check_embedding_identities(const LossMatrix& loss,
                                                       const EmbeddingHypotheses& hyp,
                                                       const GridReport& grid) {
  const std::size_t k = loss.k();
  std::vector<EmbeddingCheck> out;

  EmbeddingCheck mm{"max-margin-embedding", hyp.distance, true, {}};
  for (Output y = 0; y < k && mm.holds; ++y) {
    const ScoreVector v = embedding(loss, y);
    for (Output z = 0; z < k; ++z) {
      const Rational s = eval_max_margin(loss, v, z);
      const Rational want = Rational(2) * loss(y, z);
      if (s != want) {
        mm.holds = false;
        mm.counterexample = "S_M(-L_" + label(y) + ", " + label(z) + ") = " + s.str() +
                            " != " + want.str();
        break;
      }
    }
  }
  out.push_back(std::move(mm));

  EmbeddingCheck rm{"restricted-max-margin-embedding", hyp.a1, true, {}};
  for (Output z = 0; z < k && rm.holds; ++z) {
    const ScoreVector v = embedding(loss, z);
    for (Output y = 0; y < k; ++y) {
      const Rational s = eval_restricted_max_margin(loss, v, y);
      if (s != loss(z, y)) {
        rm.holds = false;
        rm.counterexample = "S_RM(-L_" + label(z) + ", " + label(y) + ") = " + s.str() +
                            " != " + loss(z, y).str();
        break;
      }
    }
  }
  out.push_back(std::move(rm));

  EmbeddingCheck decode{"argmax-inverse", true, true, {}};
  for (Output y = 0; y < k; ++y) {
    const Output d = argmax_decode(embedding(loss, y));
    if (d != y) {
      decode.holds = false;
      decode.counterexample = "argmax(-L_" + label(y) + ") = " + label(d);
      break;
    }
  }
  out.push_back(std::move(decode));

  EmbeddingCheck hm{"bayes-risk-max-margin", hyp.tree_certified, true, {}};
  EmbeddingCheck hrm{"bayes-risk-restricted-max-margin", hyp.a1, true, {}};
  for (const auto& r : grid.records) {
    if (hm.holds && r.h_m != Rational(2) * r.h_l) {
      hm.holds = false;
      hm.counterexample = "q = " + format_vector(r.q.values()) + ": H_M = " + r.h_m.str() +
                          ", 2 H_L = " + (Rational(2) * r.h_l).str();
    }
    if (hrm.holds && r.h_rm != r.h_l) {
      hrm.holds = false;
      hrm.counterexample = "q = " + format_vector(r.q.values()) + ": H_RM = " + r.h_rm.str() +
                           ", H_L = " + r.h_l.str();
    }
  }
  out.push_back(std::move(hm));
  out.push_back(std::move(hrm));
  return out;
}

namespace {

SurrogateVerdict max_margin_verdict(const ConsistencyReport& r) {
  SurrogateVerdict v;
  if (!r.necessary) {
    v.justification.push_back("loss is not symmetric; the necessary condition does not apply");
    v.justification.push_back("no sufficient condition applies");
    return v;
  }
  const auto& nc = *r.necessary;
  if (!nc.holds) {
    v.verdict = Verdict::kInconsistent;
    if (!nc.is_distance) {
      std::string why = "necessary condition fails: loss is not a distance";
      if (r.distance.violating_triple) {
        const auto [a, z, b] = *r.distance.violating_triple;
        why += " (L(" + label(a) + "," + label(b) + ") > L(" + label(a) + "," + label(z) +
               ") + L(" + label(z) + "," + label(b) + "))";
      }
      v.justification.push_back(why);
    } else {
      v.justification.push_back("necessary condition fails: no centre z for triple " +
                                triple_str(*nc.violating_triple));
    }
    return v;
  }
  v.justification.push_back(nc.vacuous ? "necessary condition holds vacuously (k <= 2)"
                                       : "necessary condition holds");
  if (r.tree) {
    v.verdict = Verdict::kConsistent;
    v.justification.push_back("loss is a tree metric (certificate with " +
                              std::to_string(r.tree->edges.size()) + " edges)");
  } else {
    v.justification.push_back("tree metric not certified; sufficiency of the necessary "
                              "condition is open");
  }
  return v;
}

SurrogateVerdict restricted_verdict(const ConsistencyReport& r) {
  SurrogateVerdict v;
  if (r.max_margin.verdict == Verdict::kConsistent) {
    v.verdict = Verdict::kConsistent;
    v.justification.push_back("max-margin consistency implies restricted-max-margin consistency");
  }
  if (r.rm_simple.holds) {
    v.verdict = Verdict::kConsistent;
    v.justification.push_back("min of q_y over Delta(y) is positive for every y");
  } else {
    v.justification.push_back("min of q_y over Delta(y) is zero for some y");
  }
  if (r.a1) {
    if (r.a1->holds) {
      v.verdict = Verdict::kConsistent;
      v.justification.push_back("every prediction-set vertex q has q in Delta(y) or q_y = 0 (A1)");
    } else {
      v.justification.push_back("A1 fails at a prediction-set vertex");
    }
  } else {
    v.justification.push_back("A1 undetermined: " + r.a1_error);
  }
  return v;
}

}  // namespace

ConsistencyReport build_report(const LossMatrix& loss, const ReportOptions& options) {
  const std::size_t k = loss.k();
  ConsistencyReport r;
  r.k = k;
  r.symmetric = loss.is_symmetric();
  r.distance = is_distance(loss);
  if (r.symmetric) r.necessary = check_necessary_condition(loss);
  r.tree = certify_tree_metric(loss);
  r.rm_simple = check_rm_simple_sufficient(loss);
  try {
    r.a1 = check_assumption_a1(loss, options.limits);
  } catch (const ResourceError& e) {
    r.a1_error = e.what();
  }

  OracleOptions oracle;
  oracle.denominator = options.grid;
  oracle.vertex_check_max_k = options.vertex_check_max_k;
  r.grid = brute_force_oracle(loss, oracle);

  if (r.distance.holds) {
    r.dominant_label.applicable = true;
    for (const auto& rec : r.grid.records) {
      if (rec.q.max_entry() < Rational(1, 2)) continue;
      ++r.dominant_label.points;
      if (check_dominant_label_identity(loss, rec.q).verified()) {
        ++r.dominant_label.verified;
      } else if (!r.dominant_label.first_failure) {
        r.dominant_label.first_failure = rec.q;
      }
    }
  }

  EmbeddingHypotheses hyp;
  hyp.distance = r.distance.holds;
  hyp.tree_certified = r.tree.has_value();
  hyp.a1 = r.a1 && r.a1->holds;
  r.embedding = check_embedding_identities(loss, hyp, r.grid);

  if (r.symmetric) {
    constexpr std::size_t kVectors = 8;
    Rng rng(options.seed);
    r.fenchel_young.applicable = true;
    r.fenchel_young.vectors = kVectors;
    for (std::size_t i = 0; i < kVectors; ++i) {
      const RVector v = rng.vector(k, -2, 2, 4);
      const auto check = fenchel_young_spot_check(loss, v, options.seed + i + 1, 8);
      r.fenchel_young.inequality_holds = r.fenchel_young.inequality_holds && check.inequality_holds;
      if (check.equality_at_subgradient) {
        ++r.fenchel_young.equality_checked;
        r.fenchel_young.equality_holds =
            r.fenchel_young.equality_holds && *check.equality_at_subgradient;
      }
    }
  }

  r.max_margin = max_margin_verdict(r);
  r.restricted_max_margin = restricted_verdict(r);
  r.max_min_margin.verdict = Verdict::kConsistent;
  r.max_min_margin.justification.push_back("max-min-margin Bayes risk equals H_L, so it embeds L");
  return r;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent: return "consistent";
    case Verdict::kInconsistent: return "inconsistent";
    case Verdict::kUndetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kHolds: return "holds";
    case CheckStatus::kFails: return "fails";
    case CheckStatus::kNotApplicable: return "not-applicable";
  }
  return "?";
}

}  // namespace mmc
