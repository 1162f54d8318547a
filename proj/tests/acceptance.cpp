// Runs every acceptance criterion at exact tolerance and prints one line per
// criterion. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mmc/bayes_risk.hpp"
#include "mmc/consistency.hpp"
#include "mmc/corpus.hpp"
#include "mmc/io.hpp"
#include "mmc/polytope.hpp"
#include "mmc/surrogate.hpp"
#include "oracles.hpp"

#ifndef MMC_GOLDEN_DIR
#define MMC_GOLDEN_DIR "tests/golden"
#endif

namespace {

using namespace mmc;
using mmc::test::R;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

LossMatrix corpus_loss(const char* name) { return find_corpus_entry(name)->loss; }

bool in_plan_polytope(const RMatrix& plan, const SimplexPoint& q) {
  const std::size_t k = q.size();
  for (std::size_t i = 0; i < k; ++i) {
    Rational row;
    Rational col;
    for (std::size_t j = 0; j < k; ++j) {
      if (plan(i, j) < Rational(0)) return false;
      row += plan(i, j);
      col += plan(j, i);
    }
    if (row != q[i] || col != q[i]) return false;
  }
  return true;
}

Rational min_row_value(const LossMatrix& l, const SimplexPoint& q) {
  Rational best = dot(l.row(0), q.values());
  for (Output y = 1; y < l.k(); ++y) best = std::min(best, dot(l.row(y), q.values()));
  return best;
}

bool pair_form(const LossMatrix& l, const RVector& x) {
  const std::size_t k = l.k();
  for (Output y = 0; y < k; ++y) {
    for (Output z = y; z < k; ++z) {
      RVector expected = SimplexPoint::pair_midpoint(k, y, z).values();
      expected.push_back(l(y, z) / 2);
      if (expected == x) return true;
    }
  }
  return false;
}

SimplexPoint dominant_point(Rng& rng, std::size_t k) {
  const SimplexPoint rest = rng.simplex_point(k, 6, rng.below(k));
  const Output y = rng.below(k);
  RVector q(k);
  for (Output i = 0; i < k; ++i) q[i] = rest[i] / 2;
  q[y] += R(1, 2);
  return SimplexPoint(std::move(q));
}

// ---------------------------------------------------------------------------

Outcome binary_baseline() {
  Outcome out;
  const LossMatrix l = zero_one_loss(2);
  Rng rng(1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    const RVector v = rng.vector(2, -4, 4, 9);
    const Output y = rng.below(2);
    if (eval_max_margin(l, v, y) == 2 * eval_restricted_max_margin(l, v, y)) ++equal;
  }
  out.require(equal == 100, "S_M = 2 S_RM on " + std::to_string(equal) + "/100 samples");

  // The conditional risk at q = (3/5, 2/5) depends on d = v_1 - v_2 only and is
  // piecewise linear with kinks at d = -1 and d = 1.
  const SimplexPoint q({R(3, 5), R(2, 5)});
  auto risk = [&](const Rational& d) {
    return conditional_risk(eval_max_margin, l, RVector{d, 0}, q);
  };
  const ScoreVector psi = embedding(l, 0);
  const Rational at_psi = conditional_risk(eval_max_margin, l, psi, q);
  const Rational floor = std::min(risk(-1), risk(1));
  const bool outer_slopes_up = risk(2) >= risk(1) && risk(-2) >= risk(-1);
  out.require(outer_slopes_up, "conditional risk is not minimized between the kinks");
  out.require(at_psi == floor, "-L_1 attains " + at_psi.str() + ", minimum is " + floor.str());
  out.require(argmax_decode(psi) == 0, "argmax of -L_1 is not label 1");
  out.note("S_M = 2 S_RM on 100/100; at q = (3/5, 2/5) -L_1 attains the minimum " + floor.str() +
           " and decodes to label 1");
  return out;
}

Outcome necessary_condition_verdicts() {
  Outcome out;
  for (std::size_t k = 3; k <= 5; ++k) {
    out.require(!check_necessary_condition(zero_one_loss(k)).holds,
                "zero-one-" + std::to_string(k) + " passes the necessary condition");
  }
  for (std::size_t k = 3; k <= 6; ++k) {
    out.require(check_necessary_condition(chain_loss(k)).holds,
                "chain-" + std::to_string(k) + " fails the necessary condition");
  }

  const CorpusEntry perm = *find_corpus_entry("perm-hamming-3");
  const auto nc = check_necessary_condition(perm.loss);
  out.require(!nc.holds, "perm-hamming-3 passes the necessary condition");

  // The transpositions (3 2), (2 1), (3 1) are the permutations 132, 213, 321.
  std::vector<Output> t;
  for (const char* label : {"132", "213", "321"}) {
    const auto it = std::find(perm.labels.begin(), perm.labels.end(), label);
    t.push_back(static_cast<Output>(it - perm.labels.begin()));
  }
  const Triple triple{t[0], t[1], t[2]};
  bool no_centre = true;
  for (Output z = 0; z < perm.loss.k(); ++z) {
    no_centre = no_centre && failing_identity(perm.loss, triple, z).has_value();
  }
  out.require(no_centre, "the transposition triple has a centre");

  std::ostringstream pairwise;
  bool all_two_thirds = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Rational d = perm.loss(triple[i], triple[j]);
      pairwise << (pairwise.tellp() > 0 ? ", " : "") << perm.labels[triple[i]] << "-"
               << perm.labels[triple[j]] << " = " << d;
      all_two_thirds = all_two_thirds && d == R(2, 3);
    }
  }
  out.require(all_two_thirds,
              "transposition triple pairwise values are " + pairwise.str() + ", not 2/3");

  // Independent confirmation: no triple of permutations is pairwise at 2/3.
  bool exists = false;
  for (Output a = 0; a < 6; ++a) {
    for (Output b = a + 1; b < 6; ++b) {
      for (Output c = b + 1; c < 6; ++c) {
        exists = exists || (perm.loss(a, b) == R(2, 3) && perm.loss(a, c) == R(2, 3) &&
                             perm.loss(b, c) == R(2, 3));
      }
    }
  }
  if (!exists) out.note("no triple of size-3 permutations is pairwise at Hamming loss 2/3");
  out.note("zero-one-3..5 fail, chain-3..6 hold, perm-hamming-3 fails; transposition triple " +
           pairwise.str() + " has no centre");
  return out;
}

Outcome tree_sufficiency() {
  Outcome out;
  for (const char* name : {"chain-3", "chain-5", "tree-7"}) {
    const LossMatrix l = corpus_loss(name);
    const std::size_t k = l.k();
    const auto cert = certify_tree_metric(l);
    out.require(cert.has_value(), std::string(name) + " not tree-certified");
    if (cert) {
      const auto sums = tree_path_sums(k, cert->edges);
      out.require(sums && *sums == l.matrix(), std::string(name) + " path sums differ from L");
    }
    std::size_t points = 0;
    for (const SimplexPoint& q : simplex_grid(k, 2 * k)) {
      const RiskValue hm = bayes_risk_M(l, q);
      const Rational two_hl = 2 * min_row_value(l, q);
      ++points;
      if (hm.value != two_hl || !in_plan_polytope(*hm.plan, q) ||
          frobenius(l.matrix(), *hm.plan) != hm.value) {
        out.require(false, std::string(name) + " H_M = " + hm.value.str() + " vs 2 H_L = " +
                               two_hl.str() + " at " + format_vector(q.values()));
        break;
      }
    }
    const auto verts = enumerate_vertices(epigraph_polytope(l));
    std::size_t bad = 0;
    for (const auto& x : verts.vertices) bad += pair_form(l, x) ? 0 : 1;
    out.require(bad == 0, std::string(name) + ": " + std::to_string(bad) +
                              " epigraph vertices not of pair form");
    out.note(std::string(name) + ": certified, H_M = 2 H_L at " + std::to_string(points) +
             " grid points, " + std::to_string(verts.size()) + " pair-form vertices");
  }
  return out;
}

Outcome restricted_sufficiency() {
  Outcome out;
  for (std::size_t k = 3; k <= 5; ++k) {
    const LossMatrix l = zero_one_loss(k);
    const auto rm = check_rm_simple_sufficient(l);
    for (Output y = 0; y < k; ++y) {
      // The minimum of a linear function over Delta(y) is attained at a vertex.
      Rational by_vertices = 1;
      for (const auto& x : enumerate_vertices(prediction_set(l, y).hrep).vertices) {
        by_vertices = std::min(by_vertices, x[y]);
      }
      const Rational expected(1, static_cast<long>(k));
      out.require(rm.minima[y] == expected && by_vertices == expected,
                  "zero-one-" + std::to_string(k) + " min q_y over Delta(y) = " +
                      rm.minima[y].str() + " (vertices " + by_vertices.str() + ")");
    }
    std::size_t points = 0;
    for (const SimplexPoint& q : simplex_grid(k, 2 * k)) {
      const RiskValue hrm = bayes_risk_RM(l, q);
      ++points;
      if (hrm.value != min_row_value(l, q) || !in_plan_polytope(*hrm.plan, q) ||
          !in_restriction_cone(l, *hrm.plan)) {
        out.require(false, "zero-one-" + std::to_string(k) + " H_RM != H_L at " +
                               format_vector(q.values()));
        break;
      }
    }
    out.note("zero-one-" + std::to_string(k) + ": minima 1/" + std::to_string(k) +
             ", H_RM = H_L at " + std::to_string(points) + " grid points");
  }
  const LossMatrix sq = corpus_loss("squared-3");
  const auto rm = check_rm_simple_sufficient(sq);
  const SimplexPoint witness({R(1, 2), 0, R(1, 2)});
  out.require(rm.minima[1] == 0, "squared-3 min over Delta(2) of q_2 = " + rm.minima[1].str());
  out.require(prediction_set(sq, 1).contains(witness), "(1/2, 0, 1/2) is not in Delta(2)");
  out.note("squared-3: min over Delta(2) of q_2 = 0, attained at (1/2, 0, 1/2)");
  return out;
}

Outcome dominant_label() {
  Outcome out;
  Rng rng(5);
  std::size_t checked = 0;
  std::size_t grid_points = 0;
  for (int m = 0; m < 20; ++m) {
    const std::size_t k = 3 + static_cast<std::size_t>(m % 3);
    const LossMatrix l = mmc::test::random_distance(rng, k);
    for (int s = 0; s < 20; ++s) {
      const SimplexPoint q = dominant_point(rng, k);
      Output y = 0;
      while (q[y] < R(1, 2)) ++y;
      const Rational two_hl = 2 * min_row_value(l, q);
      const RMatrix witness = dominant_label_witness(q, y);
      const Rational hm = bayes_risk_M(l, q).value;
      ++checked;
      if (hm != two_hl || !in_plan_polytope(witness, q) ||
          frobenius(l.matrix(), witness) != two_hl) {
        out.require(false, "identity fails at " + format_vector(q.values()));
      }
    }
    for (const SimplexPoint& q : simplex_grid(k, 2 * k)) {
      ++grid_points;
      const Rational hm = bayes_risk_M_dual(l, q).value;
      if (hm > 2 * min_row_value(l, q)) {
        out.require(false, "H_M > 2 H_L at " + format_vector(q.values()));
      }
    }
  }
  out.note("H_M = 2 H_L with the witness plan at " + std::to_string(checked) +
           " dominant points; H_M <= 2 H_L at " + std::to_string(grid_points) + " grid points");
  return out;
}

Outcome bayes_risk_ordering() {
  Outcome out;
  Rng rng(6);
  int asymmetric = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.below(4));
    const bool symmetric = i % 2 == 0;
    const LossMatrix l = mmc::test::random_loss(rng, k, symmetric);
    asymmetric += l.is_symmetric() ? 0 : 1;
    const SimplexPoint q = rng.simplex_point(k, 6, rng.below(k));
    const Rational hl = min_row_value(l, q);
    const Rational hrm = bayes_risk_RM(l, q).value;
    const Rational hmm = bayes_risk_MM(l, q).value;
    const Rational hm = bayes_risk_M(l, q).value;
    const bool ok = hrm <= hmm && hmm == hl && hl <= hm && cross_check_bayes_risk_MM(l, q);
    if (!ok) out.require(false, "ordering fails for pair " + std::to_string(i));
  }
  out.note("H_RM <= H_MM = H_L <= H_M on 200 pairs (" + std::to_string(asymmetric) +
           " asymmetric)");
  return out;
}

Outcome conjugate_and_fenchel_young() {
  Outcome out;
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.below(4));
    const LossMatrix l = mmc::test::random_loss(rng, k, true);
    const RVector v = rng.vector(k, -3, 3, 5);
    const PairConjugate c = conjugate_neg_HM(l, v);
    if (c.value != conjugate_neg_HM_lp(l, v)) out.require(false, "conjugate LP mismatch");
  }
  int unique = 0;
  int draws = 0;
  while (unique < 50 && draws < 5000) {
    ++draws;
    const std::size_t k = 2 + static_cast<std::size_t>(rng.below(4));
    const LossMatrix l = mmc::test::random_loss(rng, k, true);
    const RVector v = rng.vector(k, -3, 3, 5);
    // Unique maximizing pair by direct enumeration.
    std::optional<Rational> best;
    int ties = 0;
    Output by = 0;
    Output bz = 0;
    for (Output y = 0; y < k; ++y) {
      for (Output z = y; z < k; ++z) {
        const Rational val = l(y, z) + (v[y] + v[z]) / 2;
        if (!best || val > *best) {
          best = val;
          ties = 1;
          by = y;
          bz = z;
        } else if (val == *best) {
          ++ties;
        }
      }
    }
    if (ties != 1) continue;
    ++unique;
    const SimplexPoint q = SimplexPoint::pair_midpoint(k, by, bz);
    const auto sub = subgradient_point_neg_HM(l, v);
    const Rational rhs = dot(v, q.values()) + bayes_risk_M(l, q).value;
    if (!sub || *sub != q || conjugate_neg_HM(l, v).value != rhs || *best != rhs) {
      out.require(false, "Fenchel-Young equality fails at " + format_vector(v));
    }
  }
  out.require(unique == 50, "only " + std::to_string(unique) + " unique-pair vectors drawn");
  out.note("closed form = LP on 50 (L, v); Fenchel-Young equality at 50 unique pairs");
  return out;
}

Outcome vertex_enumeration_oracle() {
  Outcome out;
  Rng rng(8);
  std::size_t polytopes = 0;
  auto check = [&](const HPolytope& p, bool last_positive, const std::string& what) {
    const VertexSet verts = enumerate_vertices(p);
    const auto r = mmc::test::lp_closure_check(p, verts, rng, 40, last_positive);
    ++polytopes;
    out.require(r.ok, what + ": " + r.failure);
  };
  for (std::size_t k = 2; k <= 4; ++k) {
    std::vector<std::pair<std::string, LossMatrix>> losses{
        {"zero-one-" + std::to_string(k), zero_one_loss(k)},
        {"random symmetric", mmc::test::random_loss(rng, k, true)},
        {"random asymmetric", mmc::test::random_loss(rng, k, false)}};
    if (k >= 3) losses.emplace_back("chain-" + std::to_string(k), chain_loss(k));
    if (k == 3) losses.emplace_back("squared-3", squared_loss(3));
    if (k == 4) losses.emplace_back("hamming-2x2", corpus_loss("hamming-2x2"));
    for (const auto& [name, l] : losses) {
      for (Output y = 0; y < k; ++y) check(prediction_set(l, y).hrep, false, name + " Delta");
      check(epigraph_polytope(l), true, name + " P");
    }
    for (int s = 0; s < 3; ++s) {
      const SimplexPoint q = rng.simplex_point(k, 4, static_cast<std::size_t>(s) % k);
      check(transport_polytope(q), false, "U(q, q) at " + format_vector(q.values()));
    }
    check(transport_polytope(SimplexPoint::barycenter(k)), false, "U(q, q) at the barycenter");
  }
  out.note(std::to_string(polytopes) + " polytopes (Delta(y), P, U(q, q); k = 2..4) closed under 40 random objectives each");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return {};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome verdict_table() {
  Outcome out;
  using V = Verdict;
  struct Row {
    const char* name;
    V m;
    std::optional<V> rm;  // nullopt where the criterion leaves RM open
  };
  const std::vector<Row> rows{
      {"chain-3", V::kConsistent, V::kConsistent},
      {"chain-4", V::kConsistent, V::kConsistent},
      {"chain-5", V::kConsistent, V::kConsistent},
      {"chain-6", V::kConsistent, V::kConsistent},
      {"zero-one-3", V::kInconsistent, V::kConsistent},
      {"zero-one-4", V::kInconsistent, V::kConsistent},
      {"zero-one-5", V::kInconsistent, V::kConsistent},
      {"zero-one-6", V::kInconsistent, V::kConsistent},
      {"perm-hamming-3", V::kInconsistent, V::kUndetermined},  // RM settled by A1 below
      {"squared-3", V::kInconsistent, V::kUndetermined},
      {"hamming-2x2", V::kUndetermined, std::nullopt},
  };
  for (const Row& row : rows) {
    const CorpusEntry e = *find_corpus_entry(row.name);
    const LossDocument doc = to_document(e);
    const ConsistencyReport r = build_report(e.loss);
    const std::string bytes = dump(report_json(doc, r, {}));
    const std::string name = row.name;

    out.require(r.max_margin.verdict == row.m, name + " Max-Margin verdict " + to_string(r.max_margin.verdict));
    out.require(r.max_min_margin.verdict == V::kConsistent, name + " Max-Min-Margin not consistent");
    std::optional<V> expected_rm = row.rm;
    if (name == "perm-hamming-3") {
      out.require(r.a1.has_value(), "perm-hamming-3 A1 not computed");
      expected_rm = r.a1 && r.a1->holds ? V::kConsistent : V::kUndetermined;
      out.note(std::string("perm-hamming-3 A1 ") + (r.a1 && r.a1->holds ? "holds" : "fails") +
               ", RM " + to_string(r.restricted_max_margin.verdict));
    }
    out.require(!expected_rm || r.restricted_max_margin.verdict == *expected_rm,
                name + " Restricted-Max-Margin verdict " + to_string(r.restricted_max_margin.verdict));
    if (name.rfind("zero-one", 0) == 0) {
      out.require(r.necessary && !r.necessary->holds, name + " necessary condition not failing");
      out.require(r.rm_simple.holds, name + " rm_simple_sufficient false");
    }
    if (name == "squared-3") {
      out.require(!r.distance.holds, "squared-3 reported as a distance");
      out.require(!r.rm_simple.holds, "squared-3 rm_simple_sufficient true");
    }
    if (name == "hamming-2x2") {
      out.require(r.necessary && r.necessary->holds, "hamming-2x2 necessary condition fails");
      out.require(!r.tree, "hamming-2x2 tree-certified");
    }

    const std::string golden = read_file(std::string(MMC_GOLDEN_DIR) + "/" + name + ".json");
    out.require(!golden.empty(), name + " golden file missing");
    if (!golden.empty()) out.require(bytes == golden, name + " report differs from golden file");
    if (e.loss.k() <= 4) {
      const std::string again = dump(report_json(doc, build_report(e.loss), {}));
      out.require(again == bytes, name + " report not byte-identical across runs");
    }
  }
  out.note(std::to_string(rows.size()) + " corpus reports checked against verdicts and golden bytes");
  return out;
}

Outcome embedding_identities() {
  Outcome out;
  std::size_t distances = 0;
  for (const auto& e : corpus()) {
    const LossMatrix& l = e.loss;
    for (Output y = 0; y < l.k(); ++y) {
      out.require(argmax_decode(embedding(l, y)) == y, e.name + " argmax(-L_y) != y");
    }
    if (!is_distance(l).holds) continue;
    ++distances;
    for (Output y = 0; y < l.k(); ++y) {
      for (Output z = 0; z < l.k(); ++z) {
        if (eval_max_margin(l, embedding(l, y), z) != 2 * l(y, z)) {
          out.require(false, e.name + " S_M(-L_y, z) != 2 L(y, z)");
        }
      }
    }
  }
  out.note("S_M(-L_y, z) = 2 L(y, z) on " + std::to_string(distances) +
           " distance entries; argmax(-L_y) = y on " + std::to_string(corpus().size()) + " entries");
  return out;
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0 when the criterion states no runtime
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "binary baseline", 1, binary_baseline},
      {2, "necessary-condition verdicts", 1, necessary_condition_verdicts},
      {3, "tree sufficiency", 30, tree_sufficiency},
      {4, "restricted max-margin sufficiency", 30, restricted_sufficiency},
      {5, "dominant label", 60, dominant_label},
      {6, "Bayes risk ordering", 60, bayes_risk_ordering},
      {7, "conjugate and Fenchel-Young", 60, conjugate_and_fenchel_young},
      {8, "vertex enumeration oracle", 60, vertex_enumeration_oracle},
      {9, "verdict table and golden reports", 0, verdict_table},
      {10, "embedding identities", 5, embedding_identities},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.require(false, "runtime " + std::to_string(secs) + " s over the limit");
    }
    char head[128];
    std::snprintf(head, sizeof head, "criterion %2d %-4s %-36s %7.2f s", c.id,
                  o.pass ? "PASS" : "FAIL", c.title, secs);
    std::cout << head << "\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    failed += o.pass ? 0 : 1;
  }
  std::cout << (10 - failed) << "/10 criteria pass\n";
  return failed == 0 ? 0 : 1;
}
