// Command-line front end: analyze, bayes, vertices, plotdata, corpus.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mmc/bayes_risk.hpp"
#include "mmc/consistency.hpp"
#include "mmc/corpus.hpp"
#include "mmc/errors.hpp"
#include "mmc/io.hpp"
#include "mmc/surrogate.hpp"
#include "mmc/version.hpp"

namespace {

using namespace mmc;

struct Common {
  std::string input;
  std::string corpus;
  std::string out;
  std::size_t cap = 10;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
};

void add_source(CLI::App* app, Common& c) {
  auto* in = app->add_option("--input", c.input, "Loss document (JSON)");
  auto* co = app->add_option("--corpus", c.corpus, "Built-in loss name (see `mmc corpus`)");
  in->excludes(co);
  co->excludes(in);
}

void add_config(CLI::App* app, Common& c) {
  app->add_option("--cap", c.cap, "Largest k for vertex enumeration")->capture_default_str();
  app->add_option("--grid", c.grid, "Oracle grid denominator N (0 selects 2k)")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "Seed for randomized spot checks")->capture_default_str();
}

LossDocument load(const Common& c) {
  if (!c.corpus.empty()) {
    const auto entry = find_corpus_entry(c.corpus);
    if (!entry) throw Error("unknown corpus entry \"" + c.corpus + "\"; run `mmc corpus`");
    return to_document(*entry);
  }
  if (c.input.empty()) throw Error("one of --input or --corpus is required");
  std::ifstream f(c.input, std::ios::binary);
  if (!f) throw Error("cannot open " + c.input);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_loss_document(ss.str());
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error("cannot write " + c.out);
  f << text;
}

RVector parse_vector(const std::string& text) {
  RVector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    v.push_back(parse_rational(item));
  }
  return v;
}

std::string lbl(Output y) { return std::to_string(y + 1); }

std::string index_set(const std::vector<Output>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + lbl(s[i]);
  return out + "}";
}

std::string status_word(bool b) { return b ? "holds" : "fails"; }

void print_plan(std::ostream& os, const RMatrix& plan) {
  for (std::size_t r = 0; r < plan.rows(); ++r) os << "  " << format_vector(plan.row(r)) << "\n";
}

// ---------------------------------------------------------------- analyze

std::string analysis_table(const LossDocument& doc, const ConsistencyReport& r) {
  std::ostringstream os;
  os << "loss: " << doc.name << " (k = " << r.k << ")\n";
  os << "symmetric: " << (r.symmetric ? "yes" : "no")
     << "   distance: " << (r.distance.holds ? "yes" : "no") << "\n";
  if (r.necessary) {
    const auto& nc = *r.necessary;
    os << "necessary condition: " << status_word(nc.holds);
    if (nc.vacuous) os << " (vacuous, k <= 2)";
    if (nc.violating_triple) {
      const auto& t = *nc.violating_triple;
      os << " (no centre for triple (" << lbl(t[0]) << ", " << lbl(t[1]) << ", " << lbl(t[2])
         << "))";
    } else if (!nc.is_distance) {
      os << " (not a distance)";
    }
    os << "\n";
  } else {
    os << "necessary condition: not applicable (asymmetric loss)\n";
  }
  if (r.tree) {
    os << "tree certificate:";
    for (const auto& e : r.tree->edges) {
      os << " " << lbl(e.a) << "-" << lbl(e.b) << ":" << e.weight;
    }
    os << "\n";
  } else {
    os << "tree certificate: not certified\n";
  }
  os << "min q_y over Delta(y): " << format_vector(r.rm_simple.minima) << " ("
     << (r.rm_simple.holds ? "all positive" : "not all positive") << ")\n";
  if (r.a1) {
    os << "A1: " << status_word(r.a1->holds) << " (" << r.a1->vertices_checked
       << " vertices checked)";
    if (r.a1->violation) {
      os << " violated at " << format_vector(r.a1->violation->vertex.values()) << " for y = "
         << lbl(r.a1->violation->y);
    }
    os << "\n";
  } else {
    os << "A1: undetermined (" << r.a1_error << ")\n";
  }
  if (r.dominant_label.applicable) {
    os << "dominant label identity: " << r.dominant_label.verified << "/"
       << r.dominant_label.points << " grid points verified\n";
  } else {
    os << "dominant label identity: not applicable (not a distance)\n";
  }
  os << "embedding identities:\n";
  for (const auto& c : r.embedding) {
    os << "  " << std::left << std::setw(34) << c.identity << to_string(c.status());
    if (!c.counterexample.empty()) os << "  [" << c.counterexample << "]";
    os << "\n";
  }
  os << "oracle: N = " << r.grid.denominator << ", " << r.grid.records.size() << " points, "
     << r.grid.discrepancies.size() << " discrepancies\n";
  if (r.fenchel_young.applicable) {
    os << "Fenchel-Young: inequality " << status_word(r.fenchel_young.inequality_holds)
       << ", equality " << status_word(r.fenchel_young.equality_holds) << " at "
       << r.fenchel_young.equality_checked << " unique subgradients\n";
  }
  os << "\n";
  const std::pair<const char*, const SurrogateVerdict*> rows[] = {
      {"max-margin", &r.max_margin},
      {"restricted-max-margin", &r.restricted_max_margin},
      {"max-min-margin", &r.max_min_margin}};
  os << std::left << std::setw(23) << "surrogate" << std::setw(14) << "verdict"
     << "justification\n";
  for (const auto& [name, v] : rows) {
    for (std::size_t i = 0; i < v->justification.size(); ++i) {
      os << std::setw(23) << (i ? "" : name) << std::setw(14) << (i ? "" : to_string(v->verdict))
         << v->justification[i] << "\n";
    }
  }
  return os.str();
}

void cmd_analyze(const Common& c) {
  const LossDocument doc = load(c);
  ReportOptions opts;
  opts.limits.max_outputs = c.cap;
  opts.grid = c.grid;
  opts.seed = c.seed;
  const ConsistencyReport r = build_report(doc.loss, opts);
  std::cout << analysis_table(doc, r);
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw Error("cannot write " + c.out);
    f << dump(report_json(doc, r, {c.cap, c.grid, c.seed}));
  }
}

// ------------------------------------------------------------------ bayes

void check(bool ok, const char* what) {
  if (!ok) throw Error(std::string("witness failed re-verification: ") + what);
}

void cmd_bayes(const Common& c, const std::string& which, const std::string& qtext,
               const std::string& vtext) {
  const LossDocument doc = load(c);
  const LossMatrix& loss = doc.loss;
  std::ostringstream os;

  if (which == "conj") {
    if (vtext.empty()) throw Error("--v is required for which = conj");
    const RVector v = parse_vector(vtext);
    if (v.size() != loss.k()) throw ValidationError("v must have k entries");
    const PairConjugate pc = conjugate_neg_HM(loss, v);
    check(pc.value == conjugate_neg_HM_lp(loss, v), "pair formula disagrees with the LP");
    os << "(-H_M)*(v) = " << pc.value << "\n";
    os << "maximizing pairs:";
    for (const auto& [y, z] : pc.maximizers) os << " (" << lbl(y) << ", " << lbl(z) << ")";
    os << "\n";
    emit(c, os.str());
    return;
  }

  if (qtext.empty()) throw Error("--q is required");
  RVector qv = parse_vector(qtext);
  if (qv.size() != loss.k()) throw ValidationError("q must have k entries");
  const SimplexPoint q(std::move(qv));

  if (which == "L" || which == "MM") {
    const RiskValue r = which == "L" ? bayes_risk_L(loss, q) : bayes_risk_MM(loss, q);
    const Output y = *r.output;
    check(dot(loss.row(y), q.values()) == r.value, "value of the minimizing output");
    for (Output z = 0; z < loss.k(); ++z) {
      check(dot(loss.row(z), q.values()) >= r.value, "minimality over outputs");
    }
    if (which == "MM") check(verify_mm_minimizer(loss, q, y), "S_MM risk at -L_y");
    os << "H_" << which << "(q) = " << r.value << "\n";
    os << (which == "L" ? "minimizing output: " : "minimizing score vector: -L_") << lbl(y)
       << "\n";
  } else if (which == "M" || which == "RM") {
    const RiskValue r = which == "M" ? bayes_risk_M(loss, q) : bayes_risk_RM(loss, q);
    check(in_transport_polytope(*r.plan, q), "plan marginals");
    check(frobenius(loss.matrix(), *r.plan) == r.value, "plan value");
    if (which == "RM") check(in_restriction_cone(loss, *r.plan), "restriction cone");
    if (which == "M" && loss.is_symmetric()) {
      check(bayes_risk_M_dual(loss, q).value == r.value, "zero duality gap");
    }
    os << "H_" << which << "(q) = " << r.value << "\n";
    os << "plan (rows indexed by the true label):\n";
    print_plan(os, *r.plan);
  } else if (which == "M-dual") {
    const RiskValue r = bayes_risk_M_dual(loss, q);
    const RVector& a = *r.dual;
    check(dot(a, q.values()) == r.value, "dual objective");
    for (Output y = 0; y < loss.k(); ++y) {
      for (Output z = y; z < loss.k(); ++z) {
        check(a[y] + a[z] >= Rational(2) * loss(y, z), "dual feasibility");
      }
    }
    os << "H_M(q) = " << r.value << " (dual)\n";
    os << "multipliers a: " << format_vector(a) << "\n";
  } else {
    throw Error("--which must be one of L, M, RM, MM, M-dual, conj");
  }
  emit(c, os.str());
}

// --------------------------------------------------------------- vertices

void cmd_vertices(const Common& c, std::size_t pred_set, bool epigraph,
                  const std::string& transport) {
  const LossDocument doc = load(c);
  const LossMatrix& loss = doc.loss;
  const int targets = (pred_set != 0) + epigraph + !transport.empty();
  if (targets != 1) throw Error("choose exactly one of --pred-set, --epigraph, --transport");

  HPolytope p;
  std::string title;
  if (pred_set != 0) {
    if (pred_set > loss.k()) throw Error("--pred-set must be between 1 and k");
    p = prediction_set(loss, pred_set - 1).hrep;
    title = "Delta(" + std::to_string(pred_set) + ")";
  } else if (epigraph) {
    p = epigraph_polytope(loss);
    title = "epigraph polytope P (coordinates q, u)";
  } else {
    RVector qv = parse_vector(transport);
    if (qv.size() != loss.k()) throw ValidationError("q must have k entries");
    p = transport_polytope(SimplexPoint(std::move(qv)));
    title = "U(q, q) (row-major plan)";
  }
  const VertexSet vs = enumerate_vertices(p, {c.cap});

  std::ostringstream os;
  os << title << ": " << vs.size() << " vertices\n";
  for (const auto& x : vs.vertices) {
    const ActiveSets act = active_sets(p, x);
    os << format_vector(x);
    if (transport.empty()) {
      os << "  S = " << index_set(act.loss_rows) << "  T = " << index_set(act.zero_coordinates);
    } else {
      const std::size_t k = loss.k();
      os << "  zero entries = {";
      for (std::size_t i = 0; i < act.zero_coordinates.size(); ++i) {
        const auto e = act.zero_coordinates[i];
        os << (i ? ", " : "") << "(" << lbl(e / k) << "," << lbl(e % k) << ")";
      }
      os << "}";
    }
    os << "\n";
  }
  emit(c, os.str());
}

// ----------------------------------------------------------------- corpus

void cmd_corpus(const Common& c) {
  if (!c.corpus.empty()) {
    const auto entry = find_corpus_entry(c.corpus);
    if (!entry) throw Error("unknown corpus entry \"" + c.corpus + "\"");
    emit(c, dump(loss_document_json(to_document(*entry))));
    return;
  }
  std::ostringstream os;
  for (const auto& e : corpus()) {
    os << e.name << "  (k = " << e.loss.k() << ")  " << e.description << "\n";
    os << "  labels: ";
    for (std::size_t i = 0; i < e.labels.size(); ++i) os << (i ? " " : "") << e.labels[i];
    os << "\n";
    for (Output y = 0; y < e.loss.k(); ++y) os << "  " << format_vector(e.loss.row(y)) << "\n";
  }
  emit(c, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact consistency analysis of max-margin surrogate losses"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common common;
  std::string which = "L";
  std::string qtext;
  std::string vtext;
  std::size_t pred_set = 0;
  bool epigraph = false;
  std::string transport;

  auto* analyze = app.add_subcommand("analyze", "Full consistency report for a loss");
  add_source(analyze, common);
  add_config(analyze, common);
  analyze->add_option("--out", common.out, "Write the JSON report here");

  auto* bayes = app.add_subcommand("bayes", "Bayes risk value with a verified witness");
  add_source(bayes, common);
  bayes->add_option("--which", which, "L, M, RM, MM, M-dual or conj")
      ->check(CLI::IsMember({"L", "M", "RM", "MM", "M-dual", "conj"}))
      ->capture_default_str();
  bayes->add_option("--q", qtext, "Distribution q, comma-separated rationals");
  bayes->add_option("--v", vtext, "Score vector v for conj, comma-separated rationals");
  bayes->add_option("--out", common.out, "Write the output here");

  auto* vertices = app.add_subcommand("vertices", "Exact vertices with active sets");
  add_source(vertices, common);
  vertices->add_option("--pred-set", pred_set, "Prediction set Delta(y), 1-based y");
  vertices->add_flag("--epigraph", epigraph, "Epigraph polytope P of H_L");
  vertices->add_option("--transport", transport, "Transportation polytope U(q, q)");
  vertices->add_option("--cap", common.cap, "Largest k for vertex enumeration")
      ->capture_default_str();
  vertices->add_option("--out", common.out, "Write the listing here");

  auto* plotdata = app.add_subcommand("plotdata", "Barycentric geometry of the prediction sets (k = 3)");
  add_source(plotdata, common);
  plotdata->add_option("--out", common.out, "Write the geometry document here");

  auto* corpus_cmd = app.add_subcommand("corpus", "List built-in losses, or export one");
  corpus_cmd->add_option("--corpus", common.corpus, "Export this entry as a loss document");
  corpus_cmd->add_option("--out", common.out, "Write the output here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      cmd_analyze(common);
    } else if (*bayes) {
      cmd_bayes(common, which, qtext, vtext);
    } else if (*vertices) {
      cmd_vertices(common, pred_set, epigraph, transport);
    } else if (*plotdata) {
      emit(common, dump(geometry_json(load(common), {common.cap})));
    } else if (*corpus_cmd) {
      cmd_corpus(common);
    }
  } catch (const ParseError& e) {
    std::cerr << "mmc: parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "mmc: validation error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "mmc: resource limit: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "mmc: unsupported input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mmc: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
