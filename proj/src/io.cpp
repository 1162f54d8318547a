#include "mmc/io.hpp"

#include <algorithm>
#include <cstdio>

#include <openssl/evp.h>

#include "mmc/errors.hpp"
#include "mmc/version.hpp"

namespace mmc {

namespace {

std::string position(std::size_t row, std::size_t col) {
  return "(" + std::to_string(row + 1) + ", " + std::to_string(col + 1) + ")";
}

Rational parse_entry(const Json& e, std::size_t row, std::size_t col) {
  if (e.is_number_integer()) {
    if (e.is_number_unsigned()) return Rational(e.get<std::uint64_t>());
    return Rational(e.get<std::int64_t>());
  }
  if (e.is_number_float()) {
    throw ParseError("entry " + position(row, col) +
                     ": binary floating-point number rejected; write it as a string such as "
                     "\"1/10\" or \"0.1\"");
  }
  if (!e.is_string()) {
    throw ParseError("entry " + position(row, col) + ": expected an integer or a string");
  }
  try {
    return parse_rational(e.get<std::string>());
  } catch (const ParseError& err) {
    throw ParseError("entry " + position(row, col) + ": " + err.what());
  }
}

const Json& member(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

Json output_json(Output y) { return y + 1; }

Json triple_json(const Triple& t) { return Json::array({t[0] + 1, t[1] + 1, t[2] + 1}); }

Json verdict_json(const SurrogateVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["justification"] = v.justification;
  return j;
}

}  // namespace

Json to_json(const Rational& x) { return x.str(); }

Json to_json(std::span<const Rational> v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

LossDocument parse_loss_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < at; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " +
                         std::to_string(column),
                     line, column);
  }
  if (!j.is_object()) throw ParseError("loss document must be a JSON object");
  const Json& format = member(j, "format");
  if (!format.is_string() || format.get<std::string>() != kLossFormat) {
    throw ParseError(std::string("unsupported format; expected \"") + kLossFormat + "\"");
  }
  const Json& name = member(j, "name");
  if (!name.is_string()) throw ParseError("\"name\" must be a string");
  const Json& kj = member(j, "k");
  if (!kj.is_number_integer() || kj.get<std::int64_t>() < 2) {
    throw ParseError("\"k\" must be an integer >= 2");
  }
  const auto k = kj.get<std::size_t>();
  const Json& entries = member(j, "entries");
  if (!entries.is_array() || entries.size() != k) {
    throw ParseError("\"entries\" must be an array of k rows");
  }
  RMatrix m(k, k);
  for (std::size_t r = 0; r < k; ++r) {
    const Json& row = entries[r];
    if (!row.is_array() || row.size() != k) {
      throw ParseError("row " + std::to_string(r + 1) + " must have k entries");
    }
    for (std::size_t c = 0; c < k; ++c) m(r, c) = parse_entry(row[c], r, c);
  }

  LossDocument doc{name.get<std::string>(), LossMatrix(std::move(m)), {}};
  if (const auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array() || it->size() != k) throw ParseError("\"labels\" must have k strings");
    for (const auto& l : *it) {
      if (!l.is_string()) throw ParseError("\"labels\" must have k strings");
      doc.labels.push_back(l.get<std::string>());
    }
  }
  return doc;
}

Json loss_document_json(const LossDocument& doc) {
  Json j;
  j["format"] = kLossFormat;
  j["name"] = doc.name;
  j["k"] = doc.loss.k();
  Json rows = Json::array();
  for (Output y = 0; y < doc.loss.k(); ++y) rows.push_back(to_json(doc.loss.row(y)));
  j["entries"] = std::move(rows);
  if (!doc.labels.empty()) j["labels"] = doc.labels;
  return j;
}

LossDocument to_document(const CorpusEntry& entry) {
  return {entry.name, entry.loss, entry.labels};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

Json report_json(const LossDocument& doc, const ConsistencyReport& r, const ReportConfig& config) {
  Json j;
  j["format"] = kReportFormat;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["input"] = {{"name", doc.name},
                {"k", r.k},
                {"sha256", sha256_hex(dump(loss_document_json(doc)))}};
  j["config"] = {{"cap", config.cap},
                 {"grid", r.grid.denominator},
                 {"seed", config.seed}};

  Json distance;
  distance["holds"] = r.distance.holds;
  distance["symmetric"] = r.symmetric;
  if (r.distance.asymmetric_pair) {
    distance["asymmetric_pair"] = {output_json(r.distance.asymmetric_pair->first),
                                   output_json(r.distance.asymmetric_pair->second)};
  }
  if (r.distance.violating_triple) {
    distance["violating_triple"] = triple_json(*r.distance.violating_triple);
  }
  j["distance"] = std::move(distance);

  Json nc;
  nc["applicable"] = r.necessary.has_value();
  if (r.necessary) {
    nc["holds"] = r.necessary->holds;
    nc["is_distance"] = r.necessary->is_distance;
    nc["triples_hold"] = r.necessary->triples_hold;
    nc["vacuous"] = r.necessary->vacuous;
    if (r.necessary->violating_triple) {
      nc["violating_triple"] = triple_json(*r.necessary->violating_triple);
      Json failures = Json::array();
      for (const auto& f : r.necessary->failures) {
        failures.push_back({{"z", output_json(f.z)}, {"identity", f.identity}});
      }
      nc["failures"] = std::move(failures);
    }
  }
  j["necessary_condition"] = std::move(nc);

  Json tree;
  tree["certified"] = r.tree.has_value();
  if (r.tree) {
    Json edges = Json::array();
    for (const auto& e : r.tree->edges) {
      edges.push_back(Json::array({output_json(e.a), output_json(e.b), to_json(e.weight)}));
    }
    tree["edges"] = std::move(edges);
  }
  j["tree"] = std::move(tree);

  Json simple;
  simple["holds"] = r.rm_simple.holds;
  simple["minima"] = to_json(r.rm_simple.minima);
  Json witnesses = Json::array();
  for (const auto& w : r.rm_simple.witnesses) witnesses.push_back(to_json(w.values()));
  simple["witnesses"] = std::move(witnesses);
  j["rm_simple_sufficient"] = std::move(simple);

  Json a1;
  if (r.a1) {
    a1["status"] = r.a1->holds ? "holds" : "fails";
    a1["vertices_checked"] = r.a1->vertices_checked;
    if (r.a1->violation) {
      a1["violation"] = {{"vertex", to_json(r.a1->violation->vertex.values())},
                         {"from_set", output_json(r.a1->violation->from_set)},
                         {"y", output_json(r.a1->violation->y)}};
    }
  } else {
    a1["status"] = "undetermined";
    a1["error"] = r.a1_error;
  }
  j["a1"] = std::move(a1);

  Json dl;
  dl["applicable"] = r.dominant_label.applicable;
  dl["points"] = r.dominant_label.points;
  dl["verified"] = r.dominant_label.verified;
  if (r.dominant_label.first_failure) {
    dl["first_failure"] = to_json(r.dominant_label.first_failure->values());
  }
  j["dominant_label"] = std::move(dl);

  Json embedding = Json::array();
  for (const auto& c : r.embedding) {
    Json e;
    e["identity"] = c.identity;
    e["status"] = to_string(c.status());
    e["holds"] = c.holds;
    if (!c.counterexample.empty()) e["counterexample"] = c.counterexample;
    embedding.push_back(std::move(e));
  }
  j["embedding"] = std::move(embedding);

  Json oracle;
  std::size_t hm_equal = 0;
  std::size_t hrm_equal = 0;
  for (const auto& rec : r.grid.records) {
    hm_equal += rec.h_m == Rational(2) * rec.h_l;
    hrm_equal += rec.h_rm == rec.h_l;
  }
  oracle["denominator"] = r.grid.denominator;
  oracle["points"] = r.grid.records.size();
  oracle["vertex_checked_points"] = r.grid.vertex_checked_points;
  oracle["h_m_equals_2h_l"] = hm_equal;
  oracle["h_rm_equals_h_l"] = hrm_equal;
  Json disc = Json::array();
  for (const auto& d : r.grid.discrepancies) {
    disc.push_back({{"q", to_json(d.q.values())}, {"what", d.what}});
  }
  oracle["discrepancies"] = std::move(disc);
  j["oracle"] = std::move(oracle);

  Json fy;
  fy["applicable"] = r.fenchel_young.applicable;
  if (r.fenchel_young.applicable) {
    fy["vectors"] = r.fenchel_young.vectors;
    fy["inequality_holds"] = r.fenchel_young.inequality_holds;
    fy["equality_checked"] = r.fenchel_young.equality_checked;
    fy["equality_holds"] = r.fenchel_young.equality_holds;
  }
  j["fenchel_young"] = std::move(fy);

  j["verdicts"] = {{"max_margin", verdict_json(r.max_margin)},
                   {"restricted_max_margin", verdict_json(r.restricted_max_margin)},
                   {"max_min_margin", verdict_json(r.max_min_margin)}};
  return j;
}

std::vector<RVector> cyclic_order(std::vector<RVector> points) {
  std::sort(points.begin(), points.end(), lex_less);
  if (points.size() <= 2) return points;
  Rational cx;
  Rational cy;
  for (const auto& p : points) {
    cx += p.at(0);
    cy += p.at(1);
  }
  const Rational n(static_cast<long>(points.size()));
  cx /= n;
  cy /= n;
  // Exact angular sort of (q_1, q_2) - centroid, counterclockwise from the
  // direction of the lexicographically least point.
  const Rational rx = points.front()[0] - cx;
  const Rational ry = points.front()[1] - cy;
  auto cross = [](const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by) {
    return ax * by - ay * bx;
  };
  auto half = [&](const RVector& p) {
    const Rational x = p[0] - cx;
    const Rational y = p[1] - cy;
    const Rational c = cross(rx, ry, x, y);
    if (c.sign() > 0) return 1;
    if (c.sign() == 0 && (rx * x + ry * y).sign() > 0) return 0;
    if (c.sign() == 0) return 2;
    return 3;
  };
  std::stable_sort(points.begin(), points.end(), [&](const RVector& a, const RVector& b) {
    const int ha = half(a);
    const int hb = half(b);
    if (ha != hb) return ha < hb;
    return cross(a[0] - cx, a[1] - cy, b[0] - cx, b[1] - cy).sign() > 0;
  });
  return points;
}

Json geometry_json(const LossDocument& doc, const EnumerationLimits& limits) {
  const LossMatrix& loss = doc.loss;
  if (loss.k() != 3) throw PreconditionError("plot data is only supported for k = 3");
  Json j;
  j["format"] = kGeometryFormat;
  j["name"] = doc.name;
  j["coordinates"] = "barycentric (q_1, q_2, q_3)";
  Json regions = Json::array();
  for (Output y = 0; y < 3; ++y) {
    const VertexSet vs = enumerate_vertices(prediction_set(loss, y).hrep, limits);
    Json polygon = Json::array();
    for (const auto& p : cyclic_order(vs.vertices)) polygon.push_back(to_json(p));
    Json region;
    region["y"] = output_json(y);
    if (!doc.labels.empty()) region["label"] = doc.labels[y];
    region["polygon"] = std::move(polygon);
    regions.push_back(std::move(region));
  }
  j["regions"] = std::move(regions);

  Json markers = Json::array();
  for (Output a = 0; a < 3; ++a) {
    for (Output b = a + 1; b < 3; ++b) {
      markers.push_back({{"name", "(e_" + std::to_string(a + 1) + " + e_" +
                                      std::to_string(b + 1) + ")/2"},
                         {"point", to_json(SimplexPoint::pair_midpoint(3, a, b).values())}});
    }
  }
  j["markers"] = std::move(markers);

  Json lines = Json::array();
  for (Output y = 0; y < 3; ++y) {
    const Output a = y == 0 ? 1 : 0;
    const Output b = y == 2 ? 1 : 2;
    lines.push_back({{"name", "q_" + std::to_string(y + 1) + " = 1/2"},
                     {"from", to_json(SimplexPoint::pair_midpoint(3, y, a).values())},
                     {"to", to_json(SimplexPoint::pair_midpoint(3, y, b).values())}});
  }
  j["lines"] = std::move(lines);
  return j;
}

}  // namespace mmc
