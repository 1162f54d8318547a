#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "mmc/corpus.hpp"
#include "mmc/errors.hpp"
#include "mmc/io.hpp"

using namespace mmc;
using mmc::test::make_loss;
using mmc::test::R;
using mmc::test::V;

namespace {

std::string doc_text(const std::string& entries, const std::string& extra = "") {
  return R"({"format": "mmc-loss/1", "name": "t", "k": 2, "entries": )" + entries + extra + "}";
}

std::string parse_error_of(const std::string& text) {
  try {
    parse_loss_document(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("corpus listing") {
  std::vector<std::string> names;
  for (const auto& e : corpus()) names.push_back(e.name);
  CHECK(names == std::vector<std::string>{"zero-one-2", "zero-one-3", "zero-one-4", "zero-one-5",
                                          "zero-one-6", "chain-3", "chain-4", "chain-5",
                                          "chain-6", "star-4", "tree-7", "hamming-2x2",
                                          "perm-hamming-3", "squared-3"});
  for (const auto& e : corpus()) CHECK(e.labels.size() == e.loss.k());
  CHECK_FALSE(find_corpus_entry("zero-one-7"));
}

TEST_CASE("corpus values") {
  CHECK(find_corpus_entry("chain-3")->loss == make_loss({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
  CHECK(find_corpus_entry("squared-3")->loss == make_loss({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}));
  CHECK(find_corpus_entry("star-4")->loss ==
        make_loss({{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}}));

  const LossMatrix h = find_corpus_entry("hamming-2x2")->loss;
  for (Output a = 0; a < 4; ++a) {
    for (Output b = 0; b < 4; ++b) {
      if (a != b) CHECK((h(a, b) == R(1, 2) || h(a, b) == R(1)));
    }
  }
  CHECK(h(0, 3) == R(1));
  CHECK(h(0, 1) == R(1, 2));

  const CorpusEntry perm = *find_corpus_entry("perm-hamming-3");
  CHECK(perm.labels == std::vector<std::string>{"123", "132", "213", "231", "312", "321"});
  // Positions that disagree, over 3.
  for (Output a = 0; a < 6; ++a) {
    for (Output b = 0; b < 6; ++b) {
      int diff = 0;
      for (int i = 0; i < 3; ++i) diff += perm.labels[a][i] != perm.labels[b][i];
      CHECK(perm.loss(a, b) == Rational(diff, 3));
    }
  }

  const LossMatrix tree = find_corpus_entry("tree-7")->loss;
  CHECK(tree(0, 1) == R(1, 2));
  CHECK(tree(3, 6) == R(1) + R(1, 2) + R(2, 3) + R(1, 3));
  CHECK(tree(4, 5) == R(3, 4) + R(1, 2) + R(2, 3) + R(5, 4));
}

TEST_CASE("graph_distance_loss and permutations") {
  const LossMatrix cycle = graph_distance_loss(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  CHECK(cycle(0, 2) == R(2));
  CHECK(cycle(1, 3) == R(2));
  CHECK_THROWS_AS(graph_distance_loss(3, {{0, 1, 1}}), StructuralError);
  CHECK(permutations(3).size() == 6);
  CHECK(permutations(4).size() == 24);
  CHECK(permutations(3).front() == std::vector<int>{1, 2, 3});
}

TEST_CASE("loss document round trip") {
  for (const auto& e : corpus()) {
    const LossDocument doc = to_document(e);
    const std::string text = dump(loss_document_json(doc));
    const LossDocument back = parse_loss_document(text);
    CHECK(back.name == e.name);
    CHECK(back.loss == e.loss);
    CHECK(back.labels == e.labels);
    CHECK(dump(loss_document_json(back)) == text);
  }
}

TEST_CASE("loss document accepts exact literals") {
  const auto doc = parse_loss_document(doc_text(R"([[0, "1/3"], ["0.25", 0]])"));
  CHECK(doc.loss(0, 1) == R(1, 3));
  CHECK(doc.loss(1, 0) == R(1, 4));
  CHECK(doc.labels.empty());
  const auto labelled = parse_loss_document(doc_text("[[0, 1], [1, 0]]", R"(, "labels": ["a", "b"])"));
  CHECK(labelled.labels == std::vector<std::string>{"a", "b"});
}

TEST_CASE("loss document errors") {
  CHECK(parse_error_of(doc_text(R"([[0, "0.1f"], [1, 0]])")).find("entry (1, 2)") !=
        std::string::npos);
  CHECK(parse_error_of(doc_text("[[0, 0.5], [1, 0]]")).find("floating-point") !=
        std::string::npos);
  CHECK(parse_error_of(doc_text("[[0, 1], [1]]")).find("row 2") != std::string::npos);
  CHECK(parse_error_of(doc_text("[[0, true], [1, 0]]")).find("entry (1, 2)") !=
        std::string::npos);
  CHECK_FALSE(parse_error_of(R"({"format": "mmc-loss/2", "name": "t", "k": 2, "entries": []})").empty());
  CHECK_FALSE(parse_error_of(R"({"format": "mmc-loss/1", "k": 2, "entries": []})").empty());
  CHECK_FALSE(parse_error_of(R"({"format": "mmc-loss/1", "name": "t", "k": 1, "entries": [[0]]})").empty());
  CHECK_FALSE(parse_error_of("[1, 2]").empty());
  CHECK_FALSE(parse_error_of(doc_text("[[0, 1], [1, 0]]", R"(, "labels": ["a"])")).empty());

  try {
    parse_loss_document("{\n  \"format\": \"mmc-loss/1\",\n  \"k\": 2 2\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() >= 9);
  }

  CHECK_THROWS_AS(parse_loss_document(doc_text("[[0, -1], [1, 0]]")), ValidationError);
  CHECK_THROWS_AS(parse_loss_document(doc_text("[[1, 1], [1, 0]]")), ValidationError);
  CHECK_THROWS_AS(parse_loss_document(doc_text("[[0, 0], [1, 0]]")), ValidationError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("geometry export") {
  const LossDocument zo = to_document(*find_corpus_entry("zero-one-3"));
  const Json g = geometry_json(zo);
  CHECK(g["format"] == kGeometryFormat);
  REQUIRE(g["regions"].size() == 3);
  for (const auto& region : g["regions"]) {
    CHECK(region["polygon"].size() == 4);
    bool has_bary = false;
    for (const auto& p : region["polygon"]) has_bary = has_bary || p == Json::array({"1/3", "1/3", "1/3"});
    CHECK(has_bary);
  }
  CHECK(g["markers"].size() == 3);
  CHECK(g["lines"].size() == 3);

  const Json sq = geometry_json(to_document(*find_corpus_entry("squared-3")));
  bool touches = false;
  for (const auto& p : sq["regions"][1]["polygon"]) touches = touches || p[1] == "0";
  CHECK(touches);

  const Json chain = geometry_json(to_document(*find_corpus_entry("chain-3")));
  std::set<Json> allowed;
  for (Output y = 0; y < 3; ++y) {
    for (Output z = y; z < 3; ++z) allowed.insert(to_json(SimplexPoint::pair_midpoint(3, y, z).values()));
  }
  for (const auto& region : chain["regions"]) {
    for (const auto& p : region["polygon"]) CHECK(allowed.count(p) == 1);
  }

  CHECK_THROWS_AS(geometry_json(to_document(*find_corpus_entry("chain-4"))), PreconditionError);
}

TEST_CASE("cyclic order") {
  const auto order = cyclic_order({V({0, 0, 1}), V({1, 0, 0}), V({R(1, 2), R(1, 2), 0}), V({0, 1, 0})});
  REQUIRE(order.size() == 4);
  // Consecutive points of a convex polygon: the triangle's edge midpoint sits between its ends.
  std::size_t mid = 0;
  while (order[mid] != V({R(1, 2), R(1, 2), 0})) ++mid;
  const RVector& before = order[(mid + 3) % 4];
  const RVector& after = order[(mid + 1) % 4];
  CHECK(((before == V({1, 0, 0}) && after == V({0, 1, 0})) ||
         (before == V({0, 1, 0}) && after == V({1, 0, 0}))));
}

TEST_CASE("reports are deterministic") {
  const LossDocument doc = to_document(*find_corpus_entry("chain-3"));
  const ConsistencyReport a = build_report(doc.loss);
  const ConsistencyReport b = build_report(doc.loss);
  const std::string ja = dump(report_json(doc, a, {}));
  CHECK(ja == dump(report_json(doc, b, {})));
  const Json j = Json::parse(ja);
  CHECK(j["format"] == kReportFormat);
  CHECK(j["input"]["sha256"] == sha256_hex(dump(loss_document_json(doc))));
  CHECK(j["verdicts"]["max_margin"]["verdict"] == "consistent");
}
