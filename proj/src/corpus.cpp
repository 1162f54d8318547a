#include "mmc/corpus.hpp"

#include <algorithm>
#include <numeric>

#include "mmc/errors.hpp"

namespace mmc {

LossMatrix zero_one_loss(std::size_t k) {
  RMatrix m(k, k);
  for (Output a = 0; a < k; ++a) {
    for (Output b = 0; b < k; ++b) m(a, b) = a == b ? 0 : 1;
  }
  return LossMatrix(std::move(m));
}

LossMatrix chain_loss(std::size_t k) {
  RMatrix m(k, k);
  for (Output a = 0; a < k; ++a) {
    for (Output b = 0; b < k; ++b) m(a, b) = a > b ? a - b : b - a;
  }
  return LossMatrix(std::move(m));
}

LossMatrix squared_loss(std::size_t k) {
  RMatrix m(k, k);
  for (Output a = 0; a < k; ++a) {
    for (Output b = 0; b < k; ++b) m(a, b) = (a > b ? a - b : b - a) * (a > b ? a - b : b - a);
  }
  return LossMatrix(std::move(m));
}

LossMatrix graph_distance_loss(std::size_t k, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<std::optional<Rational>>> d(k, std::vector<std::optional<Rational>>(k));
  for (Output a = 0; a < k; ++a) d[a][a] = Rational(0);
  for (const auto& e : edges) {
    if (e.a >= k || e.b >= k) throw StructuralError("edge endpoint out of range");
    if (!d[e.a][e.b] || e.weight < *d[e.a][e.b]) d[e.a][e.b] = d[e.b][e.a] = e.weight;
  }
  for (Output m = 0; m < k; ++m) {
    for (Output a = 0; a < k; ++a) {
      if (!d[a][m]) continue;
      for (Output b = 0; b < k; ++b) {
        if (!d[m][b]) continue;
        Rational via = *d[a][m] + *d[m][b];
        if (!d[a][b] || via < *d[a][b]) d[a][b] = std::move(via);
      }
    }
  }
  RMatrix out(k, k);
  for (Output a = 0; a < k; ++a) {
    for (Output b = 0; b < k; ++b) {
      if (!d[a][b]) throw StructuralError("graph is not connected");
      out(a, b) = *d[a][b];
    }
  }
  return LossMatrix(std::move(out));
}

LossMatrix hamming_loss(const std::vector<std::vector<int>>& tuples) {
  const std::size_t k = tuples.size();
  if (k == 0) throw StructuralError("hamming_loss needs at least one tuple");
  const auto m = static_cast<long>(tuples.front().size());
  RMatrix out(k, k);
  for (Output a = 0; a < k; ++a) {
    for (Output b = 0; b < k; ++b) {
      long diff = 0;
      for (long i = 0; i < m; ++i) diff += tuples[a][i] != tuples[b][i];
      out(a, b) = Rational(diff, m);
    }
  }
  return LossMatrix(std::move(out));
}

std::vector<std::vector<int>> permutations(int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace {

std::vector<std::string> numbered(std::size_t k, std::size_t first) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::to_string(first + i));
  return out;
}

std::string join_tuple(const std::vector<int>& t) {
  std::string s;
  for (int x : t) s += std::to_string(x);
  return s;
}

std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> out;
  for (std::size_t k = 2; k <= 6; ++k) {
    out.push_back({"zero-one-" + std::to_string(k), "0-1 loss on " + std::to_string(k) + " labels",
                   zero_one_loss(k), numbered(k, 1)});
  }
  for (std::size_t k = 3; k <= 6; ++k) {
    out.push_back({"chain-" + std::to_string(k),
                   "absolute deviation |y - y'| on labels 0.." + std::to_string(k - 1),
                   chain_loss(k), numbered(k, 0)});
  }
  out.push_back({"star-4", "star tree: centre 1, leaves 2..4, unit edges",
                 graph_distance_loss(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}), numbered(4, 1)});
  out.push_back({"tree-7",
                 "bifurcating tree 1-(2,3), 2-(4,5), 3-(6,7) with rational edge weights",
                 graph_distance_loss(7, {{0, 1, Rational(1, 2)},
                                         {0, 2, Rational(2, 3)},
                                         {1, 3, 1},
                                         {1, 4, Rational(3, 4)},
                                         {2, 5, Rational(5, 4)},
                                         {2, 6, Rational(1, 3)}}),
                 numbered(7, 1)});
  {
    const std::vector<std::vector<int>> pairs{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    std::vector<std::string> labels;
    for (const auto& t : pairs) labels.push_back(join_tuple(t));
    out.push_back({"hamming-2x2", "Hamming loss on two binary coordinates (4-cycle, weight 1/2)",
                   hamming_loss(pairs), labels});
  }
  {
    const auto perms = permutations(3);
    std::vector<std::string> labels;
    for (const auto& p : perms) labels.push_back(join_tuple(p));
    out.push_back({"perm-hamming-3", "Hamming loss on permutations of size 3",
                   hamming_loss(perms), labels});
  }
  out.push_back({"squared-3", "squared discrete loss (y - y')^2 on labels 1..3", squared_loss(3),
                 numbered(3, 1)});
  return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build_corpus();
  return entries;
}

std::optional<CorpusEntry> find_corpus_entry(std::string_view name) {
  for (const auto& e : corpus()) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

}  // namespace mmc
