#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmc/loss.hpp"

namespace mmc {

struct CorpusEntry {
  std::string name;
  std::string description;
  LossMatrix loss;
  std::vector<std::string> labels;
};

/// L(y, y') = 1 for y != y'.
LossMatrix zero_one_loss(std::size_t k);

/// Absolute deviation |y - y'| on the labels 0..k-1.
LossMatrix chain_loss(std::size_t k);

/// (y - y')^2 on the labels 1..k.
LossMatrix squared_loss(std::size_t k);

/// Shortest-path distances of a weighted undirected graph on k nodes,
/// by Floyd-Warshall. Edges are (a, b, w) with 0-based endpoints.
struct WeightedEdge {
  Output a;
  Output b;
  Rational weight;
};
LossMatrix graph_distance_loss(std::size_t k, const std::vector<WeightedEdge>& edges);

/// Normalized Hamming loss between equal-length label tuples.
LossMatrix hamming_loss(const std::vector<std::vector<int>>& tuples);

/// Permutations of 1..m in lexicographic order.
std::vector<std::vector<int>> permutations(int m);

/// Every built-in loss, in listing order.
const std::vector<CorpusEntry>& corpus();

std::optional<CorpusEntry> find_corpus_entry(std::string_view name);

}  // namespace mmc
