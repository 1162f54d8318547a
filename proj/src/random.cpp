#include "mmc/random.hpp"

#include <algorithm>
#include <numeric>

namespace mmc {

Rational Rng::rational(long lo, long hi, long max_den) {
  const long den = between(1, max_den);
  return Rational(between(lo * den, hi * den), den);
}

SimplexPoint Rng::simplex_point(std::size_t k, long max_weight, std::size_t zeros) {
  std::vector<long> w(k);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = k; i > 1; --i) std::swap(order[i - 1], order[below(i)]);
  const std::size_t zeroed = std::min(zeros, k - 1);
  long total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    w[order[i]] = i < zeroed ? 0 : between(0, max_weight);
    total += w[order[i]];
  }
  if (total == 0) {
    w[order[k - 1]] = 1;
    total = 1;
  }
  RVector q;
  for (long x : w) q.emplace_back(x, total);
  return SimplexPoint(std::move(q));
}

RVector Rng::vector(std::size_t n, long lo, long hi, long max_den) {
  RVector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rational(lo, hi, max_den));
  return v;
}

}  // namespace mmc
