#pragma once

#include <cstdint>
#include <random>

#include "mmc/loss.hpp"

namespace mmc {

/// Seeded generator for reproducible spot checks. Draws are mapped without
/// std distributions so the sequence is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform-ish integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

  /// num / den with num in [lo * den, hi * den] and den in [1, max_den].
  Rational rational(long lo, long hi, long max_den);

  /// Random point of the simplex with integer weights in [0, max_weight],
  /// normalized; `zeros` forces that many random coordinates to zero.
  SimplexPoint simplex_point(std::size_t k, long max_weight, std::size_t zeros = 0);

  RVector vector(std::size_t n, long lo, long hi, long max_den);

 private:
  std::mt19937_64 gen_;
};

}  // namespace mmc
