#pragma once

#include <initializer_list>
#include <vector>

#include "mmc/loss.hpp"
#include "mmc/random.hpp"

namespace mmc::test {

inline Rational R(long num, long den = 1) { return Rational(num, den); }

inline LossMatrix make_loss(std::initializer_list<std::initializer_list<Rational>> rows) {
  return LossMatrix(RMatrix(rows));
}

inline SimplexPoint Q(std::initializer_list<Rational> q) { return SimplexPoint(RVector(q)); }

inline RVector V(std::initializer_list<Rational> v) { return RVector(v); }

/// Random loss with entries p/den, p in [1, max_num]; symmetric on request.
inline LossMatrix random_loss(Rng& rng, std::size_t k, bool symmetric, long max_num = 6,
                              long den = 2) {
  RMatrix m(k, k);
  for (Output a = 0; a < k; ++a) {
    for (Output b = 0; b < k; ++b) {
      if (a == b) continue;
      if (symmetric && b < a) {
        m(a, b) = m(b, a);
      } else {
        m(a, b) = Rational(rng.between(1, max_num), den);
      }
    }
  }
  return LossMatrix(std::move(m));
}

/// Rejection-sampled random distance (symmetric, triangle inequality).
inline LossMatrix random_distance(Rng& rng, std::size_t k) {
  for (;;) {
    const LossMatrix l = random_loss(rng, k, true, 4, 2);
    bool ok = true;
    for (Output a = 0; a < k && ok; ++a) {
      for (Output b = 0; b < k && ok; ++b) {
        for (Output z = 0; z < k; ++z) {
          if (l(a, b) > l(a, z) + l(z, b)) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) return l;
  }
}

}  // namespace mmc::test
