#pragma once

#include <random>
#include <string>

#include "twistlab/rings/linalg.hpp"

namespace testsupport {

using namespace twistlab;

inline LaurentPoly P(const std::string& s) { return parse_laurent(s); }

inline LaurentPoly random_poly(std::mt19937_64& rng, int low, int span, long bound,
                               const RingSpec& r = RingSpec::integers()) {
  std::uniform_int_distribution<long> d(-bound, bound);
  std::vector<Scalar> c;
  for (int i = 0; i <= span; ++i) c.push_back(Scalar::from_integer(r, d(rng)));
  return LaurentPoly(r, low, std::move(c));
}

// Leibniz expansion; exponential, only for tiny matrices.
template <class T>
T leibniz_det(const Matrix<T>& m, const T& zero, const T& one) {
  std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  T total = zero;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    T term = one;
    for (std::size_t i = 0; i < n; ++i) term = term * m(i, perm[i]);
    if (inv % 2) total = total - term;
    else total = total + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace testsupport
