// tests/oracles.hpp
//
// Independent reference implementations used only to check the library:
// minimum edit cost by blind recursive enumeration of all edit scripts.
// No DP table, no backtrace, nothing shared with the code under test.

#ifndef MIXFUSE_TESTS_ORACLES_HPP_
#define MIXFUSE_TESTS_ORACLES_HPP_

#include <vector>

#include "mixfuse/rational.hpp"

namespace oracles {

template <class A, class B, class DelF, class InsF, class SubF>
mixfuse::Rational enumerate_min_cost(const std::vector<A>& a,
                                     const std::vector<B>& b, std::size_t i,
                                     std::size_t j, const DelF& del,
                                     const InsF& ins, const SubF& sub) {
  if (i == a.size() && j == b.size()) return mixfuse::Rational(0);
  bool first = true;
  mixfuse::Rational best;
  if (i < a.size()) {
    mixfuse::Rational c =
        del(a[i]) + enumerate_min_cost(a, b, i + 1, j, del, ins, sub);
    best = c;
    first = false;
  }
  if (j < b.size()) {
    mixfuse::Rational c =
        ins(b[j]) + enumerate_min_cost(a, b, i, j + 1, del, ins, sub);
    if (first || c < best) {
      best = c;
      first = false;
    }
  }
  if (i < a.size() && j < b.size()) {
    mixfuse::Rational c =
        sub(a[i], b[j]) + enumerate_min_cost(a, b, i + 1, j + 1, del, ins, sub);
    if (first || c < best) best = c;
  }
  return best;
}

template <class T, class DelF, class InsF, class SubF>
mixfuse::Rational brute_force_min_cost(const std::vector<T>& a,
                                       const std::vector<T>& b, const DelF& del,
                                       const InsF& ins, const SubF& sub) {
  return enumerate_min_cost(a, b, 0, 0, del, ins, sub);
}

template <class T>
long long brute_force_unit_distance(const std::vector<T>& a,
                                    const std::vector<T>& b) {
  auto one = [](const T&) { return mixfuse::Rational(1); };
  auto sub = [](const T& x, const T& y) {
    return x == y ? mixfuse::Rational(0) : mixfuse::Rational(1);
  };
  return brute_force_min_cost(a, b, one, one, sub).num();
}

}  // namespace oracles

#endif  // MIXFUSE_TESTS_ORACLES_HPP_
