#pragma once

#include <cstddef>
#include <vector>

namespace equilib {

/// Pairwise (balanced tree) reduction of a buffer. The reduction tree depends
/// only on the element count, so the result is bit-stable for a fixed term
/// order regardless of how the terms were produced.
template <typename T>
T pairwise_reduce(std::vector<T>& terms) {
  if (terms.empty()) return T{};
  std::size_t n = terms.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
      terms[i] = terms[2 * i] + terms[2 * i + 1];
    }
    if (n % 2 == 1) terms[half] = terms[n - 1];
    n = half + n % 2;
  }
  return terms[0];
}

/// Pairwise sum of n scalar terms produced by term(k).
template <typename F>
double pairwise_sum(std::size_t n, F&& term) {
  std::vector<double> buf;
  buf.reserve(n);
  for (std::size_t k = 0; k < n; ++k) buf.push_back(term(k));
  return pairwise_reduce(buf);
}

}  // namespace equilib
