#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace abho::detail {

// Fixed-order pairwise summation; the result depends only on the input order.
template <class T>
T pairwise_sum(std::span<const T> v) {
  if (v.size() <= 8) {
    T acc{};
    for (const auto& e : v) acc += e;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace abho::detail
