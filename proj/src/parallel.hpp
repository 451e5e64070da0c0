#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace subsvms::detail {

// Runs body(k) for k in [0, n) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < n; k += workers) body(k);
    });
}

}  // namespace subsvms::detail
