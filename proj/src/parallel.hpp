#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace patsim::detail {

/// Calls fn(i) for i in [0, n). Worker w handles w, w + W, w + 2W, ... in order.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
}

}  // namespace patsim::detail
