#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>

#include "patsim/errors.hpp"

namespace patsim {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for a named pipeline stage, derived from the master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) noexcept {
  return mix64(master ^ mix64(fnv1a64(stage) + kGoldenGamma));
}

/// Counter-based generator: the i-th output depends only on (key, stream, i), so
/// independent streams can be handed to workers without changing results.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0) noexcept
      : state_(mix64(key ^ mix64(stream * kGoldenGamma + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  __extension__ using u128 = unsigned __int128;

  /// Uniform integer in [0, bound); Lemire's multiply-and-reject.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("CounterRng::uniform: bound must be positive");
    u128 m = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle of the first `count` positions (partial shuffle).
template <class T>
void partial_shuffle(std::span<T> items, std::size_t count, CounterRng& rng) {
  const std::size_t n = items.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform(n - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

template <class T>
void shuffle(std::span<T> items, CounterRng& rng) {
  partial_shuffle(items, items.size(), rng);
}

}  // namespace patsim
